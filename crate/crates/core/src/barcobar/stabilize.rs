use std::collections::BTreeMap;

use serde::Serialize;

use super::bar::{bar, bar_unchecked};
use super::cobar::{cobar, TruncatedDGCategory};
use super::maps::{check_stage_inclusion, InclusionCheck};
use crate::ainf::{hom_complex, AInfCategory, AInfLike};
use crate::error::{Error, Result};
use crate::exactlin::{rank, Matrix, Scalar};
use crate::graded::{cohomology_in, Cohomology};

/// Cohomology of one hom pair in one degree, tracked across stages.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizationEntry {
    pub source: String,
    pub target: String,
    pub degree: i32,
    /// `dim H^degree` at each computed stage.
    pub dims: Vec<usize>,
    /// Whether the inclusion of stage `i` into stage `i + 1` is an
    /// isomorphism on `H^degree`.
    pub maps_iso: Vec<bool>,
    /// Stages `L` with isomorphisms `H(L−1) → H(L) → H(L+1)`.
    pub certified_at: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizationReport {
    pub window: (i32, i32),
    pub stages: Vec<usize>,
    pub entries: Vec<StabilizationEntry>,
    pub inclusions: Vec<InclusionCheck>,
}

impl StabilizationReport {
    /// Every degree of every hom pair is certified at `l`.
    pub fn certified_at(&self, l: usize) -> bool {
        self.entries.iter().all(|e| e.certified_at.contains(&l))
    }

    /// Smallest stage certified for every entry.
    pub fn stabilized_at(&self) -> Option<usize> {
        self.stages.iter().copied().find(|&l| self.certified_at(l))
    }

    pub fn dims_at(&self, l: usize) -> BTreeMap<(String, String, i32), usize> {
        let i = self.stages.iter().position(|&s| s == l);
        self.entries
            .iter()
            .map(|e| ((e.source.clone(), e.target.clone(), e.degree), i.map_or(0, |i| e.dims[i])))
            .collect()
    }
}

/// Stages `1..=l_max` of the rectification.
pub fn stages(a: &AInfCategory, l_max: usize) -> Result<Vec<TruncatedDGCategory>> {
    if l_max == 0 {
        return Err(Error::Input("the length bound must be at least 1".into()));
    }
    bar(a, l_max)?;
    (1..=l_max).map(|l| cobar(&bar_unchecked(a, l)?)).collect()
}

struct PairCohomology {
    cohomology: Cohomology,
    cochains: BTreeMap<i32, Vec<usize>>,
}

fn pair_cohomology(stage: &TruncatedDGCategory, x: usize, y: usize, window: (i32, i32)) -> Result<PairCohomology> {
    let (complex, cochains) = hom_complex(stage, x, y)?;
    Ok(PairCohomology { cohomology: cohomology_in(&complex, window.0, window.1)?, cochains })
}

/// Matrix of `H^d(lower) → H^d(upper)` induced by the stage inclusion.
fn induced(
    lower: &TruncatedDGCategory,
    upper: &TruncatedDGCategory,
    lo: &PairCohomology,
    up: &PairCohomology,
    d: i32,
) -> Result<Matrix> {
    let field = lower.field();
    let (Some(hl), Some(hu)) = (lo.cohomology.degree(d), up.cohomology.degree(d)) else {
        return Ok(Matrix::zeros(field, 0, 0));
    };
    let empty = Vec::new();
    let lower_basis = lo.cochains.get(&d).unwrap_or(&empty);
    let upper_basis = up.cochains.get(&d).unwrap_or(&empty);
    let position: BTreeMap<usize, usize> = upper_basis.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    let mut columns = Vec::new();
    for rep in &hl.representatives {
        let mut v: Vec<Scalar> = vec![field.zero(); upper_basis.len()];
        for (i, c) in rep.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let h = upper
                .same_generator(lower, lower_basis[i])
                .ok_or_else(|| Error::Internal("stage word missing from the longer stage".into()))?;
            v[position[&h]] = c.clone();
        }
        columns.push(hu.class_of(field, &v)?);
    }
    Matrix::from_columns(field, hu.dim(), &columns)
}

/// Cohomology of every hom complex of stages `1..=l_max` in `window`,
/// compared through the stage inclusions.
pub fn stabilization_report(a: &AInfCategory, l_max: usize, window: (i32, i32)) -> Result<StabilizationReport> {
    if l_max < 2 {
        return Err(Error::Input("stabilization needs at least two stages".into()));
    }
    if window.0 > window.1 {
        return Err(Error::Input("empty degree window".into()));
    }
    let stages = stages(a, l_max)?;
    let objects = a.objects();
    let mut inclusions = Vec::new();
    for pair in stages.windows(2) {
        inclusions.push(check_stage_inclusion(&pair[0], &pair[1])?);
    }
    let mut entries = Vec::new();
    for x in 0..objects.len() {
        for y in 0..objects.len() {
            let per_stage = stages.iter().map(|s| pair_cohomology(s, x, y, window)).collect::<Result<Vec<_>>>()?;
            for d in window.0..=window.1 {
                let dims: Vec<usize> = per_stage.iter().map(|p| p.cohomology.dim(d)).collect();
                let mut maps_iso = Vec::new();
                for i in 0..stages.len() - 1 {
                    let m = induced(&stages[i], &stages[i + 1], &per_stage[i], &per_stage[i + 1], d)?;
                    maps_iso.push(dims[i] == dims[i + 1] && rank(&m) == dims[i]);
                }
                let certified_at = (1..stages.len() - 1).filter(|&i| maps_iso[i - 1] && maps_iso[i]).map(|i| i + 1).collect();
                entries.push(StabilizationEntry {
                    source: objects[x].clone(),
                    target: objects[y].clone(),
                    degree: d,
                    dims,
                    maps_iso,
                    certified_at,
                });
            }
        }
    }
    Ok(StabilizationReport { window, stages: (1..=l_max).collect(), entries, inclusions })
}
