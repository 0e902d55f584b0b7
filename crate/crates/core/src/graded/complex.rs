use std::collections::BTreeMap;

use serde::Serialize;

use super::space::{GradedLinearMap, GradedVectorSpace};
use crate::error::{Error, Result};
use crate::exactlin::{kernel_basis, rank, to_dense, to_sparse, Echelon, FieldSpec, Matrix, Scalar};

/// A bounded cochain complex: a graded space, a degree +1 differential, and
/// the degree window `[lo, hi]` that contains all of its data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CochainComplex {
    space: GradedVectorSpace,
    d: GradedLinearMap,
    window: (i32, i32),
}

impl CochainComplex {
    pub fn new(space: GradedVectorSpace, d_blocks: BTreeMap<i32, Matrix>, window: (i32, i32)) -> Result<Self> {
        if window.0 > window.1 + 1 {
            return Err(Error::Input(format!("empty degree window [{}, {}]", window.0, window.1)));
        }
        if let Some(d) = space.degrees().find(|d| *d < window.0 || *d > window.1) {
            return Err(Error::Input(format!("degree {d} lies outside the window [{}, {}]", window.0, window.1)));
        }
        let d = GradedLinearMap::new(space.clone(), space.clone(), 1, d_blocks)?;
        Ok(CochainComplex { space, d, window })
    }

    /// Window defaults to the support of the space (`[0, 0]` for the zero space).
    pub fn with_support(space: GradedVectorSpace, d_blocks: BTreeMap<i32, Matrix>) -> Result<Self> {
        let window = (space.min_degree().unwrap_or(0), space.max_degree().unwrap_or(0));
        Self::new(space, d_blocks, window)
    }

    /// Complex from `(label, degree)` basis entries and `(from, to, coeff)`
    /// differential entries, both given by label.
    pub fn from_labels(
        field: FieldSpec,
        basis: &[(&str, i32)],
        differential: &[(&str, &str, Scalar)],
    ) -> Result<Self> {
        let space = GradedVectorSpace::from_basis(field, basis.iter().map(|(l, d)| (l.to_string(), *d)));
        let locate = |label: &str| -> Result<(i32, usize)> {
            let deg = basis
                .iter()
                .find(|(l, _)| *l == label)
                .map(|(_, d)| *d)
                .ok_or_else(|| Error::Input(format!("unknown basis label {label:?}")))?;
            let idx = space.labels(deg).iter().position(|l| l == label).unwrap();
            Ok((deg, idx))
        };
        let mut triplets: BTreeMap<i32, Vec<(usize, usize, Scalar)>> = BTreeMap::new();
        for (from, to, c) in differential {
            let (df, i) = locate(from)?;
            let (dt, j) = locate(to)?;
            if dt != df + 1 {
                return Err(Error::Input(format!("differential {from} -> {to} does not raise degree by one")));
            }
            triplets.entry(df).or_default().push((j, i, c.clone()));
        }
        let mut blocks = BTreeMap::new();
        for (deg, t) in triplets {
            blocks.insert(deg, Matrix::from_triplets(field, space.dim(deg + 1), space.dim(deg), t)?);
        }
        Self::with_support(space, blocks)
    }

    pub fn field(&self) -> FieldSpec {
        self.space.field()
    }

    pub fn space(&self) -> &GradedVectorSpace {
        &self.space
    }

    pub fn differential(&self) -> &GradedLinearMap {
        &self.d
    }

    /// Differential block from degree `degree` to `degree + 1`.
    pub fn d(&self, degree: i32) -> Matrix {
        self.d.block(degree)
    }

    pub fn window(&self) -> (i32, i32) {
        self.window
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.space.degrees().map(|d| sign(d) * self.space.dim(d) as i64).sum()
    }
}

fn sign(d: i32) -> i64 {
    if d.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Degrees where `d∘d` fails to vanish, with the offending entries by label.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DifferentialReport {
    pub violations: Vec<DifferentialViolation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DifferentialViolation {
    pub degree: i32,
    /// `(source label, target label, coefficient of d∘d)`
    pub entries: Vec<(String, String, String)>,
}

impl DifferentialReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_differential(c: &CochainComplex) -> DifferentialReport {
    let mut violations = Vec::new();
    for deg in c.space.degrees() {
        let dd = c.d(deg + 1).mul(&c.d(deg)).expect("block shapes are validated");
        if dd.is_zero() {
            continue;
        }
        let entries = dd
            .entries()
            .into_iter()
            .map(|(i, j, v)| {
                (c.space.labels(deg)[j].clone(), c.space.labels(deg + 2)[i].clone(), v.to_string())
            })
            .collect();
        violations.push(DifferentialViolation { degree: deg, entries });
    }
    DifferentialReport { violations }
}

/// Cohomology of one degree: representative cocycles and the data needed
/// to express any cocycle in the chosen class basis.
#[derive(Debug, Clone)]
pub struct DegreeCohomology {
    pub representatives: Vec<Vec<Scalar>>,
    pub labels: Vec<String>,
    reducer: Echelon,
    cochain_dim: usize,
}

impl DegreeCohomology {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Coordinates of the class of `cocycle` in the representative basis.
    /// Fails if `cocycle` is not in the span of representatives and coboundaries.
    pub fn class_of(&self, field: FieldSpec, cocycle: &[Scalar]) -> Result<Vec<Scalar>> {
        if cocycle.len() != self.cochain_dim {
            return Err(Error::DimensionMismatch("cocycle has the wrong length".into()));
        }
        let (rem, used) = self.reducer.reduce(to_sparse(cocycle));
        if !rem.is_empty() {
            return Err(Error::Internal("vector is not a cocycle".into()));
        }
        Ok(to_dense(field, &used, self.dim()))
    }

    pub fn is_coboundary(&self, field: FieldSpec, cocycle: &[Scalar]) -> Result<bool> {
        Ok(self.class_of(field, cocycle)?.iter().all(Scalar::is_zero))
    }
}

/// Cohomology of a complex over a range of degrees.
#[derive(Debug, Clone)]
pub struct Cohomology {
    field: FieldSpec,
    degrees: BTreeMap<i32, DegreeCohomology>,
}

impl Cohomology {
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Dimension in `degree`, zero for degrees that were not computed.
    pub fn dim(&self, degree: i32) -> usize {
        self.degrees.get(&degree).map_or(0, DegreeCohomology::dim)
    }

    pub fn degree(&self, degree: i32) -> Option<&DegreeCohomology> {
        self.degrees.get(&degree)
    }

    pub fn computed_degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.degrees.keys().copied()
    }

    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.degrees.iter().filter(|(_, h)| h.dim() > 0).map(|(d, h)| (*d, h.dim())).collect()
    }

    pub fn space(&self) -> GradedVectorSpace {
        GradedVectorSpace::new(self.field, self.degrees.iter().map(|(d, h)| (*d, h.labels.clone())).collect())
    }
}

/// Cohomology over the complex's whole window.
pub fn cohomology(c: &CochainComplex) -> Result<Cohomology> {
    let report = verify_differential(c);
    if !report.is_valid() {
        return Err(Error::InvalidComplex { degrees: report.violations.iter().map(|v| v.degree).collect() });
    }
    Ok(cohomology_unchecked(c, c.window.0, c.window.1))
}

/// Cohomology in degrees `lo..=hi` only; `d∘d = 0` is checked on the
/// degrees that feed into the range.
pub fn cohomology_in(c: &CochainComplex, lo: i32, hi: i32) -> Result<Cohomology> {
    let mut bad = Vec::new();
    for deg in lo - 1..=hi - 1 {
        if !c.d(deg + 1).mul(&c.d(deg))?.is_zero() {
            bad.push(deg);
        }
    }
    if !bad.is_empty() {
        return Err(Error::InvalidComplex { degrees: bad });
    }
    Ok(cohomology_unchecked(c, lo, hi))
}

fn cohomology_unchecked(c: &CochainComplex, lo: i32, hi: i32) -> Cohomology {
    let field = c.field();
    let mut degrees = BTreeMap::new();
    for deg in lo..=hi {
        let n = c.space.dim(deg);
        let mut reducer = Echelon::new(field);
        for col in c.d(deg - 1).transpose().sparse_rows() {
            reducer.insert(col, Vec::new());
        }
        let mut representatives = Vec::new();
        let mut labels = Vec::new();
        for z in kernel_basis(&c.d(deg)) {
            let (rem, _) = reducer.reduce(to_sparse(&z));
            let tag = vec![(representatives.len(), field.one())];
            if reducer.insert(rem.clone(), tag) {
                let lead = rem[0].0;
                labels.push(format!("[{}]", c.space.labels(deg)[lead]));
                representatives.push(to_dense(field, &rem, n));
            }
        }
        degrees.insert(deg, DegreeCohomology { representatives, labels, reducer, cochain_dim: n });
    }
    Cohomology { field, degrees }
}

/// First degree in `degrees` where `f∘d ≠ d∘f`, if any.
pub fn chain_map_defect(
    source: &CochainComplex,
    target: &CochainComplex,
    f: &GradedLinearMap,
    degrees: impl IntoIterator<Item = i32>,
) -> Result<Option<i32>> {
    if f.shift() != 0 {
        return Err(Error::Input("chain maps have degree 0".into()));
    }
    for deg in degrees {
        let lhs = f.block(deg + 1).mul(&source.d(deg))?;
        let rhs = target.d(deg).mul(&f.block(deg))?;
        if lhs != rhs {
            return Ok(Some(deg));
        }
    }
    Ok(None)
}

fn union_window(a: &CochainComplex, b: &CochainComplex) -> (i32, i32) {
    (a.window.0.min(b.window.0), a.window.1.max(b.window.1))
}

/// The map on cohomology induced by a chain map, in the chosen class bases.
pub fn induced_map_on_cohomology(
    source: &CochainComplex,
    target: &CochainComplex,
    f: &GradedLinearMap,
) -> Result<GradedLinearMap> {
    let (lo, hi) = union_window(source, target);
    if let Some(degree) = chain_map_defect(source, target, f, lo - 1..=hi)? {
        return Err(Error::NotChainMap { degree });
    }
    let hs = cohomology_in(source, lo, hi)?;
    let ht = cohomology_in(target, lo, hi)?;
    induced_map_with(&hs, &ht, f, lo, hi)
}

/// Induced map from precomputed cohomologies, for degrees `lo..=hi`.
/// The caller is responsible for `f` being a chain map on those degrees.
pub fn induced_map_with(
    hs: &Cohomology,
    ht: &Cohomology,
    f: &GradedLinearMap,
    lo: i32,
    hi: i32,
) -> Result<GradedLinearMap> {
    let field = hs.field;
    let mut blocks = BTreeMap::new();
    for deg in lo..=hi {
        let (Some(s), Some(t)) = (hs.degree(deg), ht.degree(deg)) else { continue };
        let block = f.block(deg);
        let columns = s
            .representatives
            .iter()
            .map(|rep| t.class_of(field, &block.mul_vec(rep)?))
            .collect::<Result<Vec<_>>>()?;
        blocks.insert(deg, Matrix::from_columns(field, t.dim(), &columns)?);
    }
    let restrict = |h: &Cohomology| {
        GradedVectorSpace::new(
            field,
            h.degrees.iter().filter(|(d, _)| (lo..=hi).contains(*d)).map(|(d, x)| (*d, x.labels.clone())).collect(),
        )
    };
    GradedLinearMap::new(restrict(hs), restrict(ht), 0, blocks)
}

/// Whether an induced map is invertible in every degree.
pub fn is_isomorphism(h: &GradedLinearMap) -> bool {
    let degrees: std::collections::BTreeSet<i32> = h.source().degrees().chain(h.target().degrees()).collect();
    degrees.into_iter().all(|d| {
        let (s, t) = (h.source().dim(d), h.target().dim(d));
        s == t && rank(&h.block(d)) == s
    })
}

pub fn is_quasi_iso(source: &CochainComplex, target: &CochainComplex, f: &GradedLinearMap) -> Result<bool> {
    Ok(is_isomorphism(&induced_map_on_cohomology(source, target, f)?))
}
