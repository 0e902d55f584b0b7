use std::collections::{BTreeMap, BTreeSet};

use super::category::{hom_complex, multilinear, op, single, AInfLike, LinComb};
use crate::error::{Error, Result};
use crate::exactlin::{to_dense, to_sparse, FieldSpec, Scalar};
use crate::graded::{cohomology, cohomology_in, Cohomology};

/// A basis class of a graded hom space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassBasis {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub degree: i32,
}

/// A graded linear category given by structure constants on basis classes.
/// Products that could not be computed are recorded in `missing` and
/// excluded from every check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCategory {
    field: FieldSpec,
    objects: Vec<String>,
    classes: Vec<ClassBasis>,
    homs: Vec<Vec<BTreeMap<i32, Vec<usize>>>>,
    units: Vec<LinComb>,
    composition: BTreeMap<(usize, usize), LinComb>,
    missing: BTreeSet<(usize, usize)>,
}

impl LinearCategory {
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn classes(&self) -> &[ClassBasis] {
        &self.classes
    }

    pub fn hom_basis(&self, source: usize, target: usize, degree: i32) -> &[usize] {
        self.homs[source][target].get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn hom_dims(&self, source: usize, target: usize) -> BTreeMap<i32, usize> {
        self.homs[source][target].iter().map(|(d, v)| (*d, v.len())).collect()
    }

    pub fn unit(&self, object: usize) -> &LinComb {
        &self.units[object]
    }

    /// Composable class pairs whose product is unknown.
    pub fn missing_products(&self) -> &BTreeSet<(usize, usize)> {
        &self.missing
    }

    /// `g ∘ f` on basis classes; `None` if that product is unknown.
    pub fn compose_basis(&self, g: usize, f: usize) -> Option<LinComb> {
        if self.missing.contains(&(g, f)) {
            return None;
        }
        Some(self.composition.get(&(g, f)).cloned().unwrap_or_default())
    }

    pub fn compose(&self, g: &LinComb, f: &LinComb) -> Option<LinComb> {
        multilinear(self.field, &[g.clone(), f.clone()], |x| self.compose_basis(x[0], x[1]))
    }

    /// Checks unit laws on all basis classes and associativity on all
    /// composable basis triples, skipping unknown products.
    pub fn check_axioms(&self) -> Result<()> {
        let one = self.field.one();
        for (i, c) in self.classes.iter().enumerate() {
            let x = single(i, one.clone());
            for (side, value) in [("left", self.compose(&self.units[c.target], &x)), ("right", self.compose(&x, &self.units[c.source]))] {
                if value.is_some_and(|v| v != x) {
                    return Err(Error::Internal(format!("{side} unit law fails on {}", c.name)));
                }
            }
        }
        for (f, cf) in self.classes.iter().enumerate() {
            for (g, cg) in self.classes.iter().enumerate().filter(|(_, c)| c.source == cf.target) {
                let Some(gf) = self.compose_basis(g, f) else { continue };
                for (h, _) in self.classes.iter().enumerate().filter(|(_, c)| c.source == cg.target) {
                    let Some(hg) = self.compose_basis(h, g) else { continue };
                    let lhs = self.compose(&single(h, one.clone()), &gf);
                    let rhs = self.compose(&hg, &single(f, one.clone()));
                    if let (Some(l), Some(r)) = (lhs, rhs) {
                        if l != r {
                            return Err(Error::Internal(format!(
                                "induced composition is not associative on ({}, {}, {})",
                                self.classes[h].name, cg.name, cf.name
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct HomData {
    cohomology: Cohomology,
    /// Generator ids of the cochain basis, per degree.
    cochains: BTreeMap<i32, Vec<usize>>,
    positions: BTreeMap<usize, usize>,
}

/// `H(A)` (or a window of it) together with the representatives needed to
/// compute induced maps.
#[derive(Debug, Clone)]
pub struct CohomologyCategory {
    linear: LinearCategory,
    representatives: Vec<LinComb>,
    homs: BTreeMap<(usize, usize), HomData>,
    window: Option<(i32, i32)>,
}

impl CohomologyCategory {
    pub fn linear(&self) -> &LinearCategory {
        &self.linear
    }

    pub fn into_linear(self) -> LinearCategory {
        self.linear
    }

    pub fn window(&self) -> Option<(i32, i32)> {
        self.window
    }

    /// Whether `degree` lies in the computed range. Without a window every
    /// degree counts; hom spaces vanish outside their support.
    pub fn covers(&self, degree: i32) -> bool {
        self.window.is_none_or(|(lo, hi)| lo <= degree && degree <= hi)
    }

    /// Representative cocycle of a class, over base generators.
    pub fn representative(&self, class: usize) -> &LinComb {
        &self.representatives[class]
    }

    pub fn hom_cohomology(&self, source: usize, target: usize) -> &Cohomology {
        &self.homs[&(source, target)].cohomology
    }

    /// Expresses a cocycle of `hom(source, target)` of the given degree in
    /// the class basis.
    pub fn class_of(&self, source: usize, target: usize, degree: i32, cocycle: &LinComb) -> Result<LinComb> {
        if !self.covers(degree) {
            return Err(Error::Input(format!("degree {degree} lies outside the computed window")));
        }
        let data = &self.homs[&(source, target)];
        let Some(basis) = data.cochains.get(&degree) else {
            return if cocycle.is_empty() {
                Ok(LinComb::new())
            } else {
                Err(Error::Internal("cocycle has terms outside its hom space".into()))
            };
        };
        let mut dense = vec![self.linear.field.zero(); basis.len()];
        for (g, c) in cocycle {
            let pos = data
                .positions
                .get(g)
                .filter(|&&p| basis.get(p) == Some(g))
                .ok_or_else(|| Error::Internal("cocycle has terms outside its hom space".into()))?;
            dense[*pos] = c.clone();
        }
        let Some(h) = data.cohomology.degree(degree) else {
            return Ok(LinComb::new());
        };
        let coords = h.class_of(self.linear.field, &dense)?;
        let ids = self.linear.hom_basis(source, target, degree);
        Ok(to_sparse(&coords).into_iter().map(|(i, c)| (ids[i], c)).collect())
    }

    /// Coboundaries spanning `d(hom^{degree−1})` inside `hom(source, target)`.
    fn coboundaries(&self, source: usize, target: usize, degree: i32, cat: &dyn Fn(usize) -> Option<LinComb>) -> Vec<LinComb> {
        let data = &self.homs[&(source, target)];
        data.cochains
            .get(&(degree - 1))
            .map(|ids| ids.iter().filter_map(|&g| cat(g)).filter(|v| !v.is_empty()).collect())
            .unwrap_or_default()
    }
}

/// Densifies a combination over `basis` (which must contain its support).
pub fn coordinates(field: FieldSpec, basis: &[usize], v: &LinComb) -> Vec<Scalar> {
    let pos: BTreeMap<usize, usize> = basis.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    to_dense(field, &v.iter().map(|(g, c)| (pos[g], c.clone())).collect::<Vec<_>>(), basis.len())
}

/// `H(A)`: cohomology of every hom complex with the composition induced by
/// `m_2`. With a window, only degrees in `lo..=hi` are computed and products
/// landing outside it are recorded as missing.
pub fn cohomology_category<C: AInfLike + ?Sized>(cat: &C, window: Option<(i32, i32)>) -> Result<CohomologyCategory> {
    let field = cat.field();
    let n_obj = cat.objects().len();
    if let Some((lo, hi)) = window {
        if lo > 0 || hi < 0 {
            return Err(Error::Input("the degree window must contain 0 to hold the units".into()));
        }
    }
    let mut classes = Vec::new();
    let mut representatives = Vec::new();
    let mut homs_data = BTreeMap::new();
    let mut homs = vec![vec![BTreeMap::new(); n_obj]; n_obj];
    for s in 0..n_obj {
        for t in 0..n_obj {
            let (complex, cochains) = hom_complex(cat, s, t)?;
            let coh = match window {
                Some((lo, hi)) => cohomology_in(&complex, lo, hi)?,
                None => cohomology(&complex)?,
            };
            for d in coh.computed_degrees() {
                let h = coh.degree(d).unwrap();
                let mut ids = Vec::new();
                for (rep, label) in h.representatives.iter().zip(&h.labels) {
                    ids.push(classes.len());
                    classes.push(ClassBasis { name: label.clone(), source: s, target: t, degree: d });
                    let basis = &cochains[&d];
                    representatives.push(to_sparse(rep).into_iter().map(|(i, c)| (basis[i], c)).collect::<LinComb>());
                }
                if !ids.is_empty() {
                    homs[s][t].insert(d, ids);
                }
            }
            let positions = cochains.values().flat_map(|ids| ids.iter().enumerate().map(|(i, g)| (*g, i))).collect();
            homs_data.insert((s, t), HomData { cohomology: coh, cochains, positions });
        }
    }
    let mut out = CohomologyCategory {
        linear: LinearCategory {
            field,
            objects: cat.objects().to_vec(),
            classes,
            homs,
            units: Vec::new(),
            composition: BTreeMap::new(),
            missing: BTreeSet::new(),
        },
        representatives,
        homs: homs_data,
        window,
    };
    for o in 0..n_obj {
        let unit = out.class_of(o, o, 0, &single(cat.unit(o), field.one()))?;
        out.linear.units.push(unit);
    }
    let m2 = |a: &LinComb, b: &LinComb| multilinear(field, &[a.clone(), b.clone()], |x| op(cat, x));
    let classes = out.linear.classes.clone();
    for (f, cf) in classes.iter().enumerate() {
        for (g, cg) in classes.iter().enumerate().filter(|(_, c)| c.source == cf.target) {
            let deg = cg.degree + cf.degree;
            let product = if out.covers(deg) { m2(&out.representatives[g], &out.representatives[f]) } else { None };
            match product {
                Some(p) => {
                    let v = out.class_of(cf.source, cg.target, deg, &p)?;
                    if !v.is_empty() {
                        out.linear.composition.insert((g, f), v);
                    }
                }
                None => {
                    out.linear.missing.insert((g, f));
                }
            }
        }
    }
    check_well_defined(cat, &out)?;
    out.linear.check_axioms()?;
    Ok(out)
}

/// Products of a coboundary with a representative must be coboundaries.
fn check_well_defined<C: AInfLike + ?Sized>(cat: &C, h: &CohomologyCategory) -> Result<()> {
    let field = cat.field();
    let d = |g: usize| op(cat, &[g]);
    let n_obj = cat.objects().len();
    let classes = h.linear.classes();
    for s in 0..n_obj {
        for t in 0..n_obj {
            let degrees: BTreeSet<i32> = h.homs[&(s, t)].cochains.keys().map(|d| d + 1).collect();
            for deg in degrees {
                for beta in h.coboundaries(s, t, deg, &d) {
                    for (i, c) in classes.iter().enumerate() {
                        let rep = &h.representatives[i];
                        let cases = [
                            (c.target == s, c.source, t, rep, &beta, true),
                            (c.source == t, s, c.target, rep, &beta, false),
                        ];
                        for (applies, src, tgt, rep, beta, beta_outer) in cases {
                            let total = deg + c.degree;
                            if !applies || !h.covers(total) {
                                continue;
                            }
                            let args = if beta_outer { [beta.clone(), rep.clone()] } else { [rep.clone(), beta.clone()] };
                            let Some(p) = multilinear(field, &args, |x| op(cat, x)) else { continue };
                            if !h.class_of(src, tgt, total, &p)?.is_empty() {
                                return Err(Error::Internal(format!(
                                    "induced composition depends on the representative of {}",
                                    c.name
                                )));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// `H⁰(A)`, the degree-zero part of the cohomology category.
pub fn h0_category<C: AInfLike + ?Sized>(cat: &C) -> Result<CohomologyCategory> {
    cohomology_category(cat, Some((0, 0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainf::category::AInfCategory;

    #[test]
    fn contractible_summand_has_trivial_cohomology() {
        let a = AInfCategory::builder(FieldSpec::rationals())
            .object("X")
            .morphism("x", "X", "X", 0)
            .morphism("y", "X", "X", 1)
            .op_i(&["x"], &[("y", 1)])
            .build()
            .unwrap();
        let h = cohomology_category(&a, None).unwrap();
        let lin = h.linear();
        assert_eq!(lin.classes().len(), 1);
        assert_eq!(lin.hom_dims(0, 0), BTreeMap::from([(0, 1)]));
        assert_eq!(lin.unit(0), &single(0, FieldSpec::rationals().one()));
    }

    #[test]
    fn m3_example_cohomology_dims() {
        let a = AInfCategory::builder(FieldSpec::rationals())
            .object("X")
            .morphism("x", "X", "X", 1)
            .morphism("y", "X", "X", 2)
            .op_i(&["x", "x", "x"], &[("y", 1)])
            .build()
            .unwrap();
        let h = cohomology_category(&a, None).unwrap();
        assert_eq!(h.linear().hom_dims(0, 0), BTreeMap::from([(0, 1), (1, 1), (2, 1)]));
        let x = h.linear().hom_basis(0, 0, 1)[0];
        assert!(h.linear().compose_basis(x, x).unwrap().is_empty());
    }

    #[test]
    fn zero_differential_keeps_composition() {
        let a = AInfCategory::builder(FieldSpec::prime(3))
            .objects(&["1", "2", "3"])
            .morphism("f", "1", "2", 0)
            .morphism("g", "2", "3", 1)
            .morphism("h", "1", "3", 1)
            .op_i(&["g", "f"], &[("h", 2)])
            .build()
            .unwrap();
        let lin = cohomology_category(&a, None).unwrap().into_linear();
        let name = |n: &str| lin.classes().iter().position(|c| c.name == n).unwrap();
        let gf = lin.compose_basis(name("[g]"), name("[f]")).unwrap();
        assert_eq!(gf, single(name("[h]"), FieldSpec::prime(3).from_i64(2)));
    }

    #[test]
    fn non_associative_input_is_rejected() {
        let a = AInfCategory::builder(FieldSpec::rationals())
            .objects(&["1", "2", "3", "4"])
            .morphism("f", "1", "2", 0)
            .morphism("g", "2", "3", 0)
            .morphism("h", "3", "4", 0)
            .morphism("gf", "1", "3", 0)
            .morphism("hg", "2", "4", 0)
            .morphism("hgf", "1", "4", 0)
            .op_i(&["g", "f"], &[("gf", 1)])
            .op_i(&["h", "g"], &[("hg", 1)])
            .op_i(&["h", "gf"], &[("hgf", 1)])
            .op_i(&["hg", "f"], &[("hgf", 2)])
            .build()
            .unwrap();
        assert!(matches!(cohomology_category(&a, None), Err(Error::Internal(_))));
    }
}
