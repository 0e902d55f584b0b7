use std::collections::BTreeSet;

use serde::Serialize;

use super::category::{add_scaled, op, single, AInfLike, LinComb};
use super::functor::{check_functor_relations, AInfFunctor};
use super::linear::{cohomology_category, coordinates, CohomologyCategory, LinearCategory};
use crate::error::{Error, Result};
use crate::exactlin::{rank, solve, FieldSpec, Matrix, Scalar};

/// Three-valued outcome of a finite-scale check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    /// Conjunction: any false wins, then any inconclusive.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::True,
        }
    }
}

/// Largest dimension of a degree-0 hom space searched for isomorphisms.
pub const ISO_SEARCH_MAX_DIM: usize = 4;

/// Outcome of searching `H⁰(b, c)` for an isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoSearch {
    Found { u: LinComb, v: LinComb },
    NotIsomorphic,
    Inconclusive { dimension: usize },
}

/// Searches for mutually inverse `u ∈ H⁰(b, c)`, `v ∈ H⁰(c, b)`.
///
/// An isomorphism `u` is one for which `v ↦ u∘v` and `v ↦ v∘u` are both
/// bijective, so the non-isomorphisms form the zero set of a polynomial of
/// degree at most `2·dim` in the coordinates of `u`. The candidates are a
/// grid with `2·dim + 1` values per coordinate (all of 𝔽_p when it is
/// small), which meets the complement of any such zero set; the search is
/// therefore complete for `dim ≤ ISO_SEARCH_MAX_DIM`.
pub fn find_isomorphism(lin: &LinearCategory, b: usize, c: usize) -> IsoSearch {
    let field = lin.field();
    if b == c {
        let e = lin.unit(b).clone();
        return IsoSearch::Found { u: e.clone(), v: e };
    }
    let (ub, vb) = (lin.hom_basis(b, c, 0), lin.hom_basis(c, b, 0));
    let (eb, ec) = (lin.hom_basis(b, b, 0), lin.hom_basis(c, c, 0));
    let dim = ub.len();
    if dim == 0 || vb.len() != dim || eb.len() != dim || ec.len() != dim {
        return IsoSearch::NotIsomorphic;
    }
    if dim > ISO_SEARCH_MAX_DIM {
        return IsoSearch::Inconclusive { dimension: dim };
    }
    // Products u_i∘v_j in End(c) and v_j∘u_i in End(b), as coordinate vectors.
    let mut uv = vec![vec![Vec::new(); dim]; dim];
    let mut vu = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let (Some(p), Some(q)) = (lin.compose_basis(ub[i], vb[j]), lin.compose_basis(vb[j], ub[i])) else {
                return IsoSearch::Inconclusive { dimension: dim };
            };
            uv[i][j] = coordinates(field, ec, &p);
            vu[i][j] = coordinates(field, eb, &q);
        }
    }
    let mut rhs = coordinates(field, ec, lin.unit(c));
    rhs.extend(coordinates(field, eb, lin.unit(b)));
    for u in candidates(field, dim) {
        // Row k of the system: coefficient of basis k in Σ_j v_j (u∘v_j), then in (v_j∘u).
        let mut rows = vec![vec![field.zero(); dim]; 2 * dim];
        for (i, ui) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for j in 0..dim {
                for k in 0..dim {
                    rows[k][j] = field.add(&rows[k][j], &field.mul(ui, &uv[i][j][k]));
                    rows[dim + k][j] = field.add(&rows[dim + k][j], &field.mul(ui, &vu[i][j][k]));
                }
            }
        }
        let m = Matrix::from_rows(field, rows).expect("rectangular system");
        if rank(&m) < dim {
            continue;
        }
        if let Ok(Some(v)) = solve(&m, &rhs) {
            let lift = |basis: &[usize], x: &[Scalar]| -> LinComb {
                basis.iter().zip(x).filter(|(_, c)| !c.is_zero()).map(|(g, c)| (*g, c.clone())).collect()
            };
            return IsoSearch::Found { u: lift(ub, &u), v: lift(vb, &v) };
        }
    }
    IsoSearch::NotIsomorphic
}

/// Candidate coordinate vectors, in a fixed order, skipping zero.
fn candidates(field: FieldSpec, dim: usize) -> Vec<Vec<Scalar>> {
    grid(field, dim, 2 * dim + 1)
}

/// Nonzero vectors with `per_coordinate` values per coordinate (`0, 1, −1,
/// 2, …` over ℚ), or all of `𝔽_p^dim` when that has at most 100000 points.
pub(crate) fn grid(field: FieldSpec, dim: usize, per_coordinate: usize) -> Vec<Vec<Scalar>> {
    let k = per_coordinate as i64;
    let p = field.characteristic();
    let values: Vec<Scalar> = if p == 0 {
        (0..k).map(|k| field.from_i64(if k % 2 == 1 { (k + 1) / 2 } else { -k / 2 })).collect()
    } else if p.checked_pow(dim as u32).is_some_and(|n| n <= 100_000) {
        field.elements().expect("finite field")
    } else {
        (0..k.min(p as i64)).map(|k| field.from_i64(k)).collect()
    };
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|x| !x.is_zero()));
    out
}

/// The inverse of `u ∈ H⁰(b, c)`, if `u` is an isomorphism.
pub fn two_sided_inverse(lin: &LinearCategory, b: usize, c: usize, u: &LinComb) -> Option<LinComb> {
    let field = lin.field();
    let vb = lin.hom_basis(c, b, 0);
    let (eb, ec) = (lin.hom_basis(b, b, 0), lin.hom_basis(c, c, 0));
    let mut cols = Vec::with_capacity(vb.len());
    for &v in vb {
        let v = single(v, field.one());
        let mut col = coordinates(field, ec, &lin.compose(u, &v)?);
        col.extend(coordinates(field, eb, &lin.compose(&v, u)?));
        cols.push(col);
    }
    let m = Matrix::from_columns(field, ec.len() + eb.len(), &cols).expect("columns have equal length");
    let mut rhs = coordinates(field, ec, lin.unit(c));
    rhs.extend(coordinates(field, eb, lin.unit(b)));
    let x = solve(&m, &rhs).expect("consistent shapes")?;
    Some(vb.iter().zip(x).filter(|(_, c)| !c.is_zero()).map(|(g, c)| (*g, c)).collect())
}

/// A functor between linear categories, given on basis classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFunctor {
    pub object_map: Vec<usize>,
    /// Image of each source class, over target classes.
    pub images: Vec<LinComb>,
}

impl LinearFunctor {
    pub fn apply(&self, field: FieldSpec, v: &LinComb) -> LinComb {
        let mut acc = LinComb::new();
        for (g, c) in v {
            add_scaled(field, &mut acc, c, &self.images[*g]);
        }
        acc
    }

    /// Matrix of the map `H^d(x, y) → H^d(Fx, Fy)`.
    pub fn hom_matrix(&self, source: &LinearCategory, target: &LinearCategory, x: usize, y: usize, d: i32) -> Matrix {
        let field = source.field();
        let cols: Vec<Vec<Scalar>> = source
            .hom_basis(x, y, d)
            .iter()
            .map(|&c| coordinates(field, target.hom_basis(self.object_map[x], self.object_map[y], d), &self.images[c]))
            .collect();
        Matrix::from_columns(field, target.hom_basis(self.object_map[x], self.object_map[y], d).len(), &cols)
            .expect("columns have the target dimension")
    }
}

/// First generator on which `F^1` fails to commute with `m_1`, if any.
pub fn chain_map_failure<S: AInfLike + ?Sized, T: AInfLike + ?Sized>(
    source: &S,
    target: &T,
    f: &AInfFunctor,
) -> Option<usize> {
    let field = target.field();
    for g in 0..source.generators().len() {
        let lhs = f.apply(source, target, &op(source, &[g]).unwrap_or_default());
        let mut rhs = LinComb::new();
        for (h, c) in f.component(source, target, &[g]) {
            let Some(dh) = op(target, &[h]) else { return Some(g) };
            add_scaled(field, &mut rhs, &c, &dh);
        }
        if lhs != rhs {
            return Some(g);
        }
    }
    None
}

/// `H(F)` computed against precomputed cohomology categories; checks that
/// `F^1` is a chain map and that the result respects units and composition.
pub fn h_functor_with<S: AInfLike + ?Sized, T: AInfLike + ?Sized>(
    source: &S,
    target: &T,
    f: &AInfFunctor,
    hs: &CohomologyCategory,
    ht: &CohomologyCategory,
) -> Result<LinearFunctor> {
    if let Some(g) = chain_map_failure(source, target, f) {
        return Err(Error::NotChainMap { degree: source.generators()[g].degree });
    }
    let field = source.field();
    let (ls, lt) = (hs.linear(), ht.linear());
    let om = f.object_map();
    let mut images = Vec::with_capacity(ls.classes().len());
    for (i, c) in ls.classes().iter().enumerate() {
        let image = f.apply(source, target, hs.representative(i));
        let v = if ht.covers(c.degree) {
            ht.class_of(om[c.source], om[c.target], c.degree, &image)?
        } else {
            LinComb::new()
        };
        images.push(v);
    }
    let hf = LinearFunctor { object_map: om.to_vec(), images };
    for o in 0..ls.objects().len() {
        if hf.apply(field, ls.unit(o)) != *lt.unit(om[o]) {
            return Err(Error::Internal(format!("H(F) does not preserve the unit of {}", ls.objects()[o])));
        }
    }
    for (fi, cf) in ls.classes().iter().enumerate() {
        for (gi, cg) in ls.classes().iter().enumerate().filter(|(_, c)| c.source == cf.target) {
            if !ht.covers(cf.degree) || !ht.covers(cg.degree) {
                continue;
            }
            let Some(gf) = ls.compose_basis(gi, fi) else { continue };
            let Some(rhs) = lt.compose(&hf.images[gi], &hf.images[fi]) else { continue };
            if ht.covers(cf.degree + cg.degree) && hf.apply(field, &gf) != rhs {
                return Err(Error::Internal(format!("H(F) does not respect the composite {}∘{}", cg.name, cf.name)));
            }
        }
    }
    Ok(hf)
}

/// `H(F)` on the full cohomology categories.
pub fn h_functor<S: AInfLike + ?Sized, T: AInfLike + ?Sized>(source: &S, target: &T, f: &AInfFunctor) -> Result<LinearFunctor> {
    let hs = cohomology_category(source, None)?;
    let ht = cohomology_category(target, None)?;
    h_functor_with(source, target, f, &hs, &ht)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomPairCheck {
    pub source: String,
    pub target: String,
    pub quasi_iso: bool,
    /// Degrees where the induced map on cohomology is not bijective.
    pub failing_degrees: Vec<i32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EssentialWitness {
    /// The object is `F(a)`.
    Image { object: String, preimage: String },
    /// `u: b → F(a)` and `v: F(a) → b` are mutually inverse in `H⁰`.
    Isomorphism { object: String, preimage: String, u: Vec<(String, String)>, v: Vec<(String, String)> },
    Missing { object: String, message: String },
    Inconclusive { object: String, dimension: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasiEquivalenceCertificate {
    pub verdict: Verdict,
    pub relation_arity_checked: usize,
    pub window: Option<(i32, i32)>,
    pub hom_pairs: Vec<HomPairCheck>,
    pub essential_surjectivity: Vec<EssentialWitness>,
}

/// Decides whether `f` is a quasi-equivalence: `F^1` a quasi-isomorphism on
/// every hom pair and `H⁰(F)` essentially surjective. With a window, only
/// degrees in it are compared (it must contain 0).
pub fn is_quasi_equivalence<S: AInfLike + ?Sized, T: AInfLike + ?Sized>(
    source: &S,
    target: &T,
    f: &AInfFunctor,
    window: Option<(i32, i32)>,
) -> Result<QuasiEquivalenceCertificate> {
    let arity = 2.min(source.arity_bound()).min(target.arity_bound());
    let report = check_functor_relations(source, target, f, arity)?;
    if let Some(v) = report.violations.first() {
        return Err(Error::Relations(format!("functor relation fails at arity {} on ({})", v.arity, v.tuple.join(", "))));
    }
    let hs = cohomology_category(source, window)?;
    let ht = cohomology_category(target, window)?;
    let hf = h_functor_with(source, target, f, &hs, &ht)?;
    let (ls, lt) = (hs.linear(), ht.linear());
    let om = f.object_map();
    let n_src = source.objects().len();
    let mut hom_pairs = Vec::new();
    for x in 0..n_src {
        for y in 0..n_src {
            let degrees: BTreeSet<i32> =
                ls.hom_dims(x, y).into_keys().chain(lt.hom_dims(om[x], om[y]).into_keys()).collect();
            let failing: Vec<i32> = degrees
                .into_iter()
                .filter(|&d| {
                    let m = hf.hom_matrix(ls, lt, x, y, d);
                    m.rows() != m.cols() || rank(&m) != m.cols()
                })
                .collect();
            hom_pairs.push(HomPairCheck {
                source: source.objects()[x].clone(),
                target: source.objects()[y].clone(),
                quasi_iso: failing.is_empty(),
                failing_degrees: failing,
            });
        }
    }
    let names = |v: &LinComb| -> Vec<(String, String)> {
        v.iter().map(|(c, s)| (lt.classes()[*c].name.clone(), s.to_string())).collect()
    };
    let mut essential = Vec::new();
    for b in 0..target.objects().len() {
        let object = target.objects()[b].clone();
        if let Some(a) = om.iter().position(|&o| o == b) {
            essential.push(EssentialWitness::Image { object, preimage: source.objects()[a].clone() });
            continue;
        }
        let mut witness = None;
        let mut inconclusive = None;
        for a in 0..n_src {
            match find_isomorphism(lt, b, om[a]) {
                IsoSearch::Found { u, v } => {
                    witness = Some(EssentialWitness::Isomorphism {
                        object: object.clone(),
                        preimage: source.objects()[a].clone(),
                        u: names(&u),
                        v: names(&v),
                    });
                    break;
                }
                IsoSearch::Inconclusive { dimension } => inconclusive = inconclusive.max(Some(dimension)),
                IsoSearch::NotIsomorphic => {}
            }
        }
        essential.push(witness.unwrap_or_else(|| match inconclusive {
            Some(dimension) => EssentialWitness::Inconclusive { object: object.clone(), dimension },
            None => EssentialWitness::Missing { message: format!("no H⁰-isomorph of {object} in image"), object },
        }));
    }
    let homs_ok = hom_pairs.iter().all(|p| p.quasi_iso);
    let ess = essential.iter().fold(Verdict::True, |acc, w| {
        acc.and(match w {
            EssentialWitness::Missing { .. } => Verdict::False,
            EssentialWitness::Inconclusive { .. } => Verdict::Inconclusive,
            _ => Verdict::True,
        })
    });
    Ok(QuasiEquivalenceCertificate {
        verdict: Verdict::from_bool(homs_ok).and(ess),
        relation_arity_checked: arity,
        window,
        hom_pairs,
        essential_surjectivity: essential,
    })
}
