//! Fibration predicates: surjectivity of `F^1` plus the isofibration
//! condition on `H⁰`, and isofibrations of finite and linear categories.

use serde::Serialize;

use crate::ainf::{
    check_functor_relations, coordinates, find_isomorphism, h0_category, h_functor_with, hom_complex, is_quasi_equivalence,
    single, two_sided_inverse, AInfFunctor, AInfLike, IsoSearch, LinComb, LinearCategory, LinearFunctor, Verdict,
    ISO_SEARCH_MAX_DIM,
};
use crate::error::{Error, Result};
use crate::exactlin::{kernel_basis, rank, solve, Matrix, Scalar};
use crate::relcat::{check_relative_functor, RelativeFunctor};

/// An isomorphism `φ: F(X) → Z` with no isomorphism `X → Z̃` over it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct LiftFailure {
    pub source_object: String,
    pub target_object: String,
    /// `φ` as (basis name, coefficient) pairs, or a single morphism name.
    pub iso: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsofibrationReport {
    pub verdict: Verdict,
    pub failures: Vec<LiftFailure>,
    /// `(X, Z)` pairs that could not be decided.
    pub inconclusive: Vec<(String, String)>,
}

impl IsofibrationReport {
    fn finish(mut failures: Vec<LiftFailure>, mut inconclusive: Vec<(String, String)>) -> Self {
        failures.sort();
        inconclusive.sort();
        let verdict = if !failures.is_empty() {
            Verdict::False
        } else if !inconclusive.is_empty() {
            Verdict::Inconclusive
        } else {
            Verdict::True
        };
        IsofibrationReport { verdict, failures, inconclusive }
    }
}

/// Isomorphism lifting for a functor of finite categories, by table lookup.
pub fn is_isofibration_finite(f: &RelativeFunctor) -> Result<IsofibrationReport> {
    let report = check_relative_functor(f);
    if !report.is_functor() {
        return Err(Error::Precondition(format!("not a functor: {:?}", report.violations[0])));
    }
    let (s, t) = (f.source.cat(), f.target.cat());
    let mut failures = Vec::new();
    for x in 0..s.objects().len() {
        let fx = f.object_map[x];
        for phi in t.isomorphisms().into_iter().filter(|&m| t.morphisms()[m].source == fx) {
            let lifted = (0..s.morphisms().len())
                .any(|m| s.morphisms()[m].source == x && f.morphism_map[m] == phi && s.inverse(m).is_some());
            if !lifted {
                failures.push(LiftFailure {
                    source_object: s.objects()[x].clone(),
                    target_object: t.objects()[t.morphisms()[phi].target].clone(),
                    iso: vec![(t.name(phi).to_string(), "1".into())],
                });
            }
        }
    }
    Ok(IsofibrationReport::finish(failures, Vec::new()))
}

enum Lift {
    Yes,
    No,
    Unknown,
}

struct PairData {
    z_tilde: usize,
    there: Matrix,
    back: Matrix,
    faithful: bool,
    unique: bool,
}

/// Isomorphism lifting for a functor of linear categories in degree 0.
///
/// Over each `(X, Z)`: a preimage `Z̃` on which `F` is onto both
/// `Hom(X, Z̃)` and `Hom(Z̃, X)` and injective on both endomorphism spaces
/// lifts every isomorphism. Otherwise isomorphisms `φ` are enumerated on a
/// grid (exhaustively over small prime fields) and each is lifted exactly;
/// a non-exhaustive grid without a failing `φ` leaves the pair undecided.
pub fn is_isofibration_linear(source: &LinearCategory, target: &LinearCategory, f: &LinearFunctor) -> IsofibrationReport {
    let field = source.field();
    let mut failures = Vec::new();
    let mut inconclusive = Vec::new();
    let endo_injective = |x: usize| {
        let m = f.hom_matrix(source, target, x, x, 0);
        rank(&m) == m.cols()
    };
    for x in 0..source.objects().len() {
        let fx = f.object_map[x];
        for z in 0..target.objects().len() {
            let basis = target.hom_basis(fx, z, 0);
            let dim = basis.len();
            if dim == 0 {
                continue;
            }
            let names = (source.objects()[x].clone(), target.objects()[z].clone());
            let witness = match find_isomorphism(target, fx, z) {
                IsoSearch::NotIsomorphic => continue,
                IsoSearch::Inconclusive { .. } => {
                    inconclusive.push(names);
                    continue;
                }
                IsoSearch::Found { u, .. } => u,
            };
            let pairs: Vec<PairData> = (0..source.objects().len())
                .filter(|&zt| f.object_map[zt] == z)
                .map(|zt| {
                    let there = f.hom_matrix(source, target, x, zt, 0);
                    let back = f.hom_matrix(source, target, zt, x, 0);
                    let unique = kernel_basis(&there).is_empty() && kernel_basis(&back).is_empty();
                    PairData { z_tilde: zt, faithful: endo_injective(x) && endo_injective(zt), unique, there, back }
                })
                .collect();
            let render = |v: &LinComb| v.iter().map(|(g, c)| (target.classes()[*g].name.clone(), c.to_string())).collect();
            if pairs.is_empty() {
                failures.push(LiftFailure { source_object: names.0, target_object: names.1, iso: render(&witness) });
                continue;
            }
            let good = |p: &PairData| rank(&p.there) == p.there.rows() && rank(&p.back) == p.back.rows();
            let exhaustive = field.is_finite() && field.characteristic().checked_pow(dim as u32).is_some_and(|n| n <= 100_000);
            if !exhaustive && pairs.iter().any(|p| good(p) && p.faithful) {
                continue;
            }
            if dim > ISO_SEARCH_MAX_DIM {
                inconclusive.push(names);
                continue;
            }
            let lift = |phi: &LinComb, psi: &LinComb| -> Lift {
                let mut unknown = false;
                for p in &pairs {
                    let a = solve(&p.there, &coordinates(field, basis, phi)).expect("shapes agree");
                    let b = solve(&p.back, &coordinates(field, target.hom_basis(z, fx, 0), psi)).expect("shapes agree");
                    let (Some(a), Some(b)) = (a, b) else { continue };
                    if p.faithful {
                        return Lift::Yes;
                    }
                    if !p.unique {
                        unknown = true;
                        continue;
                    }
                    let lift_of = |basis: &[usize], x: Vec<Scalar>| -> LinComb {
                        basis.iter().zip(x).filter(|(_, c)| !c.is_zero()).map(|(g, c)| (*g, c)).collect()
                    };
                    let a = lift_of(source.hom_basis(x, p.z_tilde, 0), a);
                    let b = lift_of(source.hom_basis(p.z_tilde, x, 0), b);
                    if source.compose(&b, &a).as_ref() == Some(source.unit(x))
                        && source.compose(&a, &b).as_ref() == Some(source.unit(p.z_tilde))
                    {
                        return Lift::Yes;
                    }
                }
                if unknown {
                    Lift::Unknown
                } else {
                    Lift::No
                }
            };
            let mut unknown = false;
            let mut failed = None;
            let per_coordinate = 2 * dim + 2 * pairs.len() + 1;
            for coords in crate::ainf::grid(field, dim, per_coordinate) {
                let phi: LinComb = basis.iter().zip(coords).filter(|(_, c)| !c.is_zero()).map(|(g, c)| (*g, c)).collect();
                let Some(psi) = two_sided_inverse(target, fx, z, &phi) else { continue };
                match lift(&phi, &psi) {
                    Lift::Yes => {}
                    Lift::No => {
                        failed = Some(phi);
                        break;
                    }
                    Lift::Unknown => unknown = true,
                }
            }
            match failed {
                Some(phi) => failures.push(LiftFailure { source_object: names.0, target_object: names.1, iso: render(&phi) }),
                None if unknown || !exhaustive => inconclusive.push(names),
                None => {}
            }
        }
    }
    IsofibrationReport::finish(failures, inconclusive)
}

/// A hom pair and degree where `F^1` is not onto.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SurjectivityFailure {
    pub source: String,
    pub target: String,
    pub degree: i32,
}

/// The fibration predicate. `verdict` is true iff both failure lists are
/// empty and nothing was left undecided.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FibrationVerdict {
    pub verdict: Verdict,
    pub surjectivity_failures: Vec<SurjectivityFailure>,
    pub isofibration_failures: Vec<LiftFailure>,
    pub inconclusive: Vec<(String, String)>,
}

/// `F^1` onto every `B(Fx, Fy)^d`, and `H⁰(F)` an isofibration.
pub fn is_fibration<S: AInfLike + ?Sized, T: AInfLike + ?Sized>(source: &S, target: &T, f: &AInfFunctor) -> Result<FibrationVerdict> {
    let n = 3.min(source.arity_bound()).min(target.arity_bound());
    let report = check_functor_relations(source, target, f, n)?;
    if let Some(v) = report.violations.first() {
        return Err(Error::Precondition(format!("functor relation fails at arity {} on ({})", v.arity, v.tuple.join(", "))));
    }
    let field = source.field();
    let om = f.object_map();
    let mut surjectivity_failures = Vec::new();
    for x in 0..source.objects().len() {
        for y in 0..source.objects().len() {
            let (_, src_basis) = hom_complex(source, x, y)?;
            let (_, tgt_basis) = hom_complex(target, om[x], om[y])?;
            for (&d, tb) in &tgt_basis {
                let cols: Vec<Vec<Scalar>> = src_basis
                    .get(&d)
                    .map_or(&[][..], Vec::as_slice)
                    .iter()
                    .map(|&g| coordinates(field, tb, &f.apply(source, target, &single(g, field.one()))))
                    .collect();
                let m = Matrix::from_columns(field, tb.len(), &cols).expect("columns have the target dimension");
                if rank(&m) < tb.len() {
                    surjectivity_failures.push(SurjectivityFailure {
                        source: source.objects()[x].clone(),
                        target: source.objects()[y].clone(),
                        degree: d,
                    });
                }
            }
        }
    }
    surjectivity_failures.sort();
    let hs = h0_category(source)?;
    let ht = h0_category(target)?;
    let hf = h_functor_with(source, target, f, &hs, &ht)?;
    let iso = is_isofibration_linear(hs.linear(), ht.linear(), &hf);
    let verdict = Verdict::from_bool(surjectivity_failures.is_empty()).and(iso.verdict);
    Ok(FibrationVerdict { verdict, surjectivity_failures, isofibration_failures: iso.failures, inconclusive: iso.inconclusive })
}

/// A fibration that is also a quasi-equivalence.
pub fn is_acyclic_fibration<S: AInfLike + ?Sized, T: AInfLike + ?Sized>(source: &S, target: &T, f: &AInfFunctor) -> Result<Verdict> {
    let fib = is_fibration(source, target, f)?;
    if fib.verdict == Verdict::False {
        return Ok(Verdict::False);
    }
    Ok(fib.verdict.and(is_quasi_equivalence(source, target, f, None)?.verdict))
}

/// The two standard non-fibrations.
pub mod examples {
    use crate::ainf::{AInfCategory, AInfFunctor};
    use crate::catalog;
    use crate::exactlin::FieldSpec;

    /// `k ↪ (X, k·e ⊕ k·y)` with `|y| = 1`: nothing hits `y`.
    pub fn non_surjective(field: FieldSpec) -> (AInfCategory, AInfCategory, AInfFunctor) {
        let k = catalog::point(field);
        let target = AInfCategory::builder(field).object("X").morphism("y", "X", "X", 1).build().expect("valid fixture");
        let f = AInfFunctor::builder(&k, &target).object("X", "X").build().expect("valid functor");
        (k, target, f)
    }

    /// `k ↪` the matrix-unit category on `X ≅ Z`: `φ: X → Z` has no lift.
    pub fn missing_lift(field: FieldSpec) -> (AInfCategory, AInfCategory, AInfFunctor) {
        let k = catalog::point(field);
        let target = catalog::matrix_units(field);
        let f = AInfFunctor::builder(&k, &target).object("X", "X").build().expect("valid functor");
        (k, target, f)
    }
}
