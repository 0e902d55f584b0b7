use std::collections::BTreeMap;

use serde::Serialize;

use super::cobar::TruncatedDGCategory;
use crate::ainf::{
    chain_map_failure, check_functor_relations, degree, for_each_tuple, multilinear, op, single, suspension_parity,
    AInfCategory, AInfFunctor, AInfLike, LinComb, RelationReport,
};
use crate::error::{Error, Result};

/// The unit `η: A → U(A)` at a stage, with the functor relations checked.
#[derive(Debug, Clone)]
pub struct UnitMap {
    pub functor: AInfFunctor,
    pub report: RelationReport,
}

/// `η^n(a_1, …, a_n) = ±[a_1|…|a_n]`, the single-letter cobar word, for
/// `n ≤ L`. The sign undoes the suspension so that the suspended component
/// is exactly the letter.
pub fn unit_map(a: &AInfCategory, stage: &TruncatedDGCategory, check_arity: usize) -> Result<UnitMap> {
    let bound = stage.length_bound();
    if check_arity > bound {
        return Err(Error::Input(format!("relations can be checked up to arity {bound} at this stage")));
    }
    let field = a.field();
    let mut components = BTreeMap::new();
    for n in 1..=bound {
        for_each_tuple(a, n, true, |x| {
            let w = stage.bar().word_id(x).expect("every composable word is in the stage");
            let c = field.signed(field.one(), suspension_parity(x.iter().map(|&g| degree(a, g))));
            components.insert(x.to_vec(), single(stage.letter(w), c));
        });
    }
    let functor = AInfFunctor::from_parts(a, stage, (0..a.objects().len()).collect(), components, bound)?;
    let report = check_functor_relations(a, stage, &functor, check_arity.min(a.arity_bound()))?;
    if let Some(v) = report.violations.first() {
        return Err(Error::Internal(format!("unit functor relation fails on ({})", v.tuple.join(", "))));
    }
    Ok(UnitMap { functor, report })
}

/// The counit `ε: U(A) → A` for a DG category, with its checks.
#[derive(Debug, Clone)]
pub struct CounitMap {
    pub functor: AInfFunctor,
    /// Composition check on stage pairs; products leaving the stage are
    /// listed in `out_of_stage`.
    pub report: RelationReport,
}

/// `[x] ↦ x`, longer letters `↦ 0`, extended multiplicatively over
/// concatenation. Verified to be a chain map and to respect composition.
pub fn counit_map(a: &AInfCategory, stage: &TruncatedDGCategory) -> Result<CounitMap> {
    if let Some(arity) = a.ops().keys().map(Vec::len).filter(|&n| n >= 3).min() {
        return Err(Error::NotDg { arity });
    }
    let field = a.field();
    let bar_words = stage.bar().words();
    let mut components = BTreeMap::new();
    for g in a.objects().len()..stage.generators().len() {
        let seq = stage.word(g);
        if seq.iter().any(|&w| bar_words[w].letters.len() != 1) {
            continue;
        }
        let letters: Vec<LinComb> = seq.iter().map(|&w| single(bar_words[w].letters[0], field.one())).collect();
        let mut acc = letters[letters.len() - 1].clone();
        for x in letters[..letters.len() - 1].iter().rev() {
            acc = multilinear(field, &[x.clone(), acc], |p| op(a, p)).expect("base operations are total");
        }
        if !acc.is_empty() {
            components.insert(vec![g], acc);
        }
    }
    let functor = AInfFunctor::from_parts(stage, a, (0..a.objects().len()).collect(), components, 1)?;
    if let Some(g) = chain_map_failure(stage, a, &functor) {
        return Err(Error::Internal(format!("counit is not a chain map on {}", stage.generators()[g].name)));
    }
    let report = check_functor_relations(stage, a, &functor, 2)?;
    if let Some(v) = report.violations.first() {
        return Err(Error::Internal(format!("counit does not respect composition on ({})", v.tuple.join(", "))));
    }
    Ok(CounitMap { functor, report })
}

/// The strict inclusion of a stage into a longer one.
pub fn stage_inclusion(lower: &TruncatedDGCategory, upper: &TruncatedDGCategory) -> Result<AInfFunctor> {
    if lower.length_bound() > upper.length_bound() {
        return Err(Error::Input("stage inclusion must go to a longer stage".into()));
    }
    let field = lower.field();
    let mut components = BTreeMap::new();
    for g in lower.objects().len()..lower.generators().len() {
        let h = upper
            .generator_by_spelling(&lower.spelling(g))
            .ok_or_else(|| Error::Internal("stage word missing from the longer stage".into()))?;
        components.insert(vec![g], single(h, field.one()));
    }
    AInfFunctor::from_parts(lower, upper, (0..lower.objects().len()).collect(), components, 1)
}

/// Result of comparing two consecutive stages through the inclusion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InclusionCheck {
    pub lower: usize,
    pub upper: usize,
    pub chain_map: bool,
    pub composition: RelationReport,
}

/// Checks that the inclusion is a chain map and preserves composition on
/// every pair whose product lies in the lower stage.
pub fn check_stage_inclusion(lower: &TruncatedDGCategory, upper: &TruncatedDGCategory) -> Result<InclusionCheck> {
    let f = stage_inclusion(lower, upper)?;
    Ok(InclusionCheck {
        lower: lower.length_bound(),
        upper: upper.length_bound(),
        chain_map: chain_map_failure(lower, upper, &f).is_none(),
        composition: check_functor_relations(lower, upper, &f, 2)?,
    })
}

/// `ε(η(a)) = a` on every single-letter generator `[a]` (for DG inputs).
pub fn triangle_on_letters(a: &AInfCategory, stage: &TruncatedDGCategory, unit: &AInfFunctor, counit: &AInfFunctor) -> bool {
    let field = a.field();
    a.generators().iter().enumerate().filter(|(_, g)| !g.is_unit).all(|(x, _)| {
        let image = unit.apply(a, stage, &single(x, field.one()));
        counit.apply(stage, a, &image) == single(x, field.one())
    })
}
