use std::collections::BTreeMap;

use serde::Serialize;

use super::adjunction::{check_dk_adjunction, AdjunctionData};
use super::category::{check_relative_functor, FiniteRelativeCategory, RelativeFunctor};
use super::zigzag::{collapse_moves, ClassStructure, Zigzag};
use crate::error::{Error, Result};

/// `C[W⁻¹]` approximated by zigzag classes of bounded width.
#[derive(Debug, Clone)]
pub struct PresentedLocalization {
    pub structure: ClassStructure,
    pub word_bound: usize,
    /// Classes at this bound and with one more backward column agree.
    pub stabilized: bool,
}

impl std::ops::Deref for PresentedLocalization {
    type Target = ClassStructure;

    fn deref(&self) -> &ClassStructure {
        &self.structure
    }
}

/// Moves generating the congruence: identity columns collapse (composition
/// in `C` read both ways), `w⁻¹w` and `ww⁻¹` cancel, and a weak equivalence
/// with an inverse in `C` may be replaced by that inverse.
fn localization_moves(c: &FiniteRelativeCategory, z: &Zigzag, visit: &mut dyn FnMut(Zigzag)) {
    let cat = c.cat();
    let ms = cat.morphisms();
    let cols = &z.columns;
    collapse_moves(cat, z, &mut *visit);
    for i in 0..cols.len().saturating_sub(1) {
        if cols[i] != cols[i + 1] || cat.is_identity(cols[i]) {
            continue;
        }
        // Forward then backward: w⁻¹∘w at A_i; backward then forward: w∘w⁻¹ at A_i.
        let object = if i % 2 == 0 { ms[cols[i]].source } else { ms[cols[i]].target };
        let mut out = cols.clone();
        out[i] = object;
        out[i + 1] = object;
        visit(Zigzag { columns: out });
    }
    for i in (1..cols.len()).step_by(2) {
        let Some(u) = cat.inverse(cols[i]) else { continue };
        if cat.is_identity(cols[i]) {
            continue;
        }
        let merged = cat.compose(u, cols[i - 1]).and_then(|ug| cat.compose(cols[i + 1], ug)).expect("composable");
        let mut out = cols[..i - 1].to_vec();
        out.push(merged);
        out.extend_from_slice(&cols[i + 2..]);
        visit(Zigzag { columns: out });
    }
}

fn classes_at(c: &FiniteRelativeCategory, width: usize) -> ClassStructure {
    ClassStructure::build(c, width, |z, visit| localization_moves(c, z, visit))
}

/// Zigzag width actually used for a bound: the largest odd number `≤ b`.
pub fn effective_width(word_bound: usize) -> usize {
    if word_bound % 2 == 1 {
        word_bound
    } else {
        word_bound - 1
    }
}

/// Localization at word bound `b ≥ 1`; stabilization compares the classes
/// with those of the next bound that admits another backward column.
pub fn localize(c: &FiniteRelativeCategory, word_bound: usize) -> Result<PresentedLocalization> {
    if word_bound == 0 {
        return Err(Error::Input("the word bound must be at least 1".into()));
    }
    let width = effective_width(word_bound);
    let structure = classes_at(c, width);
    let stabilized = structure.same_classes_as(&classes_at(c, width + 2));
    Ok(PresentedLocalization { structure, word_bound, stabilized })
}

/// A functor between localizations on objects and classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalizationFunctor {
    pub object_map: Vec<usize>,
    pub class_map: Vec<usize>,
}

impl LocalizationFunctor {
    pub fn apply(&self, class: usize) -> usize {
        self.class_map[class]
    }
}

/// Outcome of an operation whose answer depends on the word bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum AtBound<T> {
    Determined(T),
    Indeterminate { reason: String },
}

impl<T> AtBound<T> {
    pub fn determined(self) -> Option<T> {
        match self {
            AtBound::Determined(t) => Some(t),
            AtBound::Indeterminate { .. } => None,
        }
    }
}

fn image_zigzag(f: &RelativeFunctor, z: &Zigzag) -> Zigzag {
    Zigzag { columns: z.columns.iter().map(|&m| f.morphism_map[m]).collect() }
}

/// The functor induced by `f` on localizations at the same bound.
///
/// Every member of a class must land in one class, and composites that are
/// visible on both sides must be preserved; otherwise the answer is
/// indeterminate at this bound.
pub fn homotopy_category_functor(
    f: &RelativeFunctor,
    source: &PresentedLocalization,
    target: &PresentedLocalization,
) -> Result<AtBound<LocalizationFunctor>> {
    let report = check_relative_functor(f);
    if !report.holds() {
        return Err(Error::Precondition(format!("not a relative functor: {:?}", report.violations[0])));
    }
    if source.relative() != &f.source || target.relative() != &f.target {
        return Err(Error::Input("localizations do not match the functor's categories".into()));
    }
    let mut class_map = Vec::with_capacity(source.classes().len());
    for (c, class) in source.classes().iter().enumerate() {
        let Some(img) = target.class_of(&image_zigzag(f, &class.representative)) else {
            return Ok(AtBound::Indeterminate { reason: format!("image of {} exceeds the bound", class.normal_form) });
        };
        if source.members(c).any(|z| target.class_of(&image_zigzag(f, z)) != Some(img)) {
            return Ok(AtBound::Indeterminate { reason: format!("class of {} does not map to one class", class.normal_form) });
        }
        class_map.push(img);
    }
    for g in 0..source.classes().len() {
        for h in 0..source.classes().len() {
            let Some(gh) = source.compose(g, h) else { continue };
            if let Some(img) = target.compose(class_map[g], class_map[h]) {
                if img != class_map[gh] {
                    return Ok(AtBound::Indeterminate {
                        reason: format!("composite {}∘{} is not preserved", source.classes()[g].normal_form, source.classes()[h].normal_form),
                    });
                }
            }
        }
    }
    Ok(AtBound::Determined(LocalizationFunctor { object_map: f.object_map.clone(), class_map }))
}

/// An isomorphism class together with a two-sided inverse class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoWitness {
    pub object: String,
    pub iso: String,
    pub inverse: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalizationEquivalence {
    pub verdict: bool,
    /// Images of `η_X` in the localization of the source, with inverses.
    pub unit_isos: Vec<IsoWitness>,
    /// Images of `ε_Y` in the localization of the target, with inverses.
    pub counit_isos: Vec<IsoWitness>,
    /// Classes on which naturality of the unit or counit fails at the bound.
    pub naturality_failures: Vec<String>,
}

/// The induced functors on localizations are mutually quasi-inverse: the
/// images of the unit and counit components are invertible and natural.
pub fn check_localization_equivalence(d: &AdjunctionData, word_bound: usize) -> Result<AtBound<LocalizationEquivalence>> {
    if !check_dk_adjunction(d)?.verdict {
        return Err(Error::Precondition("not a Dwyer–Kan adjunction".into()));
    }
    let l1 = localize(d.c1(), word_bound)?;
    let l2 = localize(d.c2(), word_bound)?;
    if !l1.stabilized || !l2.stabilized {
        return Ok(AtBound::Indeterminate { reason: format!("localization not stabilized at bound {word_bound}") });
    }
    let lf = match homotopy_category_functor(&d.left, &l1, &l2)? {
        AtBound::Determined(f) => f,
        AtBound::Indeterminate { reason } => return Ok(AtBound::Indeterminate { reason }),
    };
    let rf = match homotopy_category_functor(&d.right, &l2, &l1)? {
        AtBound::Determined(f) => f,
        AtBound::Indeterminate { reason } => return Ok(AtBound::Indeterminate { reason }),
    };
    let witnesses = |loc: &PresentedLocalization, components: &[usize]| -> Vec<(usize, Option<usize>)> {
        components.iter().map(|&m| (loc.image_of(m), loc.inverse(loc.image_of(m)))).collect()
    };
    let eta = witnesses(&l1, &d.unit);
    let eps = witnesses(&l2, &d.counit);
    let mut naturality_failures = Vec::new();
    // η_{X'}∘c = RL(c)∘η_X and c∘ε_Y = ε_{Y'}∘LR(c) for every class c visible at the bound.
    let natural = |loc: &PresentedLocalization, comps: &[(usize, Option<usize>)], there: &LocalizationFunctor, back: &LocalizationFunctor, unit_side: bool, out: &mut Vec<String>| {
        let cat = loc.relative().cat();
        for (c, class) in loc.classes().iter().enumerate() {
            let z = &class.representative;
            let (s, t) = (z.source(cat), z.target(cat));
            let image = back.apply(there.apply(c));
            let (lhs, rhs) = if unit_side {
                (loc.compose(comps[t].0, c), loc.compose(image, comps[s].0))
            } else {
                (loc.compose(c, comps[s].0), loc.compose(comps[t].0, image))
            };
            if let (Some(a), Some(b)) = (lhs, rhs) {
                if a != b {
                    out.push(class.normal_form.clone());
                }
            }
        }
    };
    natural(&l1, &eta, &lf, &rf, true, &mut naturality_failures);
    natural(&l2, &eps, &rf, &lf, false, &mut naturality_failures);
    naturality_failures.sort();
    let render = |loc: &PresentedLocalization, comps: &[(usize, Option<usize>)]| -> Vec<IsoWitness> {
        comps
            .iter()
            .enumerate()
            .filter_map(|(x, &(iso, inv))| {
                inv.map(|inv| IsoWitness {
                    object: loc.objects()[x].clone(),
                    iso: loc.classes()[iso].normal_form.clone(),
                    inverse: loc.classes()[inv].normal_form.clone(),
                })
            })
            .collect()
    };
    let unit_isos = render(&l1, &eta);
    let counit_isos = render(&l2, &eps);
    let verdict = unit_isos.len() == eta.len() && counit_isos.len() == eps.len() && naturality_failures.is_empty();
    Ok(AtBound::Determined(LocalizationEquivalence { verdict, unit_isos, counit_isos, naturality_failures }))
}

/// Hom-set sizes keyed by object names, for reports.
pub fn hom_inventory(s: &ClassStructure) -> BTreeMap<(String, String), Vec<String>> {
    let mut out = BTreeMap::new();
    for (i, x) in s.objects().iter().enumerate() {
        for (j, y) in s.objects().iter().enumerate() {
            let names = s.hom(i, j).iter().map(|&c| s.classes()[c].normal_form.clone()).collect();
            out.insert((x.clone(), y.clone()), names);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::category::examples::*;
    use super::*;

    #[test]
    fn identities_only_gives_the_category() {
        let c = FiniteRelativeCategory::minimal(parallel_pair());
        let loc = localize(&c, 1).unwrap();
        assert!(loc.stabilized);
        assert_eq!(loc.classes().len(), 4);
    }

    #[test]
    fn walking_arrow_becomes_an_isomorphism() {
        let c = FiniteRelativeCategory::with_names(walking_arrow(), &["f"]).unwrap();
        assert!(!localize(&c, 2).unwrap().stabilized);
        let loc = localize(&c, 3).unwrap();
        assert!(loc.stabilized);
        assert_eq!(loc.hom_sizes(), vec![vec![1, 1], vec![1, 1]]);
        let f = loc.image_of(2);
        assert_eq!(loc.classes()[loc.inverse(f).unwrap()].normal_form, "f⁻¹");
    }
}
