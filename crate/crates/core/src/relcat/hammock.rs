use serde::Serialize;

use super::category::FiniteRelativeCategory;
use super::localize::{effective_width, localize, PresentedLocalization};
use super::zigzag::{collapse_moves, ClassStructure, Zigzag};
use crate::error::{Error, Result};

/// Hammock moves out of `z`: every zigzag `z'` of the same width joined to
/// `z` by vertical weak equivalences `v_i: A_i → A'_i` (identities at the
/// ends) making each square commute.
fn square_moves(c: &FiniteRelativeCategory, z: &Zigzag, visit: &mut dyn FnMut(Zigzag)) {
    let cat = c.cat();
    let ms = cat.morphisms();
    let path = z.path(cat);
    let n = z.width();
    // Partial rows: (columns chosen so far, current vertical v_i).
    let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), path[0])];
    while let Some((row, v)) = stack.pop() {
        let i = row.len();
        if i == n {
            if row != z.columns {
                visit(Zigzag { columns: row });
            }
            continue;
        }
        let verticals: Vec<usize> = if i + 1 == n {
            vec![path[n]]
        } else {
            c.weq().iter().copied().filter(|&w| ms[w].source == path[i + 1]).collect()
        };
        let top = ms[v].target;
        for next in verticals {
            let bottom = ms[next].target;
            let candidates: Vec<usize> = if i % 2 == 0 {
                // c'_i∘v_i = v_{i+1}∘c_i
                let want = cat.compose(next, z.columns[i]);
                cat.hom(top, bottom).filter(|&m| cat.compose(m, v) == want).collect()
            } else {
                // v_i∘c_i = c'_i∘v_{i+1}
                let want = cat.compose(v, z.columns[i]);
                cat.hom(bottom, top).filter(|&m| c.is_weq(m) && cat.compose(m, next) == want).collect()
            };
            for m in candidates {
                let mut longer = row.clone();
                longer.push(m);
                stack.push((longer, next));
            }
        }
    }
}

/// The component category `π₀` of the hammock localization at a width
/// bound, with the comparison to the zigzag localization at the same bound.
#[derive(Debug, Clone)]
pub struct HammockPi0 {
    pub structure: ClassStructure,
    pub width_bound: usize,
    pub comparison: ComparisonFunctor,
}

impl std::ops::Deref for HammockPi0 {
    type Target = ClassStructure;

    fn deref(&self) -> &ClassStructure {
        &self.structure
    }
}

/// The canonical functor `π₀L^H → C[W⁻¹]` on classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonFunctor {
    /// Localization class of each hammock class.
    pub class_map: Vec<usize>,
    pub bijective_on_objects: bool,
    /// Object pairs `(X, Y)` on which the class map is not bijective.
    pub non_bijective_homs: Vec<(String, String)>,
    /// Whether the localization at the same bound reported stabilization.
    pub localization_stabilized: bool,
}

impl ComparisonFunctor {
    pub fn is_isomorphism(&self) -> bool {
        self.bijective_on_objects && self.non_bijective_homs.is_empty()
    }
}

fn comparison(h: &ClassStructure, loc: &PresentedLocalization) -> Result<ComparisonFunctor> {
    let mut class_map = Vec::with_capacity(h.classes().len());
    for c in 0..h.classes().len() {
        let mut images = h.members(c).map(|z| loc.class_of(z));
        let first = images.next().flatten().ok_or_else(|| Error::Internal("hammock vertex outside the localization".into()))?;
        if images.any(|i| i != Some(first)) {
            return Err(Error::Internal("comparison functor is not well defined".into()));
        }
        class_map.push(first);
    }
    let n = h.objects().len();
    let mut non_bijective_homs = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let mut images: Vec<usize> = h.hom(x, y).iter().map(|&c| class_map[c]).collect();
            images.sort_unstable();
            let mut target = loc.hom(x, y).to_vec();
            target.sort_unstable();
            if images != target {
                non_bijective_homs.push((h.objects()[x].clone(), h.objects()[y].clone()));
            }
        }
    }
    Ok(ComparisonFunctor { class_map, bijective_on_objects: true, non_bijective_homs, localization_stabilized: loc.stabilized })
}

/// Vertices are zigzags of width `≤ b`; edges are identity-column
/// reductions and commuting-square hammocks over weak-equivalence columns.
pub fn hammock_pi0(c: &FiniteRelativeCategory, width_bound: usize) -> Result<HammockPi0> {
    if width_bound == 0 {
        return Err(Error::Input("the width bound must be at least 1".into()));
    }
    let width = effective_width(width_bound);
    let structure = ClassStructure::build(c, width, |z, visit| {
        collapse_moves(c.cat(), z, &mut *visit);
        square_moves(c, z, visit);
    });
    let loc = localize(c, width_bound)?;
    let comparison = comparison(&structure, &loc)?;
    Ok(HammockPi0 { structure, width_bound, comparison })
}

#[cfg(test)]
mod tests {
    use super::super::category::examples::*;
    use super::*;

    #[test]
    fn cancellation_is_a_hammock() {
        // a →f b ←f a is joined to a →id a ←id a by the vertical f at the middle.
        let c = FiniteRelativeCategory::with_names(walking_arrow(), &["f"]).unwrap();
        let f = 2;
        let mut seen = Vec::new();
        square_moves(&c, &Zigzag { columns: vec![0, 0, 0] }, &mut |z| seen.push(z.columns));
        assert!(seen.contains(&vec![f, f, 0]));
    }

    #[test]
    fn identities_only() {
        let c = FiniteRelativeCategory::minimal(parallel_pair());
        let h = hammock_pi0(&c, 3).unwrap();
        assert!(h.comparison.is_isomorphism());
        assert_eq!(h.classes().len(), 4);
    }
}
