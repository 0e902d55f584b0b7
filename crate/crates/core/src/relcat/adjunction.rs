use rand::Rng;
use serde::Serialize;

use super::category::{check_relative_functor, FiniteCategory, FiniteRelativeCategory, RelativeFunctor, RelativeFunctorReport};
use crate::error::{Error, Result};

/// An adjunction `L ⊣ R` between finite relative categories, with
/// `η_X: X → RLX` in the source of `L` and `ε_Y: LRY → Y` in its target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjunctionData {
    pub left: RelativeFunctor,
    pub right: RelativeFunctor,
    pub unit: Vec<usize>,
    pub counit: Vec<usize>,
}

impl AdjunctionData {
    pub fn c1(&self) -> &FiniteRelativeCategory {
        &self.left.source
    }

    pub fn c2(&self) -> &FiniteRelativeCategory {
        &self.left.target
    }

    /// Functoriality, component endpoints, naturality and the triangle
    /// identities; the error names the first failing square.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Adjunction(msg));
        let (c1, c2) = (self.c1().cat(), self.c2().cat());
        if self.right.source.cat() != c2 || self.right.target.cat() != c1 {
            return bad("the right adjoint does not go back to the source of the left adjoint".into());
        }
        for (name, f) in [("left", &self.left), ("right", &self.right)] {
            let report = check_relative_functor(f);
            if !report.is_functor() {
                return bad(format!("{name} adjoint is not a functor: {:?}", report.violations[0]));
            }
        }
        let (l, r) = (&self.left, &self.right);
        if self.unit.len() != c1.objects().len() || self.counit.len() != c2.objects().len() {
            return bad("one component per object is required".into());
        }
        for (x, &eta) in self.unit.iter().enumerate() {
            let m = c1.morphisms().get(eta);
            if m.map(|m| (m.source, m.target)) != Some((x, r.object_map[l.object_map[x]])) {
                return bad(format!("unit component at {} is not a morphism X → RLX", c1.objects()[x]));
            }
        }
        for (y, &eps) in self.counit.iter().enumerate() {
            let m = c2.morphisms().get(eps);
            if m.map(|m| (m.source, m.target)) != Some((l.object_map[r.object_map[y]], y)) {
                return bad(format!("counit component at {} is not a morphism LRY → Y", c2.objects()[y]));
            }
        }
        for (f, fm) in c1.morphisms().iter().enumerate() {
            let rlf = r.morphism_map[l.morphism_map[f]];
            if c1.compose(rlf, self.unit[fm.source]) != c1.compose(self.unit[fm.target], f) {
                return bad(format!("unit naturality square fails on {}", fm.name));
            }
        }
        for (g, gm) in c2.morphisms().iter().enumerate() {
            let lrg = l.morphism_map[r.morphism_map[g]];
            if c2.compose(g, self.counit[gm.source]) != c2.compose(self.counit[gm.target], lrg) {
                return bad(format!("counit naturality square fails on {}", gm.name));
            }
        }
        for x in 0..c1.objects().len() {
            let lx = l.object_map[x];
            if c2.compose(self.counit[lx], l.morphism_map[self.unit[x]]) != Some(lx) {
                return bad(format!("triangle identity ε_L∘L(η) = id fails at {}", c1.objects()[x]));
            }
        }
        for y in 0..c2.objects().len() {
            let ry = r.object_map[y];
            if c1.compose(r.morphism_map[self.counit[y]], self.unit[ry]) != Some(ry) {
                return bad(format!("triangle identity R(ε)∘η_R = id fails at {}", c2.objects()[y]));
            }
        }
        Ok(())
    }

    /// True when every unit and counit component is an isomorphism.
    pub fn is_adjoint_equivalence(&self) -> bool {
        let (c1, c2) = (self.c1().cat(), self.c2().cat());
        self.unit.iter().all(|&m| c1.inverse(m).is_some()) && self.counit.iter().all(|&m| c2.inverse(m).is_some())
    }

    /// The same adjunction over different weak equivalences.
    pub fn with_weqs(&self, c1: FiniteRelativeCategory, c2: FiniteRelativeCategory) -> Result<Self> {
        if c1.cat() != self.c1().cat() || c2.cat() != self.c2().cat() {
            return Err(Error::Input("weak equivalences must live on the same categories".into()));
        }
        let retarget = |f: &RelativeFunctor, s: &FiniteRelativeCategory, t: &FiniteRelativeCategory| RelativeFunctor {
            source: s.clone(),
            target: t.clone(),
            ..f.clone()
        };
        Ok(AdjunctionData {
            left: retarget(&self.left, &c1, &c2),
            right: retarget(&self.right, &c2, &c1),
            unit: self.unit.clone(),
            counit: self.counit.clone(),
        })
    }
}

/// Outcome of the Dwyer–Kan adjunction check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DkReport {
    pub verdict: bool,
    pub left: RelativeFunctorReport,
    pub right: RelativeFunctorReport,
    /// Objects whose unit component is not a weak equivalence.
    pub unit_failures: Vec<String>,
    /// Objects whose counit component is not a weak equivalence.
    pub counit_failures: Vec<String>,
}

/// Both functors relative, every `η_X ∈ W₁`, every `ε_Y ∈ W₂`.
pub fn check_dk_adjunction(d: &AdjunctionData) -> Result<DkReport> {
    d.validate()?;
    let (c1, c2) = (d.c1(), d.c2());
    let left = check_relative_functor(&d.left);
    let right = check_relative_functor(&d.right);
    let mut unit_failures: Vec<String> = (0..d.unit.len())
        .filter(|&x| !c1.is_weq(d.unit[x]))
        .map(|x| c1.cat().objects()[x].clone())
        .collect();
    let mut counit_failures: Vec<String> = (0..d.counit.len())
        .filter(|&y| !c2.is_weq(d.counit[y]))
        .map(|y| c2.cat().objects()[y].clone())
        .collect();
    unit_failures.sort();
    counit_failures.sort();
    let verdict = left.holds() && right.holds() && unit_failures.is_empty() && counit_failures.is_empty();
    Ok(DkReport { verdict, left, right, unit_failures, counit_failures })
}

/// A monotone Galois connection `L ⊣ R` between preorders, as an adjunction
/// of thin categories with minimal weak equivalences.
pub fn galois_adjunction(c1: &FiniteCategory, c2: &FiniteCategory, l: &[usize], r: &[usize]) -> Result<AdjunctionData> {
    let arrow = |c: &FiniteCategory, s: usize, t: usize| {
        c.hom(s, t).next().ok_or_else(|| Error::Adjunction(format!("no arrow {} → {}", c.objects()[s], c.objects()[t])))
    };
    let thin_functor = |s: &FiniteCategory, t: &FiniteCategory, map: &[usize]| -> Result<RelativeFunctor> {
        let morphism_map = s
            .morphisms()
            .iter()
            .map(|m| arrow(t, map[m.source], map[m.target]))
            .collect::<Result<Vec<_>>>()?;
        Ok(RelativeFunctor {
            source: FiniteRelativeCategory::minimal(s.clone()),
            target: FiniteRelativeCategory::minimal(t.clone()),
            object_map: map.to_vec(),
            morphism_map,
        })
    };
    let left = thin_functor(c1, c2, l)?;
    let right = thin_functor(c2, c1, r)?;
    let unit = (0..c1.objects().len()).map(|x| arrow(c1, x, r[l[x]])).collect::<Result<_>>()?;
    let counit = (0..c2.objects().len()).map(|y| arrow(c2, l[r[y]], y)).collect::<Result<_>>()?;
    let d = AdjunctionData { left, right, unit, counit };
    d.validate()?;
    Ok(d)
}

fn random_preorder(rng: &mut impl Rng, prefix: &str, max_objects: usize) -> FiniteCategory {
    let n = rng.gen_range(1..=max_objects);
    let names: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let rel: Vec<Vec<bool>> = (0..n).map(|_| (0..n).map(|_| rng.gen_bool(0.4)).collect()).collect();
    FiniteCategory::preorder(&refs, |x, y| rel[x][y]).expect("preorders are categories")
}

/// A random Galois connection between preorders on at most `max_objects`
/// objects each, with minimal weak equivalences.
pub fn random_galois_adjunction(rng: &mut impl Rng, max_objects: usize) -> AdjunctionData {
    loop {
        let c1 = random_preorder(rng, "p", max_objects);
        let c2 = random_preorder(rng, "q", max_objects);
        let (n1, n2) = (c1.objects().len(), c2.objects().len());
        for _ in 0..64 {
            let l: Vec<usize> = (0..n1).map(|_| rng.gen_range(0..n2)).collect();
            let r: Vec<usize> = (0..n2).map(|_| rng.gen_range(0..n1)).collect();
            let leq1 = |x: usize, y: usize| c1.hom(x, y).next().is_some();
            let leq2 = |x: usize, y: usize| c2.hom(x, y).next().is_some();
            let galois = (0..n1).all(|p| (0..n2).all(|q| leq2(l[p], q) == leq1(p, r[q])));
            if galois {
                return galois_adjunction(&c1, &c2, &l, &r).expect("Galois connections are adjunctions");
            }
        }
    }
}

/// The walking arrow `a → b` over the terminal category: `L` collapses,
/// `R` picks `b`, `η_a = f`. `f` is a weak equivalence when `f_is_weq`.
pub fn walking_arrow_adjunction(f_is_weq: bool) -> AdjunctionData {
    use super::category::examples::{terminal, walking_arrow};
    let c1 = walking_arrow();
    let c1 = if f_is_weq {
        FiniteRelativeCategory::with_names(c1, &["f"]).expect("valid weak equivalences")
    } else {
        FiniteRelativeCategory::minimal(c1)
    };
    let c2 = FiniteRelativeCategory::minimal(terminal());
    let left = RelativeFunctor::from_names(&c1, &c2, &[("a", "*"), ("b", "*")], &[("f", "id_*")]).expect("valid map");
    let right = RelativeFunctor::from_names(&c2, &c1, &[("*", "b")], &[]).expect("valid map");
    let f = c1.cat().morphism_id("f").expect("f exists");
    let b = c1.cat().object_id("b").expect("b exists");
    AdjunctionData { left, right, unit: vec![f, b], counit: vec![0] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn walking_arrow_verdicts() {
        for weq in [true, false] {
            let report = check_dk_adjunction(&walking_arrow_adjunction(weq)).unwrap();
            assert_eq!(report.verdict, weq);
            assert_eq!(report.unit_failures.is_empty(), weq);
        }
    }

    #[test]
    fn random_connections_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            random_galois_adjunction(&mut rng, 3).validate().unwrap();
        }
    }

    #[test]
    fn broken_naturality_is_rejected() {
        let mut d = walking_arrow_adjunction(true);
        d.unit[0] = 0;
        assert!(check_dk_adjunction(&d).is_err());
    }
}
