use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A finite category given by its full composition table.
///
/// Morphism ids `0..objects` are the identities, named `id_X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    /// `table[g * n + f] = g∘f` for composable pairs.
    table: Vec<Option<usize>>,
}

impl FiniteCategory {
    pub fn builder() -> FiniteCategoryBuilder {
        FiniteCategoryBuilder::default()
    }

    /// The thin category of a preorder on `0..n`; `leq(x, y)` gives a morphism
    /// `x → y`, named `x<y`. The relation is closed reflexively and transitively.
    pub fn preorder(names: &[&str], leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = names.len();
        let mut rel = vec![vec![false; n]; n];
        for (x, row) in rel.iter_mut().enumerate() {
            for (y, cell) in row.iter_mut().enumerate() {
                *cell = x == y || leq(x, y);
            }
        }
        for k in 0..n {
            for x in 0..n {
                for y in 0..n {
                    if rel[x][k] && rel[k][y] {
                        rel[x][y] = true;
                    }
                }
            }
        }
        let mut b = FiniteCategory::builder().objects(names);
        for x in 0..n {
            for y in 0..n {
                if x != y && rel[x][y] {
                    b = b.morphism(&format!("{}<{}", names[x], names[y]), names[x], names[y]);
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if x != y && y != z && x != z && rel[x][y] && rel[y][z] {
                        let (g, f) = (format!("{}<{}", names[y], names[z]), format!("{}<{}", names[x], names[y]));
                        b = b.compose(&g, &f, &format!("{}<{}", names[x], names[z]));
                    }
                }
            }
        }
        // Two-cycles of distinct objects compose to identities.
        for x in 0..n {
            for y in 0..n {
                if x != y && rel[x][y] && rel[y][x] {
                    let (g, f) = (format!("{}<{}", names[y], names[x]), format!("{}<{}", names[x], names[y]));
                    b = b.compose(&g, &f, &format!("id_{}", names[x]));
                }
            }
        }
        b.build()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn identity(&self, object: usize) -> usize {
        object
    }

    pub fn is_identity(&self, m: usize) -> bool {
        m < self.objects.len()
    }

    pub fn object_id(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism_id(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    pub fn name(&self, m: usize) -> &str {
        &self.morphisms[m].name
    }

    /// `g∘f`, or `None` when `source(g) ≠ target(f)`.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.table[g * self.morphisms.len() + f]
    }

    /// Morphisms `source → target`.
    pub fn hom(&self, source: usize, target: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.morphisms.len()).filter(move |&m| self.morphisms[m].source == source && self.morphisms[m].target == target)
    }

    /// A two-sided inverse of `m` in the category, if any.
    pub fn inverse(&self, m: usize) -> Option<usize> {
        let Morphism { source, target, .. } = self.morphisms[m];
        self.hom(target, source)
            .find(|&u| self.compose(u, m) == Some(source) && self.compose(m, u) == Some(target))
    }

    pub fn isomorphisms(&self) -> BTreeSet<usize> {
        (0..self.morphisms.len()).filter(|&m| self.inverse(m).is_some()).collect()
    }
}

#[derive(Debug, Default)]
pub struct FiniteCategoryBuilder {
    objects: Vec<String>,
    morphisms: Vec<(String, String, String)>,
    compositions: Vec<(String, String, String)>,
}

impl FiniteCategoryBuilder {
    pub fn object(mut self, name: &str) -> Self {
        self.objects.push(name.to_string());
        self
    }

    pub fn objects(mut self, names: &[&str]) -> Self {
        self.objects.extend(names.iter().map(|s| s.to_string()));
        self
    }

    pub fn morphism(mut self, name: &str, source: &str, target: &str) -> Self {
        self.morphisms.push((name.into(), source.into(), target.into()));
        self
    }

    /// Declares `g∘f = h`.
    pub fn compose(mut self, g: &str, f: &str, h: &str) -> Self {
        self.compositions.push((g.into(), f.into(), h.into()));
        self
    }

    /// Identities are added automatically; every composable pair not
    /// involving an identity must be declared exactly once.
    pub fn build(self) -> Result<FiniteCategory> {
        let bad = |msg: String| Error::Category(msg);
        let mut objects = Vec::new();
        for o in self.objects {
            if objects.contains(&o) {
                return Err(bad(format!("duplicate object {o}")));
            }
            objects.push(o);
        }
        let obj = |name: &str| objects.iter().position(|o| o == name).ok_or_else(|| bad(format!("unknown object {name}")));
        let mut morphisms: Vec<Morphism> =
            objects.iter().enumerate().map(|(i, o)| Morphism { name: format!("id_{o}"), source: i, target: i }).collect();
        for (name, s, t) in &self.morphisms {
            if morphisms.iter().any(|m| &m.name == name) {
                return Err(bad(format!("duplicate morphism {name}")));
            }
            morphisms.push(Morphism { name: name.clone(), source: obj(s)?, target: obj(t)? });
        }
        let ids: HashMap<&str, usize> = morphisms.iter().enumerate().map(|(i, m)| (m.name.as_str(), i)).collect();
        let mid = |name: &str| ids.get(name).copied().ok_or_else(|| bad(format!("unknown morphism {name}")));
        let n = morphisms.len();
        let n_obj = objects.len();
        let mut table = vec![None; n * n];
        for (g, gm) in morphisms.iter().enumerate() {
            for (f, fm) in morphisms.iter().enumerate() {
                if gm.source != fm.target {
                    continue;
                }
                if g < n_obj {
                    table[g * n + f] = Some(f);
                } else if f < n_obj {
                    table[g * n + f] = Some(g);
                }
            }
        }
        for (g, f, h) in &self.compositions {
            let (gi, fi, hi) = (mid(g)?, mid(f)?, mid(h)?);
            let (gm, fm, hm) = (&morphisms[gi], &morphisms[fi], &morphisms[hi]);
            if gm.source != fm.target {
                return Err(bad(format!("{g}∘{f} is not composable")));
            }
            if hm.source != fm.source || hm.target != gm.target {
                return Err(bad(format!("{g}∘{f} = {h} has the wrong source or target")));
            }
            let slot = &mut table[gi * n + fi];
            match *slot {
                Some(existing) if gi < n_obj || fi < n_obj => {
                    if existing != hi {
                        return Err(bad(format!("{g}∘{f} = {h} contradicts the unit law")));
                    }
                }
                Some(_) => return Err(bad(format!("{g}∘{f} declared twice"))),
                None => *slot = Some(hi),
            }
        }
        for (g, gm) in morphisms.iter().enumerate() {
            for (f, fm) in morphisms.iter().enumerate() {
                if gm.source == fm.target && table[g * n + f].is_none() {
                    return Err(bad(format!("composite {}∘{} is not declared", gm.name, fm.name)));
                }
            }
        }
        let cat = FiniteCategory { objects, morphisms, table };
        for h in 0..n {
            for g in 0..n {
                let Some(hg) = cat.compose(h, g) else { continue };
                for f in 0..n {
                    let Some(gf) = cat.compose(g, f) else { continue };
                    if cat.compose(hg, f) != cat.compose(h, gf) {
                        return Err(bad(format!(
                            "composition is not associative on ({}, {}, {})",
                            cat.name(h),
                            cat.name(g),
                            cat.name(f)
                        )));
                    }
                }
            }
        }
        Ok(cat)
    }
}

/// A finite category with a wide subcategory of weak equivalences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteRelativeCategory {
    cat: FiniteCategory,
    weq: BTreeSet<usize>,
}

impl FiniteRelativeCategory {
    /// Identities are always weak equivalences; the set must be closed under
    /// composition.
    pub fn new(cat: FiniteCategory, weq: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set: BTreeSet<usize> = (0..cat.objects().len()).collect();
        for w in weq {
            if w >= cat.morphisms().len() {
                return Err(Error::Category(format!("weak equivalence id {w} out of range")));
            }
            set.insert(w);
        }
        for &v in &set {
            for &w in &set {
                if let Some(c) = cat.compose(v, w) {
                    if !set.contains(&c) {
                        return Err(Error::Category(format!(
                            "weak equivalences are not closed under composition: {}∘{}",
                            cat.name(v),
                            cat.name(w)
                        )));
                    }
                }
            }
        }
        Ok(FiniteRelativeCategory { cat, weq: set })
    }

    pub fn with_names(cat: FiniteCategory, weq: &[&str]) -> Result<Self> {
        let ids = weq
            .iter()
            .map(|n| cat.morphism_id(n).ok_or_else(|| Error::Category(format!("unknown morphism {n}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(cat, ids)
    }

    pub fn minimal(cat: FiniteCategory) -> Self {
        let n = cat.objects().len();
        FiniteRelativeCategory { cat, weq: (0..n).collect() }
    }

    pub fn maximal(cat: FiniteCategory) -> Self {
        let n = cat.morphisms().len();
        FiniteRelativeCategory { cat, weq: (0..n).collect() }
    }

    pub fn isomorphisms(cat: FiniteCategory) -> Self {
        let weq = cat.isomorphisms();
        FiniteRelativeCategory { cat, weq }
    }

    pub fn cat(&self) -> &FiniteCategory {
        &self.cat
    }

    pub fn weq(&self) -> &BTreeSet<usize> {
        &self.weq
    }

    pub fn is_weq(&self, m: usize) -> bool {
        self.weq.contains(&m)
    }
}

/// A functor between finite relative categories, given on objects and
/// morphisms. Not validated on construction; see [`check_relative_functor`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeFunctor {
    pub source: FiniteRelativeCategory,
    pub target: FiniteRelativeCategory,
    pub object_map: Vec<usize>,
    pub morphism_map: Vec<usize>,
}

impl RelativeFunctor {
    pub fn identity(c: &FiniteRelativeCategory) -> Self {
        RelativeFunctor {
            source: c.clone(),
            target: c.clone(),
            object_map: (0..c.cat().objects().len()).collect(),
            morphism_map: (0..c.cat().morphisms().len()).collect(),
        }
    }

    /// Builds a functor from name maps; unnamed identities go to identities.
    pub fn from_names(
        source: &FiniteRelativeCategory,
        target: &FiniteRelativeCategory,
        objects: &[(&str, &str)],
        morphisms: &[(&str, &str)],
    ) -> Result<Self> {
        let (s, t) = (source.cat(), target.cat());
        let lookup_obj = |c: &FiniteCategory, n: &str| c.object_id(n).ok_or_else(|| Error::Input(format!("unknown object {n}")));
        let lookup_mor = |c: &FiniteCategory, n: &str| c.morphism_id(n).ok_or_else(|| Error::Input(format!("unknown morphism {n}")));
        let mut object_map = vec![usize::MAX; s.objects().len()];
        for (a, b) in objects {
            object_map[lookup_obj(s, a)?] = lookup_obj(t, b)?;
        }
        if let Some(i) = object_map.iter().position(|&o| o == usize::MAX) {
            return Err(Error::Input(format!("object {} is not mapped", s.objects()[i])));
        }
        let mut morphism_map: Vec<usize> = (0..s.morphisms().len()).map(|m| if m < s.objects().len() { object_map[m] } else { usize::MAX }).collect();
        for (a, b) in morphisms {
            morphism_map[lookup_mor(s, a)?] = lookup_mor(t, b)?;
        }
        if let Some(i) = morphism_map.iter().position(|&o| o == usize::MAX) {
            return Err(Error::Input(format!("morphism {} is not mapped", s.name(i))));
        }
        Ok(RelativeFunctor { source: source.clone(), target: target.clone(), object_map, morphism_map })
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &RelativeFunctor) -> RelativeFunctor {
        RelativeFunctor {
            source: self.source.clone(),
            target: g.target.clone(),
            object_map: self.object_map.iter().map(|&o| g.object_map[o]).collect(),
            morphism_map: self.morphism_map.iter().map(|&m| g.morphism_map[m]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctorViolation {
    /// Wrong table sizes or ids out of range.
    Shape { message: String },
    Endpoints { morphism: String },
    Identity { object: String },
    Composition { g: String, f: String },
    WeakEquivalence { morphism: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RelativeFunctorReport {
    pub violations: Vec<FunctorViolation>,
}

impl RelativeFunctorReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    /// True when only weak-equivalence preservation fails.
    pub fn is_functor(&self) -> bool {
        self.violations.iter().all(|v| matches!(v, FunctorViolation::WeakEquivalence { .. }))
    }
}

/// Functoriality on the full table and `F(W₁) ⊆ W₂`.
pub fn check_relative_functor(f: &RelativeFunctor) -> RelativeFunctorReport {
    let (s, t) = (f.source.cat(), f.target.cat());
    let mut violations = Vec::new();
    if f.object_map.len() != s.objects().len()
        || f.morphism_map.len() != s.morphisms().len()
        || f.object_map.iter().any(|&o| o >= t.objects().len())
        || f.morphism_map.iter().any(|&m| m >= t.morphisms().len())
    {
        violations.push(FunctorViolation::Shape { message: "object or morphism map has the wrong shape".into() });
        return RelativeFunctorReport { violations };
    }
    for (m, mm) in s.morphisms().iter().enumerate() {
        let img = &t.morphisms()[f.morphism_map[m]];
        if img.source != f.object_map[mm.source] || img.target != f.object_map[mm.target] {
            violations.push(FunctorViolation::Endpoints { morphism: mm.name.clone() });
        }
    }
    for x in 0..s.objects().len() {
        if f.morphism_map[x] != f.object_map[x] {
            violations.push(FunctorViolation::Identity { object: s.objects()[x].clone() });
        }
    }
    for g in 0..s.morphisms().len() {
        for h in 0..s.morphisms().len() {
            let Some(gh) = s.compose(g, h) else { continue };
            if t.compose(f.morphism_map[g], f.morphism_map[h]) != Some(f.morphism_map[gh]) {
                violations.push(FunctorViolation::Composition { g: s.name(g).into(), f: s.name(h).into() });
            }
        }
    }
    for &w in f.source.weq() {
        if !f.target.is_weq(f.morphism_map[w]) {
            violations.push(FunctorViolation::WeakEquivalence { morphism: s.name(w).into() });
        }
    }
    violations.sort();
    RelativeFunctorReport { violations }
}

/// Small named examples.
pub mod examples {
    use super::*;

    /// `a → b` with a single non-identity arrow `f`.
    pub fn walking_arrow() -> FiniteCategory {
        FiniteCategory::builder().objects(&["a", "b"]).morphism("f", "a", "b").build().expect("valid category")
    }

    /// Two parallel arrows `f, g: a → b`.
    pub fn parallel_pair() -> FiniteCategory {
        FiniteCategory::builder()
            .objects(&["a", "b"])
            .morphism("f", "a", "b")
            .morphism("g", "a", "b")
            .build()
            .expect("valid category")
    }

    /// One object, identity only.
    pub fn terminal() -> FiniteCategory {
        FiniteCategory::builder().object("*").build().expect("valid category")
    }

    /// `a ⇄ b` with `u∘v` and `v∘u` identities.
    pub fn walking_isomorphism() -> FiniteCategory {
        FiniteCategory::builder()
            .objects(&["a", "b"])
            .morphism("u", "a", "b")
            .morphism("v", "b", "a")
            .compose("v", "u", "id_a")
            .compose("u", "v", "id_b")
            .build()
            .expect("valid category")
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    #[test]
    fn builder_requires_every_composite() {
        let err = FiniteCategory::builder()
            .objects(&["a", "b", "c"])
            .morphism("f", "a", "b")
            .morphism("g", "b", "c")
            .build()
            .unwrap_err();
        assert_eq!(err.to_string(), "invalid category: composite g∘f is not declared");
    }

    #[test]
    fn preorder_is_thin() {
        let c = FiniteCategory::preorder(&["x", "y", "z"], |a, b| a < b).unwrap();
        assert_eq!(c.morphisms().len(), 6);
        assert!(c.isomorphisms().len() == 3);
    }

    #[test]
    fn weq_closure_is_enforced() {
        let c = FiniteCategory::preorder(&["x", "y", "z"], |a, b| a < b).unwrap();
        let err = FiniteRelativeCategory::with_names(c, &["x<y", "y<z"]).unwrap_err();
        assert!(err.to_string().contains("not closed under composition"));
    }

    #[test]
    fn walking_isomorphism_inverse() {
        let c = walking_isomorphism();
        assert_eq!(c.inverse(c.morphism_id("u").unwrap()), c.morphism_id("v"));
        assert_eq!(walking_arrow().inverse(2), None);
    }
}
