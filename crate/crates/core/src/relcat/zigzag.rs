use std::collections::HashMap;

use serde::Serialize;

use super::category::{FiniteCategory, FiniteRelativeCategory};

/// A zigzag `A_0 → A_1 ← A_2 → ⋯ → A_n` in path order from the source.
///
/// Columns alternate forward morphisms (even positions) and weak
/// equivalences pointing backwards (odd positions); the first and last
/// columns are forward, so the width is odd. Identity columns are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Zigzag {
    pub columns: Vec<usize>,
}

impl Zigzag {
    pub fn identity(object: usize) -> Self {
        Zigzag { columns: vec![object] }
    }

    pub fn forward(m: usize) -> Self {
        Zigzag { columns: vec![m] }
    }

    pub fn width(&self) -> usize {
        self.columns.len()
    }

    /// The objects `A_0, …, A_n` along the zigzag.
    pub fn path(&self, cat: &FiniteCategory) -> Vec<usize> {
        let ms = cat.morphisms();
        let mut out = vec![ms[self.columns[0]].source];
        for (i, &c) in self.columns.iter().enumerate() {
            out.push(if i % 2 == 0 { ms[c].target } else { ms[c].source });
        }
        out
    }

    pub fn source(&self, cat: &FiniteCategory) -> usize {
        cat.morphisms()[self.columns[0]].source
    }

    pub fn target(&self, cat: &FiniteCategory) -> usize {
        cat.morphisms()[*self.columns.last().expect("zigzags are nonempty")].target
    }

    /// Composition-order rendering with identity columns dropped, e.g.
    /// `f⁻¹∘g` for `a →g b ←f a`.
    pub fn render(&self, cat: &FiniteCategory) -> String {
        let parts: Vec<String> = self
            .columns
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| !cat.is_identity(c))
            .map(|(i, &c)| if i % 2 == 0 { cat.name(c).to_string() } else { format!("{}⁻¹", cat.name(c)) })
            .collect();
        if parts.is_empty() {
            cat.name(self.source(cat)).to_string()
        } else {
            parts.join("∘")
        }
    }

    /// Shortlex key under the morphism-name ordering.
    pub fn key<'a>(&self, cat: &'a FiniteCategory) -> (usize, Vec<&'a str>) {
        (self.width(), self.columns.iter().map(|&c| cat.name(c)).collect())
    }

    /// `g ∘ f`: the columns of `f` then those of `g`, merging the two
    /// forward columns that meet.
    pub fn then(&self, g: &Zigzag, cat: &FiniteCategory) -> Option<Zigzag> {
        let (last, first) = (*self.columns.last()?, g.columns[0]);
        let merged = cat.compose(first, last)?;
        let mut columns = self.columns[..self.columns.len() - 1].to_vec();
        columns.push(merged);
        columns.extend_from_slice(&g.columns[1..]);
        Some(Zigzag { columns })
    }
}

/// Every zigzag of width at most `width`.
pub fn enumerate(c: &FiniteRelativeCategory, width: usize) -> Vec<Zigzag> {
    let cat = c.cat();
    let ms = cat.morphisms();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..ms.len()).rev().map(|m| vec![m]).collect();
    while let Some(cols) = stack.pop() {
        if cols.len() + 2 <= width {
            let end = ms[*cols.last().unwrap()].target;
            let mut next = Vec::new();
            for w in c.weq().iter().copied().filter(|&w| ms[w].target == end) {
                for f in (0..ms.len()).filter(|&f| ms[f].source == ms[w].source) {
                    let mut longer = cols.clone();
                    longer.extend([w, f]);
                    next.push(longer);
                }
            }
            stack.extend(next.into_iter().rev());
        }
        out.push(Zigzag { columns: cols });
    }
    out.sort_by(|a, b| a.key(cat).cmp(&b.key(cat)));
    out
}

/// Interior identity columns removed by composing their neighbours.
pub(crate) fn collapse_moves(cat: &FiniteCategory, z: &Zigzag, mut visit: impl FnMut(Zigzag)) {
    let cols = &z.columns;
    for i in 1..cols.len().saturating_sub(1) {
        if !cat.is_identity(cols[i]) {
            continue;
        }
        let merged = if i % 2 == 1 { cat.compose(cols[i + 1], cols[i - 1]) } else { cat.compose(cols[i - 1], cols[i + 1]) };
        let merged = merged.expect("neighbours of an identity column compose");
        let mut out = cols[..i - 1].to_vec();
        out.push(merged);
        out.extend_from_slice(&cols[i + 2..]);
        visit(Zigzag { columns: out });
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZigzagClass {
    pub source: String,
    pub target: String,
    /// Shortlex-least member.
    pub normal_form: String,
    #[serde(skip)]
    pub representative: Zigzag,
    pub size: usize,
}

/// Zigzags of bounded width partitioned into connected components of an
/// undirected move graph.
#[derive(Debug, Clone)]
pub struct ClassStructure {
    pub(crate) relative: FiniteRelativeCategory,
    pub(crate) width: usize,
    pub(crate) vertices: Vec<Zigzag>,
    pub(crate) index: HashMap<Zigzag, usize>,
    pub(crate) class_of_vertex: Vec<usize>,
    pub(crate) classes: Vec<ZigzagClass>,
    /// `homs[s][t]`: class ids sorted by normal form.
    pub(crate) homs: Vec<Vec<Vec<usize>>>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl ClassStructure {
    pub(crate) fn build(c: &FiniteRelativeCategory, width: usize, moves: impl Fn(&Zigzag, &mut dyn FnMut(Zigzag))) -> Self {
        let cat = c.cat();
        let vertices = enumerate(c, width);
        let index: HashMap<Zigzag, usize> = vertices.iter().cloned().enumerate().map(|(i, z)| (z, i)).collect();
        let mut parent: Vec<usize> = (0..vertices.len()).collect();
        for (i, z) in vertices.iter().enumerate() {
            moves(z, &mut |other| {
                let j = *index.get(&other).expect("moves stay within the width bound");
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                // Vertices are sorted shortlex, so the smaller root is the normal form.
                if a < b {
                    parent[b] = a;
                } else {
                    parent[a] = b;
                }
            });
        }
        let n_obj = cat.objects().len();
        let mut class_id: HashMap<usize, usize> = HashMap::new();
        let mut classes = Vec::new();
        let mut class_of_vertex = Vec::with_capacity(vertices.len());
        let mut homs = vec![vec![Vec::new(); n_obj]; n_obj];
        for i in 0..vertices.len() {
            let root = find(&mut parent, i);
            let id = *class_id.entry(root).or_insert_with(|| {
                let z = &vertices[root];
                let (s, t) = (z.source(cat), z.target(cat));
                homs[s][t].push(classes.len());
                classes.push(ZigzagClass {
                    source: cat.objects()[s].clone(),
                    target: cat.objects()[t].clone(),
                    normal_form: z.render(cat),
                    representative: z.clone(),
                    size: 0,
                });
                classes.len() - 1
            });
            classes[id].size += 1;
            class_of_vertex.push(id);
        }
        ClassStructure { relative: c.clone(), width, vertices, index, class_of_vertex, classes, homs }
    }

    pub fn relative(&self) -> &FiniteRelativeCategory {
        &self.relative
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn objects(&self) -> &[String] {
        self.relative.cat().objects()
    }

    pub fn classes(&self) -> &[ZigzagClass] {
        &self.classes
    }

    pub fn hom(&self, source: usize, target: usize) -> &[usize] {
        &self.homs[source][target]
    }

    pub fn hom_sizes(&self) -> Vec<Vec<usize>> {
        self.homs.iter().map(|row| row.iter().map(Vec::len).collect()).collect()
    }

    /// Class of a zigzag, if it is within the width bound.
    pub fn class_of(&self, z: &Zigzag) -> Option<usize> {
        self.index.get(z).map(|&i| self.class_of_vertex[i])
    }

    pub fn identity(&self, object: usize) -> usize {
        self.class_of(&Zigzag::identity(object)).expect("identities have width 1")
    }

    /// Class of a morphism of the underlying category.
    pub fn image_of(&self, m: usize) -> usize {
        self.class_of(&Zigzag::forward(m)).expect("morphisms have width 1")
    }

    /// `g∘f` of classes, when the concatenated normal forms fit the bound.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        let cat = self.relative.cat();
        let z = self.classes[f].representative.then(&self.classes[g].representative, cat)?;
        self.class_of(&z)
    }

    /// A two-sided inverse class of `c`, if one is visible at the bound.
    pub fn inverse(&self, c: usize) -> Option<usize> {
        let cat = self.relative.cat();
        let z = &self.classes[c].representative;
        let (s, t) = (z.source(cat), z.target(cat));
        let (ids, idt) = (self.identity(s), self.identity(t));
        self.homs[t][s].iter().copied().find(|&d| self.compose(d, c) == Some(ids) && self.compose(c, d) == Some(idt))
    }

    /// Members of each class, as vertex indices.
    pub(crate) fn members(&self, class: usize) -> impl Iterator<Item = &Zigzag> + '_ {
        self.vertices.iter().enumerate().filter(move |(i, _)| self.class_of_vertex[*i] == class).map(|(_, z)| z)
    }

    /// Whether `self` (narrower) maps bijectively onto `wider` by inclusion
    /// of zigzags, hom set by hom set.
    pub fn same_classes_as(&self, wider: &ClassStructure) -> bool {
        let mut seen = vec![false; wider.classes.len()];
        for c in &self.classes {
            let Some(d) = wider.class_of(&c.representative) else { return false };
            if std::mem::replace(&mut seen[d], true) {
                return false;
            }
        }
        seen.into_iter().all(|s| s)
    }
}

#[cfg(test)]
mod tests {
    use super::super::category::examples::walking_arrow;
    use super::*;

    #[test]
    fn enumeration_counts() {
        let c = FiniteRelativeCategory::with_names(walking_arrow(), &["f"]).unwrap();
        assert_eq!(enumerate(&c, 1).len(), 3);
        let three = enumerate(&c, 3);
        // Width 3 adds one zigzag x →m y ←w z →h per matching triple (m, w, h).
        let mut count = 3;
        let ms = c.cat().morphisms();
        for m in 0..3 {
            for &w in c.weq() {
                for h in 0..3 {
                    if ms[m].target == ms[w].target && ms[w].source == ms[h].source {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(three.len(), count);
    }

    #[test]
    fn render_and_concat() {
        let cat = walking_arrow();
        let f = cat.morphism_id("f").unwrap();
        let z = Zigzag { columns: vec![1, f, 0] };
        assert_eq!(z.render(&cat), "f⁻¹");
        let back = z.then(&Zigzag::forward(f), &cat).unwrap();
        assert_eq!(back.columns, vec![1, f, f]);
        assert_eq!(Zigzag::identity(0).render(&cat), "id_a");
    }
}
