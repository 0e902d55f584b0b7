use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::exactlin::{FieldSpec, Matrix, Scalar};
use crate::graded::{CochainComplex, GradedVectorSpace};

/// Linear combination of basis morphisms, keyed by generator id.
/// Zero coefficients are never stored.
pub type LinComb = BTreeMap<usize, Scalar>;

pub const DEFAULT_ARITY_BOUND: usize = 6;

/// A basis morphism `source → target` of a fixed degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub degree: i32,
    pub is_unit: bool,
}

/// Read access shared by A∞-categories and truncated rectification stages.
///
/// Tuples of generators are always written in composition order:
/// `(x_1, …, x_n)` with `source(x_i) = target(x_{i+1})`, so `m_2(g, f) = g∘f`
/// and the result of `m_n` lies in `hom(source(x_n), target(x_1))`.
pub trait AInfLike {
    fn field(&self) -> FieldSpec;
    fn objects(&self) -> &[String];
    fn generators(&self) -> &[Generator];
    fn unit(&self, object: usize) -> usize;
    /// Generator ids spanning `hom(source, target)`.
    fn hom_basis(&self, source: usize, target: usize) -> &[usize];
    /// `m_n` on a composable tuple of non-unit generators. `None` means the
    /// value is not available because it leaves a truncation.
    fn structure_op(&self, args: &[usize]) -> Option<LinComb>;
    /// Operations of larger arity are treated as zero.
    fn arity_bound(&self) -> usize;
}

pub fn degree<C: AInfLike + ?Sized>(cat: &C, g: usize) -> i32 {
    cat.generators()[g].degree
}

pub fn is_composable<C: AInfLike + ?Sized>(cat: &C, args: &[usize]) -> bool {
    let gens = cat.generators();
    args.windows(2).all(|w| gens[w[0]].source == gens[w[1]].target)
}

/// `m_n` with strict unitality applied: units are killed by `m_1` and by
/// every `m_n` with `n ≥ 3`, and are two-sided identities for `m_2`.
pub fn op<C: AInfLike + ?Sized>(cat: &C, args: &[usize]) -> Option<LinComb> {
    let gens = cat.generators();
    let n = args.len();
    if n == 0 || n > cat.arity_bound() {
        return Some(LinComb::new());
    }
    if let Some(pos) = args.iter().position(|&a| gens[a].is_unit) {
        return Some(match n {
            2 => single(args[1 - pos], cat.field().one()),
            _ => LinComb::new(),
        });
    }
    cat.structure_op(args)
}

pub fn single(g: usize, c: Scalar) -> LinComb {
    let mut out = LinComb::new();
    if !c.is_zero() {
        out.insert(g, c);
    }
    out
}

pub fn add_scaled(field: FieldSpec, acc: &mut LinComb, coeff: &Scalar, v: &LinComb) {
    if coeff.is_zero() {
        return;
    }
    for (g, c) in v {
        let term = field.mul(coeff, c);
        match acc.get_mut(g) {
            Some(slot) => {
                *slot = field.add(slot, &term);
                if slot.is_zero() {
                    acc.remove(g);
                }
            }
            None => {
                acc.insert(*g, term);
            }
        }
    }
}

/// Extends a function on generator tuples multilinearly to tuples of
/// linear combinations. `None` from any evaluation propagates.
pub fn multilinear(
    field: FieldSpec,
    inputs: &[LinComb],
    mut eval: impl FnMut(&[usize]) -> Option<LinComb>,
) -> Option<LinComb> {
    let mut acc = LinComb::new();
    let mut args = Vec::with_capacity(inputs.len());
    fn go(
        field: FieldSpec,
        inputs: &[LinComb],
        k: usize,
        coeff: Scalar,
        args: &mut Vec<usize>,
        acc: &mut LinComb,
        eval: &mut dyn FnMut(&[usize]) -> Option<LinComb>,
    ) -> Option<()> {
        if k == inputs.len() {
            let v = eval(args)?;
            add_scaled(field, acc, &coeff, &v);
            return Some(());
        }
        for (g, c) in &inputs[k] {
            args.push(*g);
            go(field, inputs, k + 1, field.mul(&coeff, c), args, acc, eval)?;
            args.pop();
        }
        Some(())
    }
    go(field, inputs, 0, field.one(), &mut args, &mut acc, &mut eval)?;
    Some(acc)
}

/// Parity of `Σ_{i=1}^{n} (n − i)·|a_i|`: the sign relating `m_n` to its
/// suspended form `b_n = s∘m_n∘(s⁻¹)^{⊗n}` (see `SIGNS.md`).
pub fn suspension_parity(degrees: impl IntoIterator<Item = i32>) -> bool {
    let degs: Vec<i32> = degrees.into_iter().collect();
    let n = degs.len() as i64;
    let total: i64 = degs.iter().enumerate().map(|(i, d)| (n - 1 - i as i64) * *d as i64).sum();
    total.rem_euclid(2) == 1
}

/// The suspended operation `s⁻¹ b_n s^{⊗n}` evaluated on generators: `m_n`
/// times the suspension sign.
pub fn shifted_op<C: AInfLike + ?Sized>(cat: &C, args: &[usize]) -> Option<LinComb> {
    let field = cat.field();
    let v = op(cat, args)?;
    let neg = suspension_parity(args.iter().map(|&a| degree(cat, a)));
    Some(if neg { negate(field, &v) } else { v })
}

pub fn negate(field: FieldSpec, v: &LinComb) -> LinComb {
    v.iter().map(|(g, c)| (*g, field.neg(c))).collect()
}

/// The hom complex `hom(source, target)` with differential `m_1`, together
/// with the generator id behind each basis vector, per degree.
pub fn hom_complex<C: AInfLike + ?Sized>(
    cat: &C,
    source: usize,
    target: usize,
) -> Result<(CochainComplex, BTreeMap<i32, Vec<usize>>)> {
    let gens = cat.generators();
    let field = cat.field();
    let mut by_degree: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for &g in cat.hom_basis(source, target) {
        by_degree.entry(gens[g].degree).or_default().push(g);
    }
    let space = GradedVectorSpace::new(
        field,
        by_degree.iter().map(|(d, ids)| (*d, ids.iter().map(|&g| gens[g].name.clone()).collect())).collect(),
    );
    let position: BTreeMap<usize, usize> =
        by_degree.values().flat_map(|ids| ids.iter().enumerate().map(|(i, &g)| (g, i))).collect();
    let mut blocks = BTreeMap::new();
    for (&deg, ids) in &by_degree {
        let mut triplets = Vec::new();
        for (j, &g) in ids.iter().enumerate() {
            let dg = op(cat, &[g]).ok_or_else(|| Error::Internal("differential left the truncation".into()))?;
            for (h, c) in dg {
                if gens[h].degree != deg + 1 || gens[h].source != source || gens[h].target != target {
                    return Err(Error::Internal(format!("m_1({}) has a term outside its hom space", gens[g].name)));
                }
                triplets.push((position[&h], j, c));
            }
        }
        if !triplets.is_empty() {
            let rows = by_degree.get(&(deg + 1)).map_or(0, Vec::len);
            blocks.insert(deg, Matrix::from_triplets(field, rows, ids.len(), triplets)?);
        }
    }
    Ok((CochainComplex::with_support(space, blocks)?, by_degree))
}

/// A strictly unital A∞-category with finitely many objects and
/// finite-dimensional hom spaces. Units are generators `0..objects.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AInfCategory {
    field: FieldSpec,
    objects: Vec<String>,
    generators: Vec<Generator>,
    homs: Vec<Vec<Vec<usize>>>,
    ops: BTreeMap<Vec<usize>, LinComb>,
    arity_bound: usize,
    dg_provenance: bool,
}

impl AInfLike for AInfCategory {
    fn field(&self) -> FieldSpec {
        self.field
    }

    fn objects(&self) -> &[String] {
        &self.objects
    }

    fn generators(&self) -> &[Generator] {
        &self.generators
    }

    fn unit(&self, object: usize) -> usize {
        object
    }

    fn hom_basis(&self, source: usize, target: usize) -> &[usize] {
        &self.homs[source][target]
    }

    fn structure_op(&self, args: &[usize]) -> Option<LinComb> {
        Some(self.ops.get(args).cloned().unwrap_or_default())
    }

    fn arity_bound(&self) -> usize {
        self.arity_bound
    }
}

impl AInfCategory {
    pub fn builder(field: FieldSpec) -> AInfCategoryBuilder {
        AInfCategoryBuilder {
            field,
            objects: Vec::new(),
            morphisms: Vec::new(),
            ops: Vec::new(),
            arity_bound: DEFAULT_ARITY_BOUND,
        }
    }

    pub fn generator_id(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn object_id(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    /// Stored operations, keyed by argument tuple (arity = tuple length).
    pub fn ops(&self) -> &BTreeMap<Vec<usize>, LinComb> {
        &self.ops
    }

    /// Largest arity with a nonzero stored operation (1 if only `m_1`).
    pub fn max_nonzero_arity(&self) -> usize {
        self.ops.keys().map(Vec::len).max().unwrap_or(1)
    }

    pub fn is_dg(&self) -> bool {
        self.ops.keys().all(|k| k.len() <= 2)
    }

    /// Whether this category was passed through [`include_dg`].
    pub fn has_dg_provenance(&self) -> bool {
        self.dg_provenance
    }

    /// Same data with a different arity bound. Stored operations above the
    /// new bound are rejected.
    pub fn with_arity_bound(&self, bound: usize) -> Result<Self> {
        if bound < 2 {
            return Err(Error::Input("arity bound must be at least 2".into()));
        }
        if self.max_nonzero_arity() > bound {
            return Err(Error::Input(format!("m_{} is nonzero but the bound is {bound}", self.max_nonzero_arity())));
        }
        Ok(AInfCategory { arity_bound: bound, ..self.clone() })
    }

    pub fn render(&self, v: &LinComb) -> Vec<(String, String)> {
        render(&self.generators, v)
    }
}

pub fn render(gens: &[Generator], v: &LinComb) -> Vec<(String, String)> {
    v.iter().map(|(g, c)| (gens[*g].name.clone(), c.to_string())).collect()
}

/// The inclusion of DG categories: the identity on data, recording that
/// the category lies in its image.
pub fn include_dg(a: &AInfCategory) -> Result<AInfCategory> {
    if let Some(arity) = a.ops.keys().map(Vec::len).filter(|&n| n >= 3).min() {
        return Err(Error::NotDg { arity });
    }
    Ok(AInfCategory { dg_provenance: true, ..a.clone() })
}

/// Declarative construction of an [`AInfCategory`] by names.
#[derive(Debug, Clone)]
pub struct AInfCategoryBuilder {
    field: FieldSpec,
    objects: Vec<String>,
    morphisms: Vec<(String, String, String, i32)>,
    ops: Vec<(Vec<String>, Vec<(String, Scalar)>)>,
    arity_bound: usize,
}

impl AInfCategoryBuilder {
    pub fn object(mut self, name: &str) -> Self {
        self.objects.push(name.to_string());
        self
    }

    pub fn objects(mut self, names: &[&str]) -> Self {
        self.objects.extend(names.iter().map(|s| s.to_string()));
        self
    }

    pub fn morphism(mut self, name: &str, source: &str, target: &str, degree: i32) -> Self {
        self.morphisms.push((name.into(), source.into(), target.into(), degree));
        self
    }

    /// Declares `m_n(inputs) = Σ coeff·output`; `n = inputs.len()`.
    pub fn op(mut self, inputs: &[&str], output: &[(&str, Scalar)]) -> Self {
        self.ops.push((
            inputs.iter().map(|s| s.to_string()).collect(),
            output.iter().map(|(n, c)| (n.to_string(), c.clone())).collect(),
        ));
        self
    }

    /// Like [`op`](Self::op) with integer coefficients.
    pub fn op_i(self, inputs: &[&str], output: &[(&str, i64)]) -> Self {
        let f = self.field;
        let out: Vec<(&str, Scalar)> = output.iter().map(|(n, c)| (*n, f.from_i64(*c))).collect();
        self.op(inputs, &out)
    }

    pub fn arity_bound(mut self, n: usize) -> Self {
        self.arity_bound = n;
        self
    }

    pub fn build(self) -> Result<AInfCategory> {
        let field = self.field;
        if self.arity_bound < 2 {
            return Err(Error::Input("arity bound must be at least 2".into()));
        }
        let mut seen = BTreeSet::new();
        for o in &self.objects {
            if !seen.insert(o.clone()) {
                return Err(Error::Input(format!("duplicate object {o:?}")));
            }
        }
        let object_id = |name: &str| -> Result<usize> {
            self.objects
                .iter()
                .position(|o| o == name)
                .ok_or_else(|| Error::Input(format!("unknown object {name:?}")))
        };
        let mut generators: Vec<Generator> = self
            .objects
            .iter()
            .enumerate()
            .map(|(i, o)| Generator { name: format!("id_{o}"), source: i, target: i, degree: 0, is_unit: true })
            .collect();
        for (name, s, t, d) in &self.morphisms {
            generators.push(Generator {
                name: name.clone(),
                source: object_id(s)?,
                target: object_id(t)?,
                degree: *d,
                is_unit: false,
            });
        }
        let mut names = BTreeSet::new();
        for g in &generators {
            if !names.insert(g.name.clone()) {
                return Err(Error::Input(format!("duplicate morphism name {:?}", g.name)));
            }
        }
        let gen_id = |name: &str| -> Result<usize> {
            generators
                .iter()
                .position(|g| g.name == name)
                .ok_or_else(|| Error::Input(format!("unknown morphism {name:?}")))
        };
        let n_obj = self.objects.len();
        let mut homs = vec![vec![Vec::new(); n_obj]; n_obj];
        for (i, g) in generators.iter().enumerate() {
            homs[g.source][g.target].push(i);
        }
        let mut ops: BTreeMap<Vec<usize>, LinComb> = BTreeMap::new();
        for (inputs, output) in &self.ops {
            let args = inputs.iter().map(|n| gen_id(n)).collect::<Result<Vec<_>>>()?;
            let label = inputs.join(",");
            let n = args.len();
            if n == 0 || n > self.arity_bound {
                return Err(Error::Input(format!("m_{n}({label}): arity outside 1..={}", self.arity_bound)));
            }
            if let Some(&u) = args.iter().find(|&&a| generators[a].is_unit) {
                return Err(Error::Input(format!(
                    "m_{n}({label}): unit {} is handled by strict unitality and cannot be given",
                    generators[u].name
                )));
            }
            if !args.windows(2).all(|w| generators[w[0]].source == generators[w[1]].target) {
                return Err(Error::Input(format!("m_{n}({label}): arguments are not composable")));
            }
            let (src, tgt) = (generators[args[n - 1]].source, generators[args[0]].target);
            let deg: i32 = args.iter().map(|&a| generators[a].degree).sum::<i32>() + 2 - n as i32;
            let mut value = LinComb::new();
            for (name, c) in output {
                let g = gen_id(name)?;
                let gen = &generators[g];
                if gen.source != src || gen.target != tgt {
                    return Err(Error::Input(format!("m_{n}({label}): output {name} is not in the right hom space")));
                }
                if gen.degree != deg {
                    return Err(Error::Input(format!(
                        "m_{n}({label}): output {name} has degree {}, expected {deg}",
                        gen.degree
                    )));
                }
                add_scaled(field, &mut value, &field.one(), &single(g, c.clone()));
            }
            if ops.contains_key(&args) {
                return Err(Error::Input(format!("m_{n}({label}) declared twice")));
            }
            if !value.is_empty() {
                ops.insert(args, value);
            }
        }
        Ok(AInfCategory {
            field,
            objects: self.objects,
            generators,
            homs,
            ops,
            arity_bound: self.arity_bound,
            dg_provenance: false,
        })
    }
}
