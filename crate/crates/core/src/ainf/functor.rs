use std::collections::BTreeMap;

use super::category::{
    add_scaled, degree, is_composable, multilinear, negate, render, shifted_op, single, suspension_parity, AInfCategory,
    AInfLike, LinComb, DEFAULT_ARITY_BOUND,
};
use super::relations::{for_each_tuple, RelationReport, RelationViolation};
use crate::error::{Error, Result};
use crate::exactlin::Scalar;

/// A strictly unital A∞-functor. Components are stored on non-unit tuples
/// only; `F^1(e_X) = e_{FX}` and `F^n` kills units for `n ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AInfFunctor {
    object_map: Vec<usize>,
    components: BTreeMap<Vec<usize>, LinComb>,
    arity_bound: usize,
}

impl AInfFunctor {
    /// Assembles a functor from raw parts and validates it against its
    /// source and target.
    pub fn from_parts<S: AInfLike + ?Sized, T: AInfLike + ?Sized>(
        source: &S,
        target: &T,
        object_map: Vec<usize>,
        components: BTreeMap<Vec<usize>, LinComb>,
        arity_bound: usize,
    ) -> Result<Self> {
        let components = components.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        let f = AInfFunctor { object_map, components, arity_bound };
        f.validate(source, target)?;
        Ok(f)
    }

    pub fn identity<C: AInfLike + ?Sized>(cat: &C) -> Self {
        let one = cat.field().one();
        let components = cat
            .generators()
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.is_unit)
            .map(|(i, _)| (vec![i], single(i, one.clone())))
            .collect();
        AInfFunctor { object_map: (0..cat.objects().len()).collect(), components, arity_bound: cat.arity_bound() }
    }

    pub fn builder<'a>(source: &'a AInfCategory, target: &'a AInfCategory) -> FunctorBuilder<'a> {
        FunctorBuilder { source, target, objects: Vec::new(), components: Vec::new(), arity_bound: DEFAULT_ARITY_BOUND }
    }

    pub fn object_map(&self) -> &[usize] {
        &self.object_map
    }

    pub fn components(&self) -> &BTreeMap<Vec<usize>, LinComb> {
        &self.components
    }

    pub fn arity_bound(&self) -> usize {
        self.arity_bound
    }

    /// True iff `F^n = 0` for every `n ≥ 2`.
    pub fn is_strict(&self) -> bool {
        self.components.keys().all(|k| k.len() == 1)
    }

    /// `F^n(x_1, …, x_n)` on generators, with the strict-unit rules applied.
    pub fn component<S: AInfLike + ?Sized, T: AInfLike + ?Sized>(&self, source: &S, target: &T, args: &[usize]) -> LinComb {
        let gens = source.generators();
        let n = args.len();
        if n == 0 || n > self.arity_bound {
            return LinComb::new();
        }
        if let Some(&u) = args.iter().find(|&&a| gens[a].is_unit) {
            return if n == 1 {
                single(target.unit(self.object_map[gens[u].source]), target.field().one())
            } else {
                LinComb::new()
            };
        }
        self.components.get(args).cloned().unwrap_or_default()
    }

    /// `F^1` extended linearly.
    pub fn apply<S: AInfLike + ?Sized, T: AInfLike + ?Sized>(&self, source: &S, target: &T, v: &LinComb) -> LinComb {
        let field = target.field();
        let mut acc = LinComb::new();
        for (g, c) in v {
            add_scaled(field, &mut acc, c, &self.component(source, target, &[*g]));
        }
        acc
    }

    /// The suspended component: `F^n` times the suspension sign of its inputs.
    pub fn shifted_component<S: AInfLike + ?Sized, T: AInfLike + ?Sized>(
        &self,
        source: &S,
        target: &T,
        args: &[usize],
    ) -> LinComb {
        let v = self.component(source, target, args);
        if suspension_parity(args.iter().map(|&a| degree(source, a))) {
            negate(target.field(), &v)
        } else {
            v
        }
    }

    pub fn validate<S: AInfLike + ?Sized, T: AInfLike + ?Sized>(&self, source: &S, target: &T) -> Result<()> {
        if self.object_map.len() != source.objects().len() {
            return Err(Error::Input("object map does not cover the source objects".into()));
        }
        if let Some(o) = self.object_map.iter().find(|&&o| o >= target.objects().len()) {
            return Err(Error::Input(format!("object map points at missing target object {o}")));
        }
        let (sg, tg) = (source.generators(), target.generators());
        for (args, value) in &self.components {
            let label = args.iter().map(|&a| sg[a].name.as_str()).collect::<Vec<_>>().join(",");
            let n = args.len();
            if n == 0 || n > self.arity_bound {
                return Err(Error::Input(format!("F^{n}({label}): arity outside 1..={}", self.arity_bound)));
            }
            if args.iter().any(|&a| sg[a].is_unit) {
                return Err(Error::Input(format!("F^{n}({label}): components on units are fixed by strict unitality")));
            }
            if !is_composable(source, args) {
                return Err(Error::Input(format!("F^{n}({label}): arguments are not composable")));
            }
            let src = self.object_map[sg[args[n - 1]].source];
            let tgt = self.object_map[sg[args[0]].target];
            let deg = args.iter().map(|&a| sg[a].degree).sum::<i32>() + 1 - n as i32;
            for h in value.keys() {
                if tg[*h].source != src || tg[*h].target != tgt || tg[*h].degree != deg {
                    return Err(Error::Input(format!(
                        "F^{n}({label}): output {} is not in the expected hom space of degree {deg}",
                        tg[*h].name
                    )));
                }
            }
        }
        Ok(())
    }

    /// `g ∘ f` as A∞-functors: `(g∘f)^n = Σ g^q(f^{i_1} ⊗ … ⊗ f^{i_q})` in
    /// suspended form.
    pub fn compose<A: AInfLike + ?Sized, B: AInfLike + ?Sized, C: AInfLike + ?Sized>(
        f: &AInfFunctor,
        g: &AInfFunctor,
        a: &A,
        b: &B,
        c: &C,
    ) -> Result<AInfFunctor> {
        let bound = f.arity_bound.min(g.arity_bound);
        let mut components = BTreeMap::new();
        for n in 1..=bound {
            for_each_tuple(a, n, true, |x| {
                let mut acc = LinComb::new();
                for blocks in compositions(n) {
                    let inputs: Vec<LinComb> = blocks.iter().map(|&(lo, hi)| f.shifted_component(a, b, &x[lo..hi])).collect();
                    if inputs.iter().any(LinComb::is_empty) {
                        continue;
                    }
                    let v = multilinear(c.field(), &inputs, |ys| Some(g.shifted_component(b, c, ys))).unwrap();
                    add_scaled(c.field(), &mut acc, &c.field().one(), &v);
                }
                if suspension_parity(x.iter().map(|&i| degree(a, i))) {
                    acc = negate(c.field(), &acc);
                }
                if !acc.is_empty() {
                    components.insert(x.to_vec(), acc);
                }
            });
        }
        let object_map = f.object_map.iter().map(|&o| g.object_map[o]).collect();
        AInfFunctor::from_parts(a, c, object_map, components, bound)
    }
}

/// Ways to cut `0..n` into consecutive nonempty blocks, as `(start, end)`.
pub fn compositions(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for mask in 0..1u64 << (n - 1) {
        let mut blocks = Vec::new();
        let mut start = 0;
        for i in 1..n {
            if mask >> (i - 1) & 1 == 1 {
                blocks.push((start, i));
                start = i;
            }
        }
        blocks.push((start, n));
        out.push(blocks);
    }
    out
}

/// Difference of the two sides of the functor relation on one tuple, in
/// suspended form. `None` if a target operation left a truncation.
pub fn functor_relation_value<S: AInfLike + ?Sized, T: AInfLike + ?Sized>(
    source: &S,
    target: &T,
    f: &AInfFunctor,
    x: &[usize],
) -> Option<LinComb> {
    let field = target.field();
    let n = x.len();
    let mut acc = LinComb::new();
    let mut args = Vec::with_capacity(n);
    let mut prefix = 0i64;
    for r in 0..n {
        let sign = if prefix.rem_euclid(2) == 1 { field.neg(&field.one()) } else { field.one() };
        for s in 1..=n - r {
            let inner = shifted_op(source, &x[r..r + s])?;
            for (g, c) in inner {
                args.clear();
                args.extend_from_slice(&x[..r]);
                args.push(g);
                args.extend_from_slice(&x[r + s..]);
                let coeff = field.mul(&sign, &c);
                add_scaled(field, &mut acc, &coeff, &f.shifted_component(source, target, &args));
            }
        }
        prefix += degree(source, x[r]) as i64 - 1;
    }
    let minus_one = field.neg(&field.one());
    for blocks in compositions(n) {
        let inputs: Vec<LinComb> = blocks.iter().map(|&(lo, hi)| f.shifted_component(source, target, &x[lo..hi])).collect();
        if inputs.iter().any(LinComb::is_empty) {
            continue;
        }
        let v = multilinear(field, &inputs, |ys| shifted_op(target, ys))?;
        add_scaled(field, &mut acc, &minus_one, &v);
    }
    Some(acc)
}

/// Checks the functor relations on every basis tuple of arity `1..=n_max`.
pub fn check_functor_relations<S: AInfLike + ?Sized, T: AInfLike + ?Sized>(
    source: &S,
    target: &T,
    f: &AInfFunctor,
    n_max: usize,
) -> Result<RelationReport> {
    let bound = source.arity_bound().min(target.arity_bound());
    if n_max > bound {
        return Err(Error::Input(format!("cannot check arity {n_max}: operations are only known up to arity {bound}")));
    }
    f.validate(source, target)?;
    let (sg, tg) = (source.generators(), target.generators());
    let mut report = RelationReport { arity_checked: n_max, tuples_checked: 0, violations: Vec::new(), out_of_stage: Vec::new() };
    for n in 1..=n_max {
        for_each_tuple(source, n, false, |x| {
            report.tuples_checked += 1;
            let names = || x.iter().map(|&g| sg[g].name.clone()).collect::<Vec<_>>();
            match functor_relation_value(source, target, f, x) {
                None => report.out_of_stage.push(names()),
                Some(v) if v.is_empty() => {}
                Some(v) => report.violations.push(RelationViolation { arity: n, tuple: names(), value: render(tg, &v) }),
            }
        });
    }
    report.violations.sort();
    report.out_of_stage.sort();
    Ok(report)
}

/// Declarative construction of a functor between named categories.
#[derive(Debug, Clone)]
pub struct FunctorBuilder<'a> {
    source: &'a AInfCategory,
    target: &'a AInfCategory,
    objects: Vec<(String, String)>,
    components: Vec<(Vec<String>, Vec<(String, Scalar)>)>,
    arity_bound: usize,
}

impl FunctorBuilder<'_> {
    pub fn object(mut self, from: &str, to: &str) -> Self {
        self.objects.push((from.into(), to.into()));
        self
    }

    pub fn component(mut self, inputs: &[&str], output: &[(&str, Scalar)]) -> Self {
        self.components.push((
            inputs.iter().map(|s| s.to_string()).collect(),
            output.iter().map(|(n, c)| (n.to_string(), c.clone())).collect(),
        ));
        self
    }

    pub fn component_i(self, inputs: &[&str], output: &[(&str, i64)]) -> Self {
        let f = self.target.field();
        let out: Vec<(&str, Scalar)> = output.iter().map(|(n, c)| (*n, f.from_i64(*c))).collect();
        self.component(inputs, &out)
    }

    pub fn arity_bound(mut self, n: usize) -> Self {
        self.arity_bound = n;
        self
    }

    pub fn build(self) -> Result<AInfFunctor> {
        let (s, t) = (self.source, self.target);
        if s.field() != t.field() {
            return Err(Error::Input("source and target are over different fields".into()));
        }
        let mut object_map = vec![None; s.objects().len()];
        for (from, to) in &self.objects {
            let i = s.object_id(from).ok_or_else(|| Error::Input(format!("unknown source object {from:?}")))?;
            let j = t.object_id(to).ok_or_else(|| Error::Input(format!("unknown target object {to:?}")))?;
            if object_map[i].replace(j).is_some() {
                return Err(Error::Input(format!("object {from:?} mapped twice")));
            }
        }
        let object_map = object_map
            .into_iter()
            .enumerate()
            .map(|(i, o)| o.ok_or_else(|| Error::Input(format!("object {:?} is not mapped", s.objects()[i]))))
            .collect::<Result<Vec<_>>>()?;
        let mut components = BTreeMap::new();
        for (inputs, output) in &self.components {
            let args = inputs
                .iter()
                .map(|n| s.generator_id(n).ok_or_else(|| Error::Input(format!("unknown source morphism {n:?}"))))
                .collect::<Result<Vec<_>>>()?;
            let mut value = LinComb::new();
            for (n, c) in output {
                let g = t.generator_id(n).ok_or_else(|| Error::Input(format!("unknown target morphism {n:?}")))?;
                add_scaled(t.field(), &mut value, &t.field().one(), &single(g, c.clone()));
            }
            if components.insert(args, value).is_some() {
                return Err(Error::Input(format!("component on ({}) given twice", inputs.join(","))));
            }
        }
        AInfFunctor::from_parts(s, t, object_map, components, self.arity_bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::FieldSpec;

    #[test]
    fn compositions_count() {
        for n in 1..6 {
            assert_eq!(compositions(n).len(), 1 << (n - 1));
        }
        assert_eq!(compositions(3)[0], vec![(0, 3)]);
    }

    fn two_arrows() -> AInfCategory {
        AInfCategory::builder(FieldSpec::rationals())
            .objects(&["1", "2", "3"])
            .morphism("f", "1", "2", 0)
            .morphism("g", "2", "3", 0)
            .morphism("h", "1", "3", 0)
            .op_i(&["g", "f"], &[("h", 1)])
            .build()
            .unwrap()
    }

    #[test]
    fn identity_functor_satisfies_relations() {
        let a = two_arrows();
        let id = AInfFunctor::identity(&a);
        assert!(id.is_strict());
        assert!(check_functor_relations(&a, &a, &id, 4).unwrap().holds());
    }

    #[test]
    fn broken_composition_is_flagged_at_arity_two() {
        let a = two_arrows();
        let f = AInfFunctor::builder(&a, &a)
            .object("1", "1")
            .object("2", "2")
            .object("3", "3")
            .component_i(&["f"], &[("f", 1)])
            .component_i(&["g"], &[("g", 1)])
            .component_i(&["h"], &[("h", 2)])
            .build()
            .unwrap();
        let report = check_functor_relations(&a, &a, &f, 3).unwrap();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].arity, 2);
        assert_eq!(report.violations[0].tuple, vec!["g".to_string(), "f".to_string()]);
    }

    #[test]
    fn arity_bounds_are_enforced() {
        let a = two_arrows().with_arity_bound(2).unwrap();
        let id = AInfFunctor::identity(&a);
        assert!(check_functor_relations(&a, &a, &id, 3).is_err());
    }
}
