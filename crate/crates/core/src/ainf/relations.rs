use serde::Serialize;

use super::category::{add_scaled, degree, op, render, shifted_op, AInfLike, LinComb};
use crate::error::{Error, Result};

/// Outcome of a relation check. An empty `violations` list means the
/// relations hold on every basis tuple of arity `≤ arity_checked`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub arity_checked: usize,
    pub tuples_checked: usize,
    pub violations: Vec<RelationViolation>,
    /// Tuples whose evaluation needed a value outside a truncation stage;
    /// these were checked only partially.
    pub out_of_stage: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct RelationViolation {
    pub arity: usize,
    pub tuple: Vec<String>,
    /// Nonzero value of the relation, as `(basis element, coefficient)`.
    pub value: Vec<(String, String)>,
}

impl RelationReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    fn finish(mut self) -> Self {
        self.violations.sort();
        self.out_of_stage.sort();
        self
    }
}

/// Calls `visit` on every composable tuple `(x_1, …, x_n)` of generators,
/// units included, in lexicographic order of generator ids.
pub fn for_each_tuple<C: AInfLike + ?Sized>(cat: &C, n: usize, skip_units: bool, mut visit: impl FnMut(&[usize])) {
    let gens = cat.generators();
    let n_obj = cat.objects().len();
    let mut by_target: Vec<Vec<usize>> = vec![Vec::new(); n_obj];
    for (i, g) in gens.iter().enumerate() {
        if !(skip_units && g.is_unit) {
            by_target[g.target].push(i);
        }
    }
    let first: Vec<usize> = (0..gens.len()).filter(|&i| !(skip_units && gens[i].is_unit)).collect();
    let mut tuple = Vec::with_capacity(n);
    fn go(
        gens: &[super::category::Generator],
        by_target: &[Vec<usize>],
        n: usize,
        tuple: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if tuple.len() == n {
            visit(tuple);
            return;
        }
        let obj = gens[*tuple.last().unwrap()].source;
        for &g in &by_target[obj] {
            tuple.push(g);
            go(gens, by_target, n, tuple, visit);
            tuple.pop();
        }
    }
    if n == 0 {
        return;
    }
    for g in first {
        tuple.push(g);
        go(gens, &by_target, n, &mut tuple, &mut visit);
        tuple.pop();
    }
}

/// `Σ_{r+s+t=n} (−1)^{r+st} m_{r+1+t}(1^{⊗r} ⊗ m_s ⊗ 1^{⊗t})` on one tuple,
/// with the Koszul sign for moving `m_s` past `x_1, …, x_r`.
pub fn relation_value<C: AInfLike + ?Sized>(cat: &C, x: &[usize]) -> Option<LinComb> {
    let field = cat.field();
    let n = x.len();
    let mut acc = LinComb::new();
    let mut prefix_deg = vec![0i64; n + 1];
    for i in 0..n {
        prefix_deg[i + 1] = prefix_deg[i] + degree(cat, x[i]) as i64;
    }
    let mut args = Vec::with_capacity(n);
    for s in 1..=n {
        for r in 0..=n - s {
            let t = n - r - s;
            let parity = (r + s * t) as i64 + (2 - s as i64) * prefix_deg[r];
            let sign = if parity.rem_euclid(2) == 1 { field.neg(&field.one()) } else { field.one() };
            let inner = op(cat, &x[r..r + s])?;
            for (g, c) in inner {
                args.clear();
                args.extend_from_slice(&x[..r]);
                args.push(g);
                args.extend_from_slice(&x[r + s..]);
                let outer = op(cat, &args)?;
                add_scaled(field, &mut acc, &field.mul(&sign, &c), &outer);
            }
        }
    }
    Some(acc)
}

/// The same relation in suspended form: the length-one component of `b∘b`
/// on the bar word `[x_1|…|x_n]`, desuspended. It vanishes exactly when
/// [`relation_value`] does.
pub fn shifted_relation_value<C: AInfLike + ?Sized>(cat: &C, x: &[usize]) -> Option<LinComb> {
    let field = cat.field();
    let n = x.len();
    let mut acc = LinComb::new();
    let mut args = Vec::with_capacity(n);
    let mut prefix = 0i64;
    for r in 0..n {
        for s in 1..=n - r {
            let sign = if prefix.rem_euclid(2) == 1 { field.neg(&field.one()) } else { field.one() };
            let inner = shifted_op(cat, &x[r..r + s])?;
            for (g, c) in inner {
                args.clear();
                args.extend_from_slice(&x[..r]);
                args.push(g);
                args.extend_from_slice(&x[r + s..]);
                let outer = shifted_op(cat, &args)?;
                add_scaled(field, &mut acc, &field.mul(&sign, &c), &outer);
            }
        }
        prefix += degree(cat, x[r]) as i64 - 1;
    }
    Some(acc)
}

/// Checks the A∞ relations on every basis tuple (units included) of arity
/// `1..=n_max`.
pub fn check_ainf_relations<C: AInfLike + ?Sized>(cat: &C, n_max: usize) -> Result<RelationReport> {
    if n_max > cat.arity_bound() {
        return Err(Error::Input(format!(
            "cannot check arity {n_max}: operations are only known up to arity {}",
            cat.arity_bound()
        )));
    }
    let gens = cat.generators();
    let mut report = RelationReport { arity_checked: n_max, tuples_checked: 0, violations: Vec::new(), out_of_stage: Vec::new() };
    for n in 1..=n_max {
        for_each_tuple(cat, n, false, |x| {
            report.tuples_checked += 1;
            let names = || x.iter().map(|&g| gens[g].name.clone()).collect::<Vec<_>>();
            match relation_value(cat, x) {
                None => report.out_of_stage.push(names()),
                Some(v) if v.is_empty() => {}
                Some(v) => report.violations.push(RelationViolation { arity: n, tuple: names(), value: render(gens, &v) }),
            }
        });
    }
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainf::category::AInfCategory;
    use crate::exactlin::FieldSpec;

    #[test]
    fn m3_example_holds_to_arity_six() {
        let a = AInfCategory::builder(FieldSpec::rationals())
            .object("X")
            .morphism("x", "X", "X", 1)
            .morphism("y", "X", "X", 2)
            .op_i(&["x", "x", "x"], &[("y", 1)])
            .build()
            .unwrap();
        let report = check_ainf_relations(&a, 6).unwrap();
        assert!(report.holds(), "{:?}", report.violations);
        assert_eq!(report.arity_checked, 6);
        // 3 generators, one object: Σ_{n=1}^{6} 3^n tuples.
        assert_eq!(report.tuples_checked, (1..=6).map(|n| 3usize.pow(n)).sum::<usize>());
    }

    #[test]
    fn refuses_arity_beyond_bound() {
        let a = AInfCategory::builder(FieldSpec::rationals()).object("X").arity_bound(3).build().unwrap();
        assert!(check_ainf_relations(&a, 4).is_err());
    }

    #[test]
    fn empty_category_is_valid() {
        let a = AInfCategory::builder(FieldSpec::rationals()).build().unwrap();
        let r = check_ainf_relations(&a, 6).unwrap();
        assert!(r.holds());
        assert_eq!(r.tuples_checked, 0);
    }
}

#[cfg(test)]
mod sign_tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::ainf::category::AInfCategory;
    use crate::exactlin::FieldSpec;

    /// Arbitrary (generally invalid) operations up to arity 3.
    fn random_structure(seed: u64) -> AInfCategory {
        let f = FieldSpec::prime(5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let objs = ["P", "Q"];
        let mut b = AInfCategory::builder(f).objects(&objs);
        let mut gens = Vec::new();
        for i in 0..5 {
            let (s, t) = (objs[rng.gen_range(0..2)], objs[rng.gen_range(0..2)]);
            let d = rng.gen_range(-1..=2);
            let name = format!("g{i}");
            b = b.morphism(&name, s, t, d);
            gens.push((name, s, t, d));
        }
        for n in 1..=3usize {
            let mut tuples: Vec<Vec<usize>> = (0..gens.len()).map(|i| vec![i]).collect();
            for _ in 1..n {
                let mut longer = Vec::new();
                for t in &tuples {
                    for j in 0..gens.len() {
                        if gens[*t.last().unwrap()].1 == gens[j].2 {
                            longer.push([t.as_slice(), &[j]].concat());
                        }
                    }
                }
                tuples = longer;
            }
            for t in tuples {
                let (src, tgt) = (gens[*t.last().unwrap()].1, gens[t[0]].2);
                let deg: i32 = t.iter().map(|&i| gens[i].3).sum::<i32>() + 2 - n as i32;
                let mut outs: Vec<(&str, i64)> = Vec::new();
                for g in &gens {
                    if g.1 == src && g.2 == tgt && g.3 == deg && rng.gen_bool(0.6) {
                        outs.push((g.0.as_str(), rng.gen_range(1..5)));
                    }
                }
                if !outs.is_empty() {
                    let names: Vec<&str> = t.iter().map(|&i| gens[i].0.as_str()).collect();
                    b = b.op_i(&names, &outs);
                }
            }
        }
        b.build().unwrap()
    }

    #[test]
    fn suspended_relation_matches_unsuspended() {
        let mut nonzero = 0;
        for seed in 0..40 {
            let a = random_structure(seed);
            for n in 1..=4 {
                for_each_tuple(&a, n, false, |x| {
                    let m = relation_value(&a, x).unwrap();
                    let b = shifted_relation_value(&a, x).unwrap();
                    let f = a.field();
                    let neg: LinComb = m.iter().map(|(g, c)| (*g, f.neg(c))).collect();
                    assert!(b == m || b == neg, "seed {seed}, tuple {x:?}: {m:?} vs {b:?}");
                    nonzero += usize::from(!m.is_empty());
                });
            }
        }
        assert!(nonzero > 100, "random structures were too tame: {nonzero}");
    }
}
