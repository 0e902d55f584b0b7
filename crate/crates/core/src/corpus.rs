//! Seeded random DG categories: quotients of path categories of small
//! graded quivers, with a differential pairing arrows.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ainf::AInfCategory;
use crate::exactlin::FieldSpec;

pub const SEED_ENV: &str = "RECTIFY_KIT_SEED";
pub const DEFAULT_SEED: u64 = 20_240_917;

/// Seed from `RECTIFY_KIT_SEED`, or `DEFAULT_SEED` when unset or unparsable.
pub fn seed_from_env() -> u64 {
    std::env::var(SEED_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusParams {
    pub max_objects: usize,
    pub max_arrows: usize,
    /// Cap on non-unit basis morphisms, keeping bar–cobar stages small.
    pub max_morphisms: usize,
    pub max_hom_dim: usize,
    pub degrees: (i32, i32),
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams { max_objects: 3, max_arrows: 4, max_morphisms: 5, max_hom_dim: 3, degrees: (-1, 2) }
    }
}

struct Arrow {
    source: usize,
    target: usize,
    degree: i32,
    /// `d(self) = c·arrows[i]`.
    d: Option<(usize, i64)>,
}

/// One random DG category: a graded quiver on up to `max_objects` objects
/// in which some arrows come in pairs `u, v` with `d u = c·v`, modulo all
/// paths of length three and every length-two path whose degree leaves the
/// degree range. The zeroed paths are closed under `d`, so the quotient is
/// again a DG category.
pub fn random_dg_category(field: FieldSpec, rng: &mut impl Rng, params: &CorpusParams) -> AInfCategory {
    let p = field.characteristic();
    let (lo, hi) = params.degrees;
    let coefficient = |rng: &mut dyn rand::RngCore| -> i64 {
        if p == 0 {
            rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 }
        } else {
            rng.gen_range(1..p as i64)
        }
    };
    loop {
        let n_obj = rng.gen_range(1..=params.max_objects);
        let target_arrows = rng.gen_range(1..=params.max_arrows);
        let mut arrows: Vec<Arrow> = Vec::new();
        while arrows.len() < target_arrows {
            let (source, target) = (rng.gen_range(0..n_obj), rng.gen_range(0..n_obj));
            if arrows.len() + 2 <= target_arrows && lo < hi && rng.gen_bool(0.7) {
                let degree = rng.gen_range(lo..hi);
                let c = coefficient(rng);
                arrows.push(Arrow { source, target, degree, d: Some((arrows.len() + 1, c)) });
                arrows.push(Arrow { source, target, degree: degree + 1, d: None });
            } else {
                arrows.push(Arrow { source, target, degree: rng.gen_range(lo..=hi), d: None });
            }
        }
        let composable: Vec<(usize, usize)> = (0..arrows.len())
            .flat_map(|b| (0..arrows.len()).map(move |a| (b, a)))
            .filter(|&(b, a)| arrows[b].source == arrows[a].target)
            .collect();
        let degree = |(b, a): (usize, usize)| arrows[a].degree + arrows[b].degree;
        // Zero paths out of range, then everything d reaches from a zero path.
        let mut zero: BTreeSet<(usize, usize)> = composable.iter().copied().filter(|&q| !(lo..=hi).contains(&degree(q))).collect();
        let mut stack: Vec<(usize, usize)> = zero.iter().copied().collect();
        while let Some((b, a)) = stack.pop() {
            for next in [arrows[b].d.map(|(b2, _)| (b2, a)), arrows[a].d.map(|(a2, _)| (b, a2))].into_iter().flatten() {
                if zero.insert(next) {
                    stack.push(next);
                }
            }
        }
        let paths: Vec<(usize, usize)> = composable.into_iter().filter(|q| !zero.contains(q)).collect();
        if arrows.len() + paths.len() > params.max_morphisms {
            continue;
        }
        let mut dims: BTreeMap<(usize, usize, i32), usize> = (0..n_obj).map(|o| ((o, o, 0), 1)).collect();
        for a in &arrows {
            *dims.entry((a.source, a.target, a.degree)).or_default() += 1;
        }
        for &(b, a) in &paths {
            *dims.entry((arrows[a].source, arrows[b].target, degree((b, a)))).or_default() += 1;
        }
        if dims.values().any(|&n| n > params.max_hom_dim) {
            continue;
        }
        return assemble(field, n_obj, &arrows, &paths);
    }
}

fn assemble(field: FieldSpec, n_obj: usize, arrows: &[Arrow], paths: &[(usize, usize)]) -> AInfCategory {
    let obj: Vec<String> = (0..n_obj).map(|i| format!("O{i}")).collect();
    let name = |a: usize| format!("a{a}");
    let path = |b: usize, a: usize| format!("a{b}*a{a}");
    let is_path: BTreeSet<(usize, usize)> = paths.iter().copied().collect();
    let mut builder = AInfCategory::builder(field).objects(&obj.iter().map(String::as_str).collect::<Vec<_>>());
    for (i, a) in arrows.iter().enumerate() {
        builder = builder.morphism(&name(i), &obj[a.source], &obj[a.target], a.degree);
    }
    for &(b, a) in paths {
        builder = builder.morphism(&path(b, a), &obj[arrows[a].source], &obj[arrows[b].target], arrows[a].degree + arrows[b].degree);
    }
    for (i, a) in arrows.iter().enumerate() {
        if let Some((b, c)) = a.d {
            builder = builder.op_i(&[&name(i)], &[(&name(b), c)]);
        }
    }
    for &(b, a) in paths {
        builder = builder.op_i(&[&name(b), &name(a)], &[(&path(b, a), 1)]);
        // d(b·a) = d(b)·a + (−1)^{|b|} b·d(a), dropping zeroed paths.
        let mut terms: BTreeMap<String, i64> = BTreeMap::new();
        if let Some((b2, c)) = arrows[b].d.filter(|&(b2, _)| is_path.contains(&(b2, a))) {
            *terms.entry(path(b2, a)).or_default() += c;
        }
        if let Some((a2, c)) = arrows[a].d.filter(|&(a2, _)| is_path.contains(&(b, a2))) {
            let sign = if arrows[b].degree.rem_euclid(2) == 1 { -1 } else { 1 };
            *terms.entry(path(b, a2)).or_default() += sign * c;
        }
        let out: Vec<(&str, i64)> = terms.iter().map(|(n, c)| (n.as_str(), *c)).collect();
        if !out.is_empty() {
            builder = builder.op_i(&[&path(b, a)], &out);
        }
    }
    builder.build().expect("generated category is well formed")
}

/// `count` random DG categories from a fixed seed.
pub fn dg_corpus(field: FieldSpec, seed: u64, count: usize, params: &CorpusParams) -> Vec<AInfCategory> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_dg_category(field, &mut rng, params)).collect()
}
