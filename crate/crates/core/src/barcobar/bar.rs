use std::collections::HashMap;

use crate::ainf::{add_scaled, check_ainf_relations, for_each_tuple, shifted_op, AInfCategory, AInfLike, LinComb};
use crate::error::{Error, Result};
use crate::exactlin::Scalar;

/// A normalized bar word `[a_1|…|a_n]` of non-unit letters in composition
/// order, of degree `Σ|a_i| − n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarWord {
    pub letters: Vec<usize>,
    pub source: usize,
    pub target: usize,
    pub degree: i32,
}

/// The span of bar words of length `≤ L` with the bar differential.
#[derive(Debug, Clone)]
pub struct TruncatedBarCocategory {
    base: AInfCategory,
    length_bound: usize,
    words: Vec<BarWord>,
    index: HashMap<Vec<usize>, usize>,
    differential: Vec<LinComb>,
    /// Coefficient of the unit when all letters of a word collapse to it.
    unit_terms: Vec<Option<Scalar>>,
}

/// Bar construction truncated at length `L`, after checking the input's
/// relations up to arity `min(L, arity_bound)`.
pub fn bar(a: &AInfCategory, length_bound: usize) -> Result<TruncatedBarCocategory> {
    let report = check_ainf_relations(a, length_bound.min(a.arity_bound()))?;
    if let Some(v) = report.violations.first() {
        return Err(Error::Relations(format!(
            "A∞ relation fails at arity {} on ({})",
            v.arity,
            v.tuple.join(", ")
        )));
    }
    bar_unchecked(a, length_bound)
}

pub(crate) fn bar_unchecked(a: &AInfCategory, length_bound: usize) -> Result<TruncatedBarCocategory> {
    if length_bound == 0 {
        return Err(Error::Input("the length bound must be at least 1".into()));
    }
    let gens = a.generators();
    let mut words = Vec::new();
    let mut index = HashMap::new();
    for n in 1..=length_bound {
        for_each_tuple(a, n, true, |x| {
            index.insert(x.to_vec(), words.len());
            words.push(BarWord {
                letters: x.to_vec(),
                source: gens[x[n - 1]].source,
                target: gens[x[0]].target,
                degree: x.iter().map(|&g| gens[g].degree).sum::<i32>() - n as i32,
            });
        });
    }
    let field = a.field();
    let mut differential = Vec::with_capacity(words.len());
    let mut unit_terms = Vec::with_capacity(words.len());
    for w in &words {
        let x = &w.letters;
        let n = x.len();
        let mut acc = LinComb::new();
        let mut unit = field.zero();
        let mut prefix = 0i64;
        for r in 0..n {
            let sign = field.signed(field.one(), prefix.rem_euclid(2) == 1);
            for s in 1..=n - r {
                let inner = shifted_op(a, &x[r..r + s]).expect("base operations are total");
                for (g, c) in inner {
                    let c = field.mul(&sign, &c);
                    if gens[g].is_unit {
                        if s == n {
                            unit = field.add(&unit, &c);
                        }
                        continue;
                    }
                    let letters = [&x[..r], &[g], &x[r + s..]].concat();
                    add_scaled(field, &mut acc, &c, &LinComb::from([(index[&letters], field.one())]));
                }
            }
            prefix += gens[x[r]].degree as i64 - 1;
        }
        differential.push(acc);
        unit_terms.push((!unit.is_zero()).then_some(unit));
    }
    let bar = TruncatedBarCocategory { base: a.clone(), length_bound, words, index, differential, unit_terms };
    bar.certify()?;
    Ok(bar)
}

impl TruncatedBarCocategory {
    pub fn base(&self) -> &AInfCategory {
        &self.base
    }

    pub fn length_bound(&self) -> usize {
        self.length_bound
    }

    pub fn words(&self) -> &[BarWord] {
        &self.words
    }

    pub fn word_id(&self, letters: &[usize]) -> Option<usize> {
        self.index.get(letters).copied()
    }

    /// `b` of a word, over word ids (terms with a unit letter are zero).
    pub fn differential(&self, word: usize) -> &LinComb {
        &self.differential[word]
    }

    pub fn unit_term(&self, word: usize) -> Option<&Scalar> {
        self.unit_terms[word].as_ref()
    }

    pub fn word_name(&self, word: usize) -> String {
        let gens = self.base.generators();
        let names: Vec<&str> = self.words[word].letters.iter().map(|&g| gens[g].name.as_str()).collect();
        format!("[{}]", names.join("|"))
    }

    /// Dimensions of the bar spaces, keyed by `(source, target, degree)`.
    pub fn dims(&self) -> std::collections::BTreeMap<(usize, usize, i32), usize> {
        let mut out = std::collections::BTreeMap::new();
        for w in &self.words {
            *out.entry((w.source, w.target, w.degree)).or_default() += 1;
        }
        out
    }

    /// Checks that `b` has degree +1, stays on one hom space, and squares to zero.
    fn certify(&self) -> Result<()> {
        let field = self.base.field();
        for (i, w) in self.words.iter().enumerate() {
            let mut bb = LinComb::new();
            for (j, c) in &self.differential[i] {
                let v = &self.words[*j];
                if v.degree != w.degree + 1 || v.source != w.source || v.target != w.target {
                    return Err(Error::Internal(format!("bar differential of {} leaves its hom space", self.word_name(i))));
                }
                add_scaled(field, &mut bb, c, &self.differential[*j]);
            }
            if !bb.is_empty() {
                return Err(Error::Internal(format!("b∘b ≠ 0 on {}", self.word_name(i))));
            }
        }
        Ok(())
    }
}
