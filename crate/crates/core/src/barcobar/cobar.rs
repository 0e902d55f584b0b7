use std::collections::HashMap;

use super::bar::{bar, TruncatedBarCocategory};
use crate::ainf::{add_scaled, single, AInfCategory, AInfLike, Generator, LinComb};
use crate::error::{Error, Result};
use crate::exactlin::FieldSpec;

/// A cobar stage: words `[c_1][c_2]…[c_k]` of bar words with total letter
/// count `≤ L`, composition by concatenation, and units as empty words.
///
/// Generator ids `0..objects` are the units; the rest are nonempty words.
#[derive(Debug, Clone)]
pub struct TruncatedDGCategory {
    bar: TruncatedBarCocategory,
    generators: Vec<Generator>,
    homs: Vec<Vec<Vec<usize>>>,
    /// Bar word ids making up each generator (empty for units).
    words: Vec<Vec<usize>>,
    lengths: Vec<usize>,
    index: HashMap<Vec<usize>, usize>,
    differential: Vec<LinComb>,
}

/// Cobar construction of a bar stage, with `d² = 0` and associativity of
/// concatenation certified within the stage.
pub fn cobar(b: &TruncatedBarCocategory) -> Result<TruncatedDGCategory> {
    let base = b.base();
    let n_obj = base.objects().len();
    let bound = b.length_bound();
    let mut generators: Vec<Generator> = base.generators()[..n_obj].to_vec();
    let mut words: Vec<Vec<usize>> = vec![Vec::new(); n_obj];
    let mut lengths = vec![0; n_obj];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let bar_words = b.words();
    let mut by_target: Vec<Vec<usize>> = vec![Vec::new(); n_obj];
    for (i, w) in bar_words.iter().enumerate() {
        by_target[w.target].push(i);
    }
    let mut stack: Vec<(Vec<usize>, usize)> = (0..bar_words.len()).rev().map(|i| (vec![i], bar_words[i].letters.len())).collect();
    while let Some((seq, len)) = stack.pop() {
        let (first, last) = (&bar_words[seq[0]], &bar_words[*seq.last().unwrap()]);
        let name: String = seq.iter().map(|&w| b.word_name(w)).collect();
        index.insert(seq.clone(), generators.len());
        generators.push(Generator {
            name,
            source: last.source,
            target: first.target,
            degree: seq.iter().map(|&w| bar_words[w].degree + 1).sum(),
            is_unit: false,
        });
        for &next in by_target[last.source].iter().rev() {
            let l = len + bar_words[next].letters.len();
            if l <= bound {
                let mut s = seq.clone();
                s.push(next);
                stack.push((s, l));
            }
        }
        words.push(seq);
        lengths.push(len);
    }
    let mut homs = vec![vec![Vec::new(); n_obj]; n_obj];
    for (i, g) in generators.iter().enumerate() {
        homs[g.source][g.target].push(i);
    }
    let mut stage = TruncatedDGCategory { bar: b.clone(), generators, homs, words, lengths, index, differential: Vec::new() };
    stage.differential = (0..stage.generators.len()).map(|g| stage.compute_differential(g)).collect::<Result<_>>()?;
    stage.certify()?;
    Ok(stage)
}

/// `Ω(B(a))` at total length `L`.
pub fn rectify(a: &AInfCategory, length_bound: usize) -> Result<TruncatedDGCategory> {
    cobar(&bar(a, length_bound)?)
}

impl TruncatedDGCategory {
    pub fn bar(&self) -> &TruncatedBarCocategory {
        &self.bar
    }

    pub fn length_bound(&self) -> usize {
        self.bar.length_bound()
    }

    /// Bar word ids of a generator, left to right.
    pub fn word(&self, g: usize) -> &[usize] {
        &self.words[g]
    }

    /// Total number of base letters in a generator.
    pub fn total_length(&self, g: usize) -> usize {
        self.lengths[g]
    }

    /// The generator spelled by a sequence of bar words (`[]` is not a unit
    /// lookup; use [`AInfLike::unit`]).
    pub fn generator_of(&self, seq: &[usize]) -> Option<usize> {
        self.index.get(seq).copied()
    }

    /// The single-letter generator `[w]` of a bar word.
    pub fn letter(&self, bar_word: usize) -> usize {
        self.index[&vec![bar_word]]
    }

    /// Base letters of each cobar letter of `g`; a stage-independent key.
    pub fn spelling(&self, g: usize) -> Vec<Vec<usize>> {
        self.words[g].iter().map(|&w| self.bar.words()[w].letters.clone()).collect()
    }

    /// The generator of this stage spelled like `g` in `other` (units map to
    /// units), if it lies in this stage.
    pub fn same_generator(&self, other: &TruncatedDGCategory, g: usize) -> Option<usize> {
        if other.words[g].is_empty() {
            return Some(g);
        }
        self.generator_by_spelling(&other.spelling(g))
    }

    /// Generator with the given spelling, if it lies in this stage.
    pub fn generator_by_spelling(&self, spelling: &[Vec<usize>]) -> Option<usize> {
        let seq: Option<Vec<usize>> = spelling.iter().map(|l| self.bar.word_id(l)).collect();
        self.generator_of(&seq?)
    }

    fn concat(&self, parts: &[&[usize]], object: usize) -> Result<usize> {
        let seq: Vec<usize> = parts.concat();
        if seq.is_empty() {
            return Ok(object);
        }
        self.generator_of(&seq).ok_or_else(|| Error::Internal("cobar differential left the stage".into()))
    }

    /// `d` of a single bar letter `[w]`: the bar differential, the unit
    /// term, and deconcatenation `−Σ (−1)^{|[w₁]|} [w₁][w₂]`.
    fn letter_differential(&self, w: usize, object: usize) -> Result<LinComb> {
        let field = self.field();
        let mut acc = LinComb::new();
        for (v, c) in self.bar.differential(w) {
            add_scaled(field, &mut acc, c, &single(self.concat(&[&[*v]], object)?, field.one()));
        }
        if let Some(c) = self.bar.unit_term(w) {
            add_scaled(field, &mut acc, c, &single(object, field.one()));
        }
        let letters = &self.bar.words()[w].letters;
        for i in 1..letters.len() {
            let (Some(w1), Some(w2)) = (self.bar.word_id(&letters[..i]), self.bar.word_id(&letters[i..])) else {
                return Err(Error::Internal("bar word factor missing".into()));
            };
            let g1 = self.bar.words()[w1].degree + 1;
            let coeff = field.signed(field.one(), g1.rem_euclid(2) == 0);
            add_scaled(field, &mut acc, &coeff, &single(self.concat(&[&[w1, w2]], object)?, field.one()));
        }
        Ok(acc)
    }

    fn compute_differential(&self, g: usize) -> Result<LinComb> {
        let field = self.field();
        let seq = &self.words[g];
        if seq.is_empty() {
            return Ok(LinComb::new());
        }
        let mut acc = LinComb::new();
        let mut prefix = 0i32;
        for i in 0..seq.len() {
            let w = seq[i];
            let object = self.bar.words()[w].source;
            let sign = field.signed(field.one(), prefix.rem_euclid(2) == 1);
            for (h, c) in self.letter_differential(w, object)? {
                let middle: &[usize] = &self.words[h];
                let whole = self.concat(&[&seq[..i], middle, &seq[i + 1..]], self.generators[g].source)?;
                add_scaled(field, &mut acc, &field.mul(&sign, &c), &single(whole, field.one()));
            }
            prefix += self.bar.words()[w].degree + 1;
        }
        Ok(acc)
    }

    fn certify(&self) -> Result<()> {
        let field = self.field();
        for g in 0..self.generators.len() {
            let mut dd = LinComb::new();
            for (h, c) in &self.differential[g] {
                let (gg, hh) = (&self.generators[g], &self.generators[*h]);
                if hh.degree != gg.degree + 1 || hh.source != gg.source || hh.target != gg.target {
                    return Err(Error::Internal(format!("cobar differential of {} leaves its hom space", gg.name)));
                }
                add_scaled(field, &mut dd, c, &self.differential[*h]);
            }
            if !dd.is_empty() {
                return Err(Error::Internal(format!("d∘d ≠ 0 on {}", self.generators[g].name)));
            }
            // Associativity of concatenation on every triple whose product is in the stage.
            let seq = &self.words[g];
            for i in 1..seq.len() {
                for j in i + 1..seq.len() {
                    let (a, b, c) = (&seq[..i], &seq[i..j], &seq[j..]);
                    let ab = self.generator_of(&[a, b].concat());
                    let bc = self.generator_of(&[b, c].concat());
                    let left = ab.and_then(|ab| self.generator_of(&[&self.words[ab][..], c].concat()));
                    let right = bc.and_then(|bc| self.generator_of(&[a, &self.words[bc][..]].concat()));
                    if left != Some(g) || right != Some(g) {
                        return Err(Error::Internal(format!("concatenation is not associative on {}", self.generators[g].name)));
                    }
                }
            }
        }
        Ok(())
    }
}

impl AInfLike for TruncatedDGCategory {
    fn field(&self) -> FieldSpec {
        self.bar.base().field()
    }

    fn objects(&self) -> &[String] {
        self.bar.base().objects()
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
        match args {
            [g] => Some(self.differential[*g].clone()),
            [g, f] => {
                if self.lengths[*g] + self.lengths[*f] > self.length_bound() {
                    return None;
                }
                let seq = [&self.words[*g][..], &self.words[*f][..]].concat();
                Some(single(self.index[&seq], self.field().one()))
            }
            _ => Some(LinComb::new()),
        }
    }

    fn arity_bound(&self) -> usize {
        usize::MAX
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn point_rectifies_to_itself() {
        let s = rectify(&catalog::point(FieldSpec::rationals()), 4).unwrap();
        assert_eq!(s.generators().len(), 1);
    }

    #[test]
    fn a2_stage() {
        let s = rectify(&catalog::a2_path(FieldSpec::rationals()), 3).unwrap();
        let hom = s.hom_basis(0, 1);
        assert_eq!(hom.len(), 1);
        let g = &s.generators()[hom[0]];
        assert_eq!((g.name.as_str(), g.degree), ("[f]", 0));
        assert!(s.structure_op(&[hom[0]]).unwrap().is_empty());
    }

    #[test]
    fn m3_and_matrix_units_square_to_zero() {
        for a in [catalog::m3_example(FieldSpec::rationals()), catalog::matrix_units(FieldSpec::prime(5))] {
            for l in 1..=6 {
                rectify(&a, l).unwrap();
            }
        }
    }
}
