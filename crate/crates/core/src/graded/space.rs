use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactlin::{FieldSpec, Matrix};

/// A finite-dimensional ℤ-graded vector space with labelled basis vectors.
/// Degrees of dimension zero never appear in `labels`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedVectorSpace {
    field: FieldSpec,
    labels: BTreeMap<i32, Vec<String>>,
}

impl GradedVectorSpace {
    pub fn new(field: FieldSpec, labels: BTreeMap<i32, Vec<String>>) -> Self {
        let labels = labels.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        GradedVectorSpace { field, labels }
    }

    pub fn zero(field: FieldSpec) -> Self {
        Self::new(field, BTreeMap::new())
    }

    /// Builds the space from `(label, degree)` pairs; order within a degree is kept.
    pub fn from_basis<S: Into<String>>(field: FieldSpec, basis: impl IntoIterator<Item = (S, i32)>) -> Self {
        let mut labels: BTreeMap<i32, Vec<String>> = BTreeMap::new();
        for (l, d) in basis {
            labels.entry(d).or_default().push(l.into());
        }
        Self::new(field, labels)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.labels.get(&degree).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.labels.values().map(Vec::len).sum()
    }

    pub fn labels(&self, degree: i32) -> &[String] {
        self.labels.get(&degree).map_or(&[], Vec::as_slice)
    }

    /// Degrees with nonzero dimension, ascending.
    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.labels.keys().copied()
    }

    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.labels.iter().map(|(d, v)| (*d, v.len())).collect()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.labels.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.labels.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.labels.is_empty()
    }
}

/// A homogeneous linear map of degree `shift`; `blocks[d]` maps the degree-`d`
/// part of the source to the degree-`d + shift` part of the target. Absent
/// blocks are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedLinearMap {
    source: GradedVectorSpace,
    target: GradedVectorSpace,
    shift: i32,
    blocks: BTreeMap<i32, Matrix>,
}

impl GradedLinearMap {
    pub fn new(
        source: GradedVectorSpace,
        target: GradedVectorSpace,
        shift: i32,
        blocks: BTreeMap<i32, Matrix>,
    ) -> Result<Self> {
        for (&d, m) in &blocks {
            let (rows, cols) = (target.dim(d + shift), source.dim(d));
            if m.rows() != rows || m.cols() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "block at degree {d} is {}x{}, expected {rows}x{cols}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let blocks = blocks.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        Ok(GradedLinearMap { source, target, shift, blocks })
    }

    pub fn zero(source: GradedVectorSpace, target: GradedVectorSpace, shift: i32) -> Self {
        GradedLinearMap { source, target, shift, blocks: BTreeMap::new() }
    }

    pub fn identity(space: &GradedVectorSpace) -> Self {
        let blocks = space.degrees().map(|d| (d, Matrix::identity(space.field(), space.dim(d)))).collect();
        GradedLinearMap { source: space.clone(), target: space.clone(), shift: 0, blocks }
    }

    pub fn source(&self) -> &GradedVectorSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedVectorSpace {
        &self.target
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn block(&self, degree: i32) -> Matrix {
        self.blocks.get(&degree).cloned().unwrap_or_else(|| {
            Matrix::zeros(self.source.field(), self.target.dim(degree + self.shift), self.source.dim(degree))
        })
    }

    pub fn blocks(&self) -> &BTreeMap<i32, Matrix> {
        &self.blocks
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedLinearMap) -> Result<GradedLinearMap> {
        if other.target != self.source {
            return Err(Error::DimensionMismatch("composing maps with mismatched middle space".into()));
        }
        let mut blocks = BTreeMap::new();
        for d in other.source.degrees() {
            let m = self.block(d + other.shift).mul(&other.block(d))?;
            blocks.insert(d, m);
        }
        GradedLinearMap::new(other.source.clone(), self.target.clone(), self.shift + other.shift, blocks)
    }
}
