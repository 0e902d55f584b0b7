//! Graded vector spaces, cochain complexes and their cohomology.

mod complex;
mod space;

pub use complex::{
    chain_map_defect, cohomology, cohomology_in, induced_map_on_cohomology, induced_map_with, is_isomorphism,
    is_quasi_iso, verify_differential, CochainComplex, Cohomology, DegreeCohomology, DifferentialReport,
    DifferentialViolation,
};
pub use space::{GradedLinearMap, GradedVectorSpace};
