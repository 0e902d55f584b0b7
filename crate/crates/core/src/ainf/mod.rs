mod category;
mod equivalence;
mod functor;
mod linear;
mod relations;

pub use category::{
    add_scaled, degree, hom_complex, include_dg, is_composable, multilinear, negate, op, render, shifted_op, single,
    suspension_parity, AInfCategory, AInfCategoryBuilder, AInfLike, Generator, LinComb, DEFAULT_ARITY_BOUND,
};
pub use functor::{check_functor_relations, compositions, functor_relation_value, AInfFunctor, FunctorBuilder};
pub use relations::{
    check_ainf_relations, for_each_tuple, relation_value, shifted_relation_value, RelationReport, RelationViolation,
};
pub use linear::{cohomology_category, coordinates, h0_category, ClassBasis, CohomologyCategory, LinearCategory};
pub use equivalence::{
    chain_map_failure, find_isomorphism, h_functor, h_functor_with, is_quasi_equivalence, two_sided_inverse, EssentialWitness, HomPairCheck,
    IsoSearch, LinearFunctor, QuasiEquivalenceCertificate, Verdict, ISO_SEARCH_MAX_DIM,
};

pub(crate) use equivalence::grid;
