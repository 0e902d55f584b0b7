//! Finite relative categories: localization by zigzag classes, the
//! component category of the hammock localization, and Dwyer–Kan
//! adjunctions.

mod adjunction;
mod category;
mod hammock;
mod localize;
mod zigzag;

pub use adjunction::{
    check_dk_adjunction, galois_adjunction, random_galois_adjunction, walking_arrow_adjunction, AdjunctionData, DkReport,
};
pub use category::{
    check_relative_functor, examples, FiniteCategory, FiniteCategoryBuilder, FiniteRelativeCategory, FunctorViolation, Morphism,
    RelativeFunctor, RelativeFunctorReport,
};
pub use hammock::{hammock_pi0, ComparisonFunctor, HammockPi0};
pub use localize::{
    check_localization_equivalence, effective_width, hom_inventory, homotopy_category_functor, localize, AtBound, IsoWitness,
    LocalizationEquivalence, LocalizationFunctor, PresentedLocalization,
};
pub use zigzag::{enumerate, ClassStructure, Zigzag, ZigzagClass};
