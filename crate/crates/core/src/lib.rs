//! Desk-scale computational models of A∞ and DG categories over exact fields:
//! relation checking, cohomology, quasi-equivalences, truncated bar–cobar
//! rectification, finite relative categories and their localizations, and
//! fibration predicates.

pub mod error;
pub mod ainf;
pub mod barcobar;
pub mod catalog;
pub mod corpus;
pub mod exactlin;
pub mod fibcheck;
pub mod graded;
pub mod relcat;

pub use error::{Error, Result};
