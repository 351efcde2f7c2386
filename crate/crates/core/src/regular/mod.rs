//! Additive regular categories as subobject-closed subcategories of module
//! categories, with their one-sided exact structure.

mod axioms;
mod category;
mod predicate;

pub use axioms::{
    check_axiom, check_subobject_closed, enumerate_members, run_axiom, sample_axiom, Axiom, AxiomSample,
};
pub use category::{Ambient, Factorization, RegularCategory};
pub use predicate::{ExponentProfile, Predicate};
