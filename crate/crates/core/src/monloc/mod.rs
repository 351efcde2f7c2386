//! Two-term complexes of monomorphisms, their homotopy category, and its
//! localization at bicartesian squares, compared against cokernels in the
//! ambient category.

mod morphism;
mod object;
mod roof;

pub use morphism::{is_bicartesian, quasi_iso_criterion, shadow_is_iso, Equality, MonMorphism};
pub use object::MonObject;
pub use roof::{
    hull_membership, localized_hom, roof_lift, roofs_equal, HullClass, LocalizedHom, RoofEquality, RoofMorphism,
};
