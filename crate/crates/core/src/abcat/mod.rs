//! Finitely presented modules over a Euclidean domain and the abelian
//! structure on them.

mod hom;
mod limits;
mod morphism;
mod object;

pub use hom::{lift_along, HomFamily, HomGroup};
pub use limits::{
    biproduct, cokernel, column_map, direct_sum, factor_through_epi, factor_through_mono, image, in_image,
    inverse, is_epi, is_exact_at, is_iso, is_mono, is_short_exact, kernel, pullback, pushout, reduce, row_map,
    Biproduct, Cokernel, Image, Kernel, Pullback, Pushout, Reduced,
};
pub use morphism::PresentedMorphism;
pub use object::{Invariants, PresentedObject};

/// `Hom(x, y)`.
pub fn hom_group<R: crate::intlin::Ring>(x: &PresentedObject<R>, y: &PresentedObject<R>) -> HomGroup<R> {
    HomGroup::new(x, y)
}
