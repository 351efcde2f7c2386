//! Bounded complexes over a regular category, their cones, truncations and
//! cohomology in the left heart.

mod complex;
mod homotopy;
mod ops;

pub use complex::{BoundedComplex, ChainMap};
pub use homotopy::{homotopy_classes, HomotopyClasses};
pub use ops::*;
