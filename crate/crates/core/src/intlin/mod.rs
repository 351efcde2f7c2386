//! Exact linear algebra over Euclidean domains: Smith normal form, lattice
//! membership, kernels, images and saturation.

mod matrix;
mod ring;
mod smith;

pub use matrix::Matrix;
pub use ring::{int, Ring};
pub use smith::{
    det, image_basis, kernel_basis, rank, saturate, snf, solve_in_image, solve_with,
    SmithDecomposition,
};

/// The integers, the default scalar ring.
pub type Z = num_bigint::BigInt;
/// The rationals, used for the vector-space backend.
pub type Q = num_rational::BigRational;
