//! Finitely presented functors on a regular category: each object is the
//! cokernel of a representable map `Y(f)`.

mod limits;
mod object;
mod torsion;

pub use limits::{
    chase_transformation, famous_diagram_chase, freyd_cokernel, freyd_is_epi, freyd_is_exact, freyd_is_iso,
    freyd_is_mono, freyd_kernel, DiagramChase, FreydCokernel, FreydKernel,
};
pub use object::{freyd_factor, freyd_hom, FreydHom, FreydMorphism, FreydObject};
pub use torsion::{
    has_pd_leq_1, is_effaceable, is_weak_inflation, membership, torsion_decomposition, FreydClass, Search,
    TorsionDecomposition,
};
