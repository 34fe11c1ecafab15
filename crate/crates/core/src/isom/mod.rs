//! Orthogonal groups of definite lattices and torsion forms, and the
//! multiplicity of a frame.

pub mod backtrack;
pub mod budget;
pub mod lattice_aut;
pub mod multiplicity;
pub mod schreier;
pub mod torsion;

pub use budget::Budget;
pub use lattice_aut::{lattice_aut_group, LatticeIsometry};
pub use multiplicity::{
    bilinear_orthogonal_order_f2, discriminant_image, is_surjective_on_discriminant, multiplicity,
    MultiplicityReport,
};
pub use torsion::{forms_isometric, torsion_orthogonal_group, TorsionFormAutomorphism};
