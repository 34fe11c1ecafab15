//! Even lattices, discriminant forms and orthogonal groups for the
//! classification of Jacobian elliptic fibrations on K3 surfaces with
//! 2-elementary Néron–Severi lattice.

pub mod discform;
pub mod error;
pub mod isom;
pub mod lattice;
pub mod linalg;
pub mod parse;
pub mod roots;
pub mod tables;

pub use discform::{discriminant_form, invariant_triple, FiniteQuadraticForm, TwoElementaryTriple};
pub use error::{Error, Result};
pub use lattice::{GramLattice, RootFamily, Signature};
pub use parse::{parse_expr, parse_lattice_expr, LatticeExpr};
