//! Short vectors, root sublattices, Mordell–Weil groups and overlattices.

pub mod decomp;
pub mod frame;
pub mod overlattice;
pub mod shortvec;

pub use decomp::{mordell_weil, root_sublattice, MordellWeilGroup, RootDecomposition, RootType};
pub use frame::{fiber_to_root, frame_lattice, frame_verify, frame_verify_lattice, FrameVerdict};
pub use overlattice::{overlattice_from_glue, parse_glue, parse_glue_list, GlueVector, Overlattice};
pub use shortvec::{short_vectors, vectors_up_to};
