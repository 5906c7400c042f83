//! Exact rational linear algebra, integer lattices and rational polyhedra.

pub mod dd;
pub mod lattice;
pub mod linalg;
pub mod num;
pub mod polyhedron;

pub use lattice::{lattice_index, saturate, snf, Lattice, LatticeIndex, Snf};
pub use num::{primitive, Int, IntVec, Rat, RatVec};
pub use polyhedron::{common_refinement, convert_rep, is_covered, HRep, Halfspace, Polyhedron, Representation, VRep};
