//! Hypercube diagrams of complexes: total fibers and cofibers, the cube
//! shift, hypercolumn lattices and bivariant pairings over finite posets.

mod cube;
mod lattice;
mod pairing;
mod shift;

pub use cube::{popcount, random_cube, CubeDiagram, FilteredCube, Vertex};
pub use lattice::{LatticeDiagram, Point};
pub use pairing::{FinitePoset, PosetPairing};
pub use shift::{cube_shift, cube_shift_axis, cube_unshift, cube_unshift_axis};
