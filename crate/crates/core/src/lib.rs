//! Weight filtrations on logarithmic de Rham and Hodge cohomology, computed
//! exactly at desk scale.
//!
//! The same filtration is produced two ways: by décalage of the pole-order
//! filtration on an explicit Čech model of a marked projective line, and as
//! the total cofiber of a hypercube of Whitehead-truncated pure pieces built
//! from tabulated Hodge data of the strata. Everything is exact arithmetic
//! over `Q` or `F_p`.

pub mod error;
pub mod complexes;
pub mod cubes;
pub mod exactalg;
pub mod filtered;
pub mod loggeom;
pub mod cli;
pub mod random;

pub use error::{Error, Result};
