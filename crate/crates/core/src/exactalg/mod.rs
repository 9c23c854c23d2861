//! Exact linear algebra over the rationals and prime fields.

mod field;
mod mat;
mod subspace;

pub use field::{Field, Scalar};
pub use mat::Mat;
pub use subspace::Subspace;
