//! Bounded cochain complexes and the usual constructions on them.
//!
//! Grading is cohomological throughout. A complex is `q`-connective in the
//! homotopical sense exactly when `H^n = 0` for `n > −q`, so the homotopical
//! cover `τ_{≥q}` is the cohomological truncation `τ^{≤ −q}`.

mod chain;
mod complex;
mod ops;

pub(crate) use chain::span;

pub use chain::ChainMap;
pub use complex::{Cohomology, Complex, Subcomplex, SubquotientComplex};
pub use ops::{
    double_dual_iso, dual, dual_map, hom_complex, hom_vector_to_map, map_to_hom_vector, shift, shift_map, smart_truncate,
    stupid_truncate_above, tensor,
};
