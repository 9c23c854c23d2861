//! Geometry layer: marked projective lines with an explicit Čech model,
//! tabulated snc scenarios, the weight-side hypercube formula, dual
//! complexes, Poincaré pairings and the projective cone example.

mod arrangement;
mod cech;
mod dual_complex;
mod duality;
mod line;
mod scenario;
mod weights;

pub use arrangement::{P1Arrangement, ProjPoint};
pub use cech::CechModel;
pub use dual_complex::{dual_complex, reduced_cohomology, Face, SimplicialComplex, DUAL_COMPLEX_SHIFT};
pub use duality::{poincare_pairing_check, wedge_trace_pairing, PairingVerdict};
pub use line::{
    check_sequences, p1_compactly_supported, p1_log_hodge_complexes, residue_sequences, CompactlySupported,
    LocalizationMaps, LogHodgeComplexes, ResidueMaps, SequenceVerdict,
};
pub use scenario::{HodgeTable, Mode, SncdScenario, SCHEMA_VERSION};
pub use weights::{
    compact_weight_complex, compact_weight_side, cone_closed_form, cone_weights, grw0_compactly_supported,
    log_weight_complex, pole_order_side, pole_order_side_scenario, weight_side, Track, TrackReport, WeightReport,
};
