//! Fixtures shared by the criterion benches.

use bellcorr_core::ModelParams;

/// Particle numbers used for the thermal-sum benches.
pub const THERMAL_SIZES: [u64; 3] = [10_000, 100_000, 1_000_000];

pub fn reference(n: u64) -> ModelParams {
    ModelParams::reference(n).expect("reference couplings are valid")
}
