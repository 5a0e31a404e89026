//! Canonical-ensemble thermodynamics of the collective model (`k_B = 1`,
//! `β = 1/T`).
//!
//! The oscillator sum over `n` is always done analytically, through the
//! `1/(2 sinh(βω/2))` factor for `Z` and the `ω/(e^{βω} − 1)` occupation for
//! `⟨H⟩`; what remains is a sum over sectors carried out in log space.

mod approx;
mod exact;
mod series;

pub use approx::{
    laplace_estimate, log_partition_laplace, log_partition_low_t, mean_energy_laplace,
    mean_energy_low_t, mean_energy_low_t_derivative, mean_energy_low_t_reference, LaplaceEstimate,
};
pub use exact::{
    log_partition_exact, mean_energy_block_exact, mean_energy_exact, sector_log_term,
    sector_weights, BLOCK_MAX_PARTICLES,
};
pub use series::{
    t1_log_partition_series, log_partition_appendix, mean_energy_t1_derivative, mean_energy_t1, t1_series,
    NBetaSeries,
};

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::spin::ModelParams;

/// Sector terms whose log-weight is below `max - LOG_WEIGHT_WINDOW` are skipped.
pub const LOG_WEIGHT_WINDOW: f64 = 45.0;

/// Base step for numerical β-derivatives (one Richardson level on top).
pub const DERIVATIVE_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Oscillator spectrum, exact sum over all sectors.
    ExactHpSum,
    /// True sector spectra from tridiagonal diagonalization.
    ExactBlock,
    /// Low-temperature closed form.
    LowT,
    /// Gaussian (saddle-point) approximation of the sector sum.
    Laplace,
    /// Closed form around `T ≈ 1` for the reference couplings.
    AppendixT1,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::ExactHpSum,
        Method::ExactBlock,
        Method::LowT,
        Method::Laplace,
        Method::AppendixT1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::ExactHpSum => "exact_hp_sum",
            Method::ExactBlock => "exact_block",
            Method::LowT => "low_t",
            Method::Laplace => "laplace",
            Method::AppendixT1 => "appendix_t1",
        }
    }

    /// A note when `temperature` lies outside the range the method is built for.
    pub fn regime_warning(self, params: &ModelParams, temperature: f64) -> Option<String> {
        match self {
            Method::ExactHpSum | Method::ExactBlock => None,
            Method::LowT if temperature > 0.5 => Some(format!(
                "low_t is a T ≈ 0 expansion; T = {temperature} is outside its regime"
            )),
            Method::Laplace if params.n_particles < 1000 => Some(format!(
                "laplace assumes many sectors; N = {} is small",
                params.n_particles
            )),
            Method::AppendixT1 if !(0.75..=1.25).contains(&temperature) => Some(format!(
                "appendix_t1 is a T ≈ 1 expansion; T = {temperature} is outside its regime"
            )),
            Method::AppendixT1 if !params.is_reference() => {
                Some("appendix_t1 is fixed to B = (-1, 0, √3), J = 6".into())
            }
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown method '{s}'")))
    }
}

/// `ln Z` and `⟨H⟩` at one inverse temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalPoint {
    pub beta: f64,
    pub log_z: f64,
    pub mean_energy: f64,
    pub energy_per_particle: f64,
    pub method: Method,
}

impl ThermalPoint {
    pub(crate) fn new(beta: f64, log_z: f64, mean_energy: f64, n_particles: u64, method: Method) -> Self {
        Self {
            beta,
            log_z,
            mean_energy,
            energy_per_particle: mean_energy / n_particles as f64,
            method,
        }
    }

    pub fn temperature(&self) -> f64 {
        1.0 / self.beta
    }
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("beta must be positive and finite, got {beta}")))
    }
}

/// `(4B_z² + J²N)/8J`, the exponent prefactor of `Z` per unit β.
pub(crate) fn prefactor(params: &ModelParams) -> Result<f64> {
    crate::oscillator::constant_term(params, params.n_particles, crate::oscillator::ConstantTerm::LargeN)
        .map(|c| -c)
}

/// Evaluate one method at one β.
pub fn thermal_point(params: &ModelParams, beta: f64, method: Method) -> Result<ThermalPoint> {
    match method {
        Method::ExactHpSum => mean_energy_exact(params, beta),
        Method::ExactBlock => mean_energy_block_exact(params, beta),
        Method::LowT => mean_energy_low_t(params, beta),
        Method::Laplace => mean_energy_laplace(params, beta),
        Method::AppendixT1 => {
            if !params.is_reference() {
                return Err(Error::InvalidInput(
                    "appendix_t1 is only defined for B = (-1, 0, √3), J = 6".into(),
                ));
            }
            mean_energy_t1(params.n_particles, beta)
        }
    }
}
