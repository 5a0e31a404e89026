//! Two-setting permutation-invariant Bell inequality and its thermal witness.
//!
//! With measurements `M₀ = cos φ σ_z + sin φ σ_x`, `M₁ = cos θ σ_z + sin θ σ_x`
//! and `φ = π − θ`, the reference inequality
//!
//! `I = −2 S₀ + ½ S₀₀ − S₀₁ + ½ S₁₁ ≥ −2N`
//!
//! turns, after halving and writing `s = σ/2`, into the collective
//! Hamiltonian with `(B_x, B_z, J) = (−2 sin θ, 2 cos θ, 8 cos² θ)` and bound
//! `−N`. Thermal energies below `−N` therefore certify Bell correlations.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oscillator::hp_energy;
use crate::spin::{top_sector_ground_energy, Couplings, ModelParams};
use crate::thermo::{thermal_point, Method};

/// Reduced Planck constant in J·s (exact SI).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant in J/K (exact SI).
pub const K_B: f64 = 1.380_649e-23;

/// Classical bound per particle of the normalized Bell operator.
pub const NORMALIZED_CLASSICAL_BOUND: f64 = -1.0;

/// Default temperature bracket for the critical-temperature search.
pub const DEFAULT_BRACKET: (f64, f64) = (0.1, 2.0);
pub const CRITICAL_TEMPERATURE_TOL: f64 = 1e-6;

/// `Σ_k α_k S_k + Σ_{k≤l} α_kl S_kl ≥ β_C` with symmetric correlators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellInequality {
    pub alpha_0: f64,
    pub alpha_1: f64,
    pub alpha_00: f64,
    pub alpha_01: f64,
    pub alpha_11: f64,
    /// Raw classical bound divided by N (the reference inequality has `−2`).
    pub classical_bound_per_n: f64,
}

impl BellInequality {
    pub fn reference() -> Self {
        Self {
            alpha_0: -2.0,
            alpha_1: 0.0,
            alpha_00: 0.5,
            alpha_01: -1.0,
            alpha_11: 0.5,
            classical_bound_per_n: -2.0,
        }
    }

    pub fn is_reference(&self) -> bool {
        *self == Self::reference()
    }

    /// Factor that maps the raw bound `β_C` onto `−N`.
    pub fn normalization(&self) -> f64 {
        NORMALIZED_CLASSICAL_BOUND / self.classical_bound_per_n
    }

    /// `I` for one local deterministic strategy: `outcomes[i] = (m₀, m₁)` of party i.
    pub fn evaluate(&self, outcomes: &[(i8, i8)]) -> f64 {
        let (mut s0, mut s1, mut same01) = (0.0, 0.0, 0.0);
        for &(a, b) in outcomes {
            s0 += a as f64;
            s1 += b as f64;
            same01 += (a * b) as f64;
        }
        let n = outcomes.len() as f64;
        // Σ_{i≠j} a_i b_j = (Σa)(Σb) − Σ a_i b_i, and a_i² = 1
        let s00 = s0 * s0 - n;
        let s11 = s1 * s1 - n;
        let s01 = s0 * s1 - same01;
        self.alpha_0 * s0
            + self.alpha_1 * s1
            + self.alpha_00 * s00
            + self.alpha_01 * s01
            + self.alpha_11 * s11
    }

    /// Couplings and normalized bound per particle at measurement angle θ.
    ///
    /// Only the reference coefficient pattern is reduced to a Hamiltonian.
    pub fn operator_from_angle(&self, theta: f64) -> Result<(Couplings, f64)> {
        if !self.is_reference() {
            return Err(Error::InvalidInput(
                "only the reference inequality (−2, 0, ½, −1, ½) maps onto the collective model".into(),
            ));
        }
        if !(theta > 0.0 && theta <= FRAC_PI_2) {
            return Err(Error::InvalidInput(format!("theta must lie in (0, π/2], got {theta}")));
        }
        let mut cos = theta.cos();
        // cos(π/2) rounds to 6e-17; the two-body term must vanish there exactly
        if cos.abs() < 1e-15 {
            cos = 0.0;
        }
        let couplings = Couplings {
            b_x: -2.0 * theta.sin(),
            b_z: 2.0 * cos,
            j: 8.0 * cos * cos,
        };
        Ok((couplings, NORMALIZED_CLASSICAL_BOUND))
    }
}

/// Measurement angles; `φ = π − θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSettings {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementSettings {
    pub fn new(theta: f64) -> Self {
        Self {
            theta,
            phi: std::f64::consts::PI - theta,
        }
    }

    /// `[[cos a, sin a], [sin a, −cos a]]` in the σ_z basis for setting `k`.
    pub fn observable(&self, k: usize) -> [[f64; 2]; 2] {
        let a = if k == 0 { self.phi } else { self.theta };
        let (s, c) = a.sin_cos();
        [[c, s], [s, -c]]
    }
}

/// Reference-inequality couplings at angle θ.
pub fn operator_from_angle(theta: f64) -> Result<(Couplings, f64)> {
    BellInequality::reference().operator_from_angle(theta)
}

/// Brute-force Bell operator `Σ α_k S_k + Σ α_kl S_kl` in the 2^N product
/// basis, assembled site by site from the measurement observables.
#[allow(clippy::needless_range_loop)]
pub fn bell_operator_dense(
    ineq: &BellInequality,
    settings: &MeasurementSettings,
    n_particles: usize,
) -> Result<DMatrix<f64>> {
    if n_particles > crate::spin::ORACLE_MAX_PARTICLES as usize {
        return Err(Error::SizeLimit {
            what: "dense Bell operator particle number",
            limit: crate::spin::ORACLE_MAX_PARTICLES as usize,
            got: n_particles,
        });
    }
    let dim = 1usize << n_particles;
    let m = [settings.observable(0), settings.observable(1)];
    let alpha_k = [ineq.alpha_0, ineq.alpha_1];
    // α_kl with k ≤ l; S_10 never appears on its own
    let pairs = [(0, 0, ineq.alpha_00), (0, 1, ineq.alpha_01), (1, 1, ineq.alpha_11)];
    let bit = |state: usize, site: usize| (state >> site) & 1;
    let mut op = DMatrix::zeros(dim, dim);

    for col in 0..dim {
        for i in 0..n_particles {
            for out_i in 0..2 {
                let row = col & !(1 << i) | (out_i << i);
                for (k, &a) in alpha_k.iter().enumerate() {
                    op[(row, col)] += a * m[k][out_i][bit(col, i)];
                }
            }
            for j in 0..n_particles {
                if i == j {
                    continue;
                }
                for out_i in 0..2 {
                    for out_j in 0..2 {
                        let row = col & !(1 << i) & !(1 << j) | (out_i << i) | (out_j << j);
                        for &(k, l, a) in &pairs {
                            op[(row, col)] +=
                                a * m[k][out_i][bit(col, i)] * m[l][out_j][bit(col, j)];
                        }
                    }
                }
            }
        }
    }
    Ok(op)
}

/// Minimum of `I` over all `4^N` local deterministic strategies.
pub fn classical_minimum(ineq: &BellInequality, n_particles: usize) -> Result<f64> {
    if n_particles > 10 {
        return Err(Error::SizeLimit {
            what: "strategy enumeration particle number",
            limit: 10,
            got: n_particles,
        });
    }
    let sign = |b: usize| if b == 0 { 1 } else { -1 };
    let mut best = f64::INFINITY;
    let mut outcomes = vec![(0i8, 0i8); n_particles];
    for code in 0..1usize << (2 * n_particles) {
        for (i, o) in outcomes.iter_mut().enumerate() {
            *o = (sign(code >> (2 * i) & 1), sign(code >> (2 * i + 1) & 1));
        }
        best = best.min(ineq.evaluate(&outcomes));
    }
    Ok(best)
}

pub fn optimal_angle() -> f64 {
    FRAC_PI_6
}

/// Scan `θ` on `grid` and return the angle minimizing the ground energy per
/// particle of the maximal-spin sector, together with that margin.
pub fn scan_optimal_angle(n_particles: u64, grid: &[f64]) -> Result<(f64, f64)> {
    let mut best = (f64::NAN, f64::INFINITY);
    for &theta in grid {
        let (couplings, bound) = operator_from_angle(theta)?;
        let params = couplings.with_particles(n_particles)?;
        let margin = top_sector_ground_energy(&params)? / n_particles as f64 - bound;
        if margin < best.1 {
            best = (theta, margin);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub temperature: f64,
    /// `⟨B⟩_T / N`.
    pub mean_bell_per_n: f64,
    /// `⟨B⟩_T / N + 1`; negative certifies Bell correlations.
    pub margin: f64,
    pub violated: bool,
    pub method: Method,
    pub warning: Option<String>,
}

/// Evaluate the witness at one temperature with the selected thermal method.
///
/// `params` must come from [`operator_from_angle`] so that the normalized bound applies.
pub fn witness_margin(params: &ModelParams, temperature: f64, method: Method) -> Result<WitnessReport> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "temperature must be positive, got {temperature}"
        )));
    }
    let point = thermal_point(params, 1.0 / temperature, method)?;
    let margin = point.energy_per_particle - NORMALIZED_CLASSICAL_BOUND;
    Ok(WitnessReport {
        temperature,
        mean_bell_per_n: point.energy_per_particle,
        margin,
        violated: margin < 0.0,
        method,
        warning: method.regime_warning(params, temperature),
    })
}

fn exact_margin(params: &ModelParams, temperature: f64) -> Result<f64> {
    witness_margin(params, temperature, Method::ExactHpSum).map(|r| r.margin)
}

/// Temperature where the exact witness margin crosses zero, on the default bracket.
pub fn critical_temperature_numeric(params: &ModelParams) -> Result<f64> {
    critical_temperature_in(params, DEFAULT_BRACKET.0, DEFAULT_BRACKET.1, CRITICAL_TEMPERATURE_TOL)
}

/// Bisection on the exact margin over `[t_lo, t_hi]` to absolute tolerance `tol`.
pub fn critical_temperature_in(params: &ModelParams, t_lo: f64, t_hi: f64, tol: f64) -> Result<f64> {
    if !(t_lo > 0.0 && t_hi > t_lo && tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "need 0 < t_lo < t_hi and tol > 0, got [{t_lo}, {t_hi}], tol {tol}"
        )));
    }
    let margin_lo = exact_margin(params, t_lo)?;
    let margin_hi = exact_margin(params, t_hi)?;
    if !(margin_lo < 0.0 && margin_hi > 0.0) {
        return Err(Error::NoViolation {
            t_lo,
            t_hi,
            margin_lo,
            margin_hi,
        });
    }
    let (mut lo, mut hi) = (t_lo, t_hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if exact_margin(params, mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `1/ln 4`: where the low-temperature form reaches the bound at N → ∞.
pub fn critical_temperature_guess() -> f64 {
    1.0 / 4f64.ln()
}

/// `B_x / ln((8 + 4B_x − J)/(8B_x))` for general couplings.
pub fn critical_temperature_guess_for(couplings: &Couplings) -> Result<f64> {
    let arg = (8.0 + 4.0 * couplings.b_x - couplings.j) / (8.0 * couplings.b_x);
    let t = couplings.b_x / arg.ln();
    if arg > 0.0 && t.is_finite() && t > 0.0 {
        Ok(t)
    } else {
        Err(Error::Domain(format!(
            "low-temperature estimate undefined: log argument {arg}"
        )))
    }
}

/// `1/ln 3`: where the `T ≈ 1` form reaches the bound at N → ∞.
pub fn critical_temperature_closed() -> f64 {
    1.0 / 3f64.ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxViolation {
    /// `E(N/2, 0)` for the reference couplings.
    pub energy: f64,
    pub per_particle: f64,
    /// `lim E(N/2, 0)/N = −5/4`.
    pub limit_per_particle: f64,
}

pub fn max_quantum_violation(n_particles: u64) -> Result<MaxViolation> {
    let params = ModelParams::reference(n_particles)?;
    let energy = hp_energy(&params, n_particles, 0)?;
    Ok(MaxViolation {
        energy,
        per_particle: energy / n_particles as f64,
        limit_per_particle: -1.25,
    })
}

/// Convert a dimensionless temperature to kelvin given the angular-frequency
/// scale `energy_unit_hz` (in s⁻¹) that makes the couplings dimensionless.
pub fn to_physical_temperature(t_dimensionless: f64, energy_unit_hz: f64) -> Result<f64> {
    if !(energy_unit_hz > 0.0 && energy_unit_hz.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "energy unit must be positive, got {energy_unit_hz}"
        )));
    }
    Ok(HBAR * energy_unit_hz / K_B * t_dimensionless)
}
