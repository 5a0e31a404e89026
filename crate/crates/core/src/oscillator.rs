//! Closed-form bosonic approximation of the low-energy spectrum.
//!
//! After the Holstein-Primakoff mapping around maximal `S_x` and a
//! squeeze-and-displace (Bogoliubov) transformation, each sector becomes a
//! harmonic oscillator:
//!
//! `E(S, n) = ω(S)(n + ½) + B_x(S + ½) + C`, with `ω(S) = sqrt(B_x(B_x − JS))`.
//!
//! The constant `C` is either the large-N limit `−(4B_z² + J²N)/8J` or the
//! finite-N form `−JN/8 + B_z²S / 2(B_x − JS)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::ModelParams;

/// Which constant term to use in `E(S, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ConstantTerm {
    /// `−(4B_z² + J²N)/8J`; requires `J > 0`.
    #[default]
    LargeN,
    /// `−JN/8 + B_z²S/(2(B_x − JS))`, before taking N → ∞.
    FiniteN,
}

/// Squeezing `ξ` and displacement `w` of the diagonalizing transformation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BogoliubovParams {
    pub xi: f64,
    pub w: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HpLevel {
    pub total_spin_2s: u64,
    pub n: u64,
    pub omega: f64,
    pub energy: f64,
}

fn spin(total_spin_2s: u64) -> f64 {
    total_spin_2s as f64 / 2.0
}

/// `B_x(B_x − JS)`, checked positive.
fn omega_squared(params: &ModelParams, total_spin_2s: u64) -> Result<f64> {
    let s = spin(total_spin_2s);
    let w2 = params.b_x * (params.b_x - params.j * s);
    if w2 > 0.0 && w2.is_finite() {
        Ok(w2)
    } else {
        Err(Error::Domain(format!(
            "B_x(B_x - JS) = {w2} is not positive at 2S = {total_spin_2s}"
        )))
    }
}

/// `ω(S) = sqrt(B_x(B_x − JS))`.
pub fn oscillator_frequency(params: &ModelParams, total_spin_2s: u64) -> Result<f64> {
    omega_squared(params, total_spin_2s).map(f64::sqrt)
}

pub fn bogoliubov_params(params: &ModelParams, total_spin_2s: u64) -> Result<BogoliubovParams> {
    omega_squared(params, total_spin_2s)?;
    let s = spin(total_spin_2s);
    let denom = params.b_x - params.j * s;
    Ok(BogoliubovParams {
        xi: 0.25 * (params.b_x / denom).ln(),
        w: params.b_z * s.sqrt() / (denom * std::f64::consts::SQRT_2),
    })
}

/// Constant part of `E(S, n)` for the chosen variant.
pub fn constant_term(params: &ModelParams, total_spin_2s: u64, variant: ConstantTerm) -> Result<f64> {
    let n = params.n();
    match variant {
        ConstantTerm::LargeN => {
            if params.j <= 0.0 {
                return Err(Error::Domain(
                    "the large-N constant -(4B_z² + J²N)/8J needs J > 0".into(),
                ));
            }
            Ok(-(4.0 * params.b_z * params.b_z + params.j * params.j * n) / (8.0 * params.j))
        }
        ConstantTerm::FiniteN => {
            let s = spin(total_spin_2s);
            Ok(-params.j * n / 8.0 + params.b_z * params.b_z * s / (2.0 * (params.b_x - params.j * s)))
        }
    }
}

/// `E(S, n)` with the large-N constant.
pub fn hp_energy(params: &ModelParams, total_spin_2s: u64, n: u64) -> Result<f64> {
    hp_energy_with(params, total_spin_2s, n, ConstantTerm::LargeN)
}

/// `E(S, n)` assembled as oscillator term + linear-in-S term + constant.
pub fn hp_energy_with(
    params: &ModelParams,
    total_spin_2s: u64,
    n: u64,
    variant: ConstantTerm,
) -> Result<f64> {
    let omega = oscillator_frequency(params, total_spin_2s)?;
    let constant = constant_term(params, total_spin_2s, variant)?;
    let oscillator = omega * (n as f64 + 0.5);
    let linear = params.b_x * (spin(total_spin_2s) + 0.5);
    Ok(oscillator + linear + constant)
}

pub fn hp_level(params: &ModelParams, total_spin_2s: u64, n: u64) -> Result<HpLevel> {
    Ok(HpLevel {
        total_spin_2s,
        n,
        omega: oscillator_frequency(params, total_spin_2s)?,
        energy: hp_energy(params, total_spin_2s, n)?,
    })
}

/// The two characteristic level spacings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spacings {
    /// `E(N/2, n+1) − E(N/2, n) = ω(N/2)`.
    pub delta_n: f64,
    /// `E(N/2, 0) − E(N/2 − 1, 0)`, signed; tends to `B_x` for large N.
    pub delta_s: f64,
}

pub fn spacing_report(params: &ModelParams) -> Result<Spacings> {
    let top = params.n_particles;
    Ok(Spacings {
        delta_n: oscillator_frequency(params, top)?,
        delta_s: hp_energy(params, top, 0)? - hp_energy(params, top - 2, 0)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reference(n: u64) -> ModelParams {
        ModelParams::reference(n).unwrap()
    }

    #[test]
    fn frequency_at_reference_parameters() {
        let w = oscillator_frequency(&reference(5000), 5000).unwrap();
        assert_relative_eq!(w, 15001f64.sqrt(), max_relative = 1e-15);
        assert!((w - 122.479).abs() < 1e-3);
    }

    #[test]
    fn frequency_without_coupling_is_field() {
        let p = ModelParams::new(-1.0, 0.3, 0.0, 50).unwrap();
        for two_s in [0, 10, 50] {
            assert_eq!(oscillator_frequency(&p, two_s).unwrap(), 1.0);
        }
    }

    #[test]
    fn frequency_domain_error() {
        let p = ModelParams {
            b_x: 0.0,
            b_z: 0.0,
            j: 1.0,
            n_particles: 4,
        };
        assert!(matches!(oscillator_frequency(&p, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn frequency_large_spin_scaling() {
        let p = reference(2_000_000);
        let s: f64 = 1.0e6;
        let ratio = oscillator_frequency(&p, 2_000_000).unwrap() / s.sqrt();
        assert!((ratio - 6f64.sqrt()).abs() < 1e-5);
    }

    #[test]
    fn bogoliubov_at_reference_parameters() {
        let b = bogoliubov_params(&reference(5000), 5000).unwrap();
        assert!((b.xi - (-2.40397)).abs() < 1e-5, "{}", b.xi);
        assert_relative_eq!(b.xi, 0.25 * (1.0f64 / 15001.0).ln(), max_relative = 1e-14);
        assert!((b.w - (-0.004082)).abs() < 1e-6, "{}", b.w);
        // e^{4ξ} = B_x / (B_x − JS)
        assert_relative_eq!((4.0 * b.xi).exp(), 1.0 / 15001.0, max_relative = 1e-13);
    }

    #[test]
    fn bogoliubov_limits() {
        let no_field = ModelParams::new(-1.0, 0.0, 6.0, 100).unwrap();
        assert_eq!(bogoliubov_params(&no_field, 100).unwrap().w, 0.0);
        let no_coupling = ModelParams::new(-1.0, 1.0, 0.0, 100).unwrap();
        assert_eq!(bogoliubov_params(&no_coupling, 100).unwrap().xi, 0.0);
    }

    #[test]
    fn ground_level_finite_n() {
        // E(N/2,0)/N = −5/4 + sqrt(1+3N)/(2N) − 3/(4N) exactly
        let n = 5000.0;
        let e = hp_energy(&reference(5000), 5000, 0).unwrap() / n;
        let closed = -1.25 + (1.0 + 3.0 * n).sqrt() / (2.0 * n) - 3.0 / (4.0 * n);
        assert_relative_eq!(e, closed, max_relative = 1e-14);
        assert!((e - (-1.23775)).abs() < 2e-4);
    }

    #[test]
    fn ladder_is_equally_spaced() {
        let p = reference(800);
        for two_s in [800, 600, 2] {
            let w = oscillator_frequency(&p, two_s).unwrap();
            for n in 0..10 {
                let gap = hp_energy(&p, two_s, n + 1).unwrap() - hp_energy(&p, two_s, n).unwrap();
                assert!((gap - w).abs() <= 1e-12 * w.max(1.0) * 800.0);
            }
        }
        let gap = hp_energy(&p, 800, 5).unwrap() - hp_energy(&p, 800, 4).unwrap();
        assert_relative_eq!(gap, oscillator_frequency(&p, 800).unwrap(), max_relative = 1e-10);
    }

    #[test]
    fn zero_coupling_large_n_constant_is_domain_error() {
        let p = ModelParams::new(-2.0, 0.0, 0.0, 10).unwrap();
        assert!(matches!(hp_energy(&p, 10, 0), Err(Error::Domain(_))));
        assert!(hp_energy_with(&p, 10, 0, ConstantTerm::FiniteN).is_ok());
    }

    #[test]
    fn finite_n_constant_approaches_limit() {
        let p = reference(1_000_000);
        let a = constant_term(&p, 1_000_000, ConstantTerm::LargeN).unwrap();
        let b = constant_term(&p, 1_000_000, ConstantTerm::FiniteN).unwrap();
        assert!((a - b).abs() < 1e-5);
    }

    #[test]
    fn ground_energy_decreases_with_spin() {
        let p = reference(4000);
        let mut prev = f64::INFINITY;
        for two_s in (2..=4000).step_by(2) {
            let e = hp_energy(&p, two_s, 0).unwrap();
            assert!(e < prev, "2S = {two_s}");
            prev = e;
        }
    }

    #[test]
    fn spacings_at_large_n() {
        let s = spacing_report(&reference(1_000_000)).unwrap();
        assert!((s.delta_n - 1732.05).abs() < 0.01);
        assert!((s.delta_s + 1.0).abs() < 0.01);
    }

    #[test]
    fn spacings_scale() {
        let small = spacing_report(&reference(250_000)).unwrap();
        let big = spacing_report(&reference(1_000_000)).unwrap();
        assert!((big.delta_n / small.delta_n - 2.0).abs() < 1e-5);
        let mut prev = f64::INFINITY;
        for n in [1_000u64, 2_000, 4_000, 8_000, 16_000] {
            let a = spacing_report(&reference(n)).unwrap().delta_s;
            let b = spacing_report(&reference(2 * n)).unwrap().delta_s;
            let change = (a - b).abs();
            assert!(change < prev);
            prev = change;
        }
    }
}
