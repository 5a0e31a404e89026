//! Small-N oracle checks, runnable outside the test harness.

use serde::Serialize;

use crate::bell::{
    bell_operator_dense, classical_minimum, operator_from_angle, BellInequality, MeasurementSettings,
};
use crate::error::Result;
use crate::special::log_sum_exp;
use crate::spin::{
    degeneracy_exact, dense_hamiltonian, full_spectrum_oracle, sector_list, sector_spectrum,
    spectrum_with_multiplicities, ModelParams,
};
use crate::thermo::mean_energy_block_exact;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Fixed parameter sets with `b_x < 0`, `j > 0` for the oracle comparisons.
pub const ORACLE_PARAMETER_SETS: [(f64, f64, f64); 3] =
    [(-1.0, 1.732_050_807_568_877_2, 6.0), (-0.37, -0.81, 2.4), (-2.2, 0.15, 0.6)];

pub fn degeneracy_sum_rule(max_n: u64) -> Result<CheckOutcome> {
    let mut worst = 0u64;
    for n in 2..=max_n {
        let mut total = 0u128;
        for s in sector_list(n)? {
            total += degeneracy_exact(n, s.total_spin_2s)? * (s.total_spin_2s as u128 + 1);
        }
        if total != 1u128 << n {
            worst = n;
            break;
        }
    }
    Ok(CheckOutcome::new(
        format!("degeneracy sum rule, N <= {max_n}"),
        worst == 0,
        if worst == 0 { "Σ g(S)(2S+1) = 2^N".to_string() } else { format!("fails at N = {worst}") },
    ))
}

pub fn log_space_sum_rule(n: u64, tol: f64) -> Result<CheckOutcome> {
    let terms: Vec<f64> = sector_list(n)?
        .iter()
        .map(|s| s.log_degeneracy + (s.total_spin_2s as f64 + 1.0).ln())
        .collect();
    let err = (log_sum_exp(&terms) - n as f64 * 2f64.ln()).abs();
    Ok(CheckOutcome::new(
        format!("log-space sum rule, N = {n}"),
        err < tol,
        format!("|ln Σ − N ln 2| = {err:.3e}"),
    ))
}

/// Largest absolute deviation between sector spectra with multiplicities
/// and the dense 2^N spectrum.
pub fn oracle_deviation(params: &ModelParams) -> Result<f64> {
    let dense = full_spectrum_oracle(params)?;
    let sectors = spectrum_with_multiplicities(params)?;
    if dense.len() != sectors.len() {
        return Ok(f64::INFINITY);
    }
    Ok(dense
        .iter()
        .zip(&sectors)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

pub fn oracle_equivalence(max_n: u64, sets: &[(f64, f64, f64)], tol: f64) -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for n in 2..=max_n {
        for &(b_x, b_z, j) in sets {
            worst = worst.max(oracle_deviation(&ModelParams::new(b_x, b_z, j, n)?)?);
        }
    }
    Ok(CheckOutcome::new(
        format!("sector spectra vs dense oracle, N <= {max_n}"),
        worst < tol,
        format!("max |Δ| = {worst:.3e}"),
    ))
}

/// Largest entrywise deviation between the collective Hamiltonian at the mapped
/// couplings and the normalized brute-force Bell operator.
pub fn operator_mapping_deviation(n: usize, theta: f64) -> Result<f64> {
    let ineq = BellInequality::reference();
    let (couplings, _) = operator_from_angle(theta)?;
    let h = dense_hamiltonian(&couplings.with_particles(n as u64)?)?;
    let b = bell_operator_dense(&ineq, &MeasurementSettings::new(theta), n)? * ineq.normalization();
    Ok((h - b).abs().max())
}

pub fn operator_mapping(ns: &[usize], thetas: &[f64], tol: f64) -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for &n in ns {
        for &theta in thetas {
            worst = worst.max(operator_mapping_deviation(n, theta)?);
        }
    }
    Ok(CheckOutcome::new(
        "Bell operator vs collective Hamiltonian",
        worst < tol,
        format!("max entry |Δ| = {worst:.3e}"),
    ))
}

pub fn classical_bound(max_n: usize) -> Result<CheckOutcome> {
    let ineq = BellInequality::reference();
    let mut bad = Vec::new();
    for n in 1..=max_n {
        let min = classical_minimum(&ineq, n)? * ineq.normalization();
        if (min + n as f64).abs() > 1e-12 {
            bad.push(format!("N={n}: {min}"));
        }
    }
    Ok(CheckOutcome::new(
        format!("classical bound by strategy enumeration, N <= {max_n}"),
        bad.is_empty(),
        if bad.is_empty() { "min = −N".to_string() } else { bad.join(", ") },
    ))
}

pub fn block_thermal_vs_dense(n: u64, betas: &[f64]) -> Result<CheckOutcome> {
    let params = ModelParams::reference(n)?;
    let dense = full_spectrum_oracle(&params)?;
    let mut worst = 0.0f64;
    for &beta in betas {
        let logs: Vec<f64> = dense.iter().map(|e| -beta * e).collect();
        let lz = log_sum_exp(&logs);
        let mean: f64 = dense.iter().map(|e| e * (-beta * e - lz).exp()).sum();
        let block = mean_energy_block_exact(&params, beta)?;
        worst = worst.max((block.mean_energy - mean).abs() / mean.abs().max(1.0));
    }
    Ok(CheckOutcome::new(
        format!("block thermal average vs dense, N = {n}"),
        worst < 1e-10,
        format!("max rel |Δ⟨H⟩| = {worst:.3e}"),
    ))
}

pub fn shift_covariance(n: u64, shift: f64) -> Result<CheckOutcome> {
    let params = ModelParams::reference(n)?;
    let mut worst = 0.0f64;
    for sector in sector_list(n)? {
        let base = sector_spectrum(&params, &sector)?.eigenvalues;
        let h = crate::spin::sector_hamiltonian(&params, &sector)?.shifted(shift);
        let moved = h.eigenvalues().unwrap_or_default();
        for (a, b) in base.iter().zip(&moved) {
            worst = worst.max((b - a - shift).abs() / (1.0 + a.abs() + shift.abs()));
        }
    }
    Ok(CheckOutcome::new(
        "diagonal shift covariance",
        worst < 1e-10,
        format!("max rel deviation = {worst:.3e}"),
    ))
}

/// Every small-N oracle check.
pub fn run_all() -> Result<Vec<CheckOutcome>> {
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, FRAC_PI_8};
    Ok(vec![
        degeneracy_sum_rule(30)?,
        log_space_sum_rule(1000, 1e-10)?,
        oracle_equivalence(10, &ORACLE_PARAMETER_SETS, 1e-8)?,
        operator_mapping(&[2, 4, 6, 8], &[FRAC_PI_8, FRAC_PI_6, FRAC_PI_4], 1e-12)?,
        classical_bound(8)?,
        block_thermal_vs_dense(8, &[0.1, 1.0, 5.0])?,
        shift_covariance(10, 3.7)?,
    ])
}
