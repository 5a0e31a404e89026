use super::{check_beta, prefactor, Method, ThermalPoint, LOG_WEIGHT_WINDOW};
use crate::error::{Error, Result};
use crate::oscillator::{hp_energy, oscillator_frequency};
use crate::special::{bose_occupation_energy, ln_two_sinh, NeumaierSum};
use crate::spin::{log_degeneracy, sector_hamiltonian, sector_list, ModelParams};

/// Largest N for the block-diagonalization route.
pub const BLOCK_MAX_PARTICLES: u64 = 5000;

/// `ln g(S) − βB_x(S + ½) − ln(2 sinh(βω(S)/2))`: the log of one sector's
/// contribution to `Z`, without the common prefactor.
pub fn sector_log_term(params: &ModelParams, total_spin_2s: u64, beta: f64) -> Result<f64> {
    let omega = oscillator_frequency(params, total_spin_2s)?;
    let s = total_spin_2s as f64 / 2.0;
    Ok(log_degeneracy(params.n_particles, total_spin_2s)? - beta * params.b_x * (s + 0.5)
        - ln_two_sinh(0.5 * beta * omega))
}

/// `(2S, log term)` for every sector inside the truncation window, and the maximum.
fn windowed_terms(params: &ModelParams, beta: f64) -> Result<(Vec<(u64, f64)>, f64)> {
    let n = params.n_particles;
    let all = (0..=n / 2)
        .map(|p| {
            let two_s = n - 2 * p;
            sector_log_term(params, two_s, beta).map(|t| (two_s, t))
        })
        .collect::<Result<Vec<_>>>()?;
    let max = all.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
    let kept = all
        .into_iter()
        .filter(|t| t.1 >= max - LOG_WEIGHT_WINDOW)
        .collect();
    Ok((kept, max))
}

fn free_spin_field(params: &ModelParams) -> f64 {
    params.b_x.hypot(params.b_z)
}

/// `ln Z` from the oscillator spectrum, summed exactly over sectors.
///
/// Without coupling (`J = 0`) the model is N free spins and is evaluated in
/// closed form.
pub fn log_partition_exact(params: &ModelParams, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if params.j == 0.0 {
        let half = 0.5 * beta * free_spin_field(params);
        // ln(2 cosh x) = x + ln(1 + e^{-2x})
        return Ok(params.n() * (half + (-2.0 * half).exp().ln_1p()));
    }
    let (terms, max) = windowed_terms(params, beta)?;
    let sum: NeumaierSum = terms.iter().map(|t| (t.1 - max).exp()).collect();
    Ok(beta * prefactor(params)? + max + sum.value().ln())
}

/// Normalized Boltzmann weights `(2S, w(S))` of the sectors inside the window.
pub fn sector_weights(params: &ModelParams, beta: f64) -> Result<Vec<(u64, f64)>> {
    check_beta(beta)?;
    let (terms, max) = windowed_terms(params, beta)?;
    let norm: NeumaierSum = terms.iter().map(|t| (t.1 - max).exp()).collect();
    let norm = norm.value();
    Ok(terms
        .into_iter()
        .map(|(two_s, t)| (two_s, (t - max).exp() / norm))
        .collect())
}

/// `⟨H⟩ = Σ_S w(S)[E(S,0) + ω(S)/(e^{βω(S)} − 1)]` over the oscillator spectrum.
pub fn mean_energy_exact(params: &ModelParams, beta: f64) -> Result<ThermalPoint> {
    check_beta(beta)?;
    let log_z = log_partition_exact(params, beta)?;
    if params.j == 0.0 {
        let b = free_spin_field(params);
        let mean = -params.n() * 0.5 * b * (0.5 * beta * b).tanh();
        return Ok(ThermalPoint::new(beta, log_z, mean, params.n_particles, Method::ExactHpSum));
    }
    let (terms, max) = windowed_terms(params, beta)?;
    let mut norm = NeumaierSum::default();
    let mut energy = NeumaierSum::default();
    for (two_s, t) in terms {
        let w = (t - max).exp();
        let omega = oscillator_frequency(params, two_s)?;
        let level = hp_energy(params, two_s, 0)? + bose_occupation_energy(omega, beta);
        norm.add(w);
        energy.add(w * level);
    }
    let mean = energy.value() / norm.value();
    Ok(ThermalPoint::new(beta, log_z, mean, params.n_particles, Method::ExactHpSum))
}

/// Thermal average over the true sector spectra, `Σ g(S) e^{−βE}`.
///
/// Only eigenvalues whose log-weight lies within the truncation window of the
/// global maximum are computed; they are located by Sturm counting and
/// bisection, so the cost is dominated by one lowest-eigenvalue search per
/// sector.
pub fn mean_energy_block_exact(params: &ModelParams, beta: f64) -> Result<ThermalPoint> {
    check_beta(beta)?;
    if params.n_particles > BLOCK_MAX_PARTICLES {
        return Err(Error::SizeLimit {
            what: "block-diagonalization particle number",
            limit: BLOCK_MAX_PARTICLES as usize,
            got: params.n_particles as usize,
        });
    }
    let sectors = sector_list(params.n_particles)?;
    let grounds = sectors
        .iter()
        .map(|s| Ok(sector_hamiltonian(params, s)?.kth_eigenvalue(0)))
        .collect::<Result<Vec<f64>>>()?;
    let max = sectors
        .iter()
        .zip(&grounds)
        .map(|(s, e0)| s.log_degeneracy - beta * e0)
        .fold(f64::NEG_INFINITY, f64::max);
    let floor = max - LOG_WEIGHT_WINDOW;

    let mut norm = NeumaierSum::default();
    let mut energy = NeumaierSum::default();
    for (sector, &e0) in sectors.iter().zip(&grounds) {
        if sector.log_degeneracy - beta * e0 < floor {
            continue;
        }
        let h = sector_hamiltonian(params, sector)?;
        let cutoff = (sector.log_degeneracy - floor) / beta;
        let count = h.count_below(cutoff).max(1);
        let levels = if count * 8 > h.dim() {
            h.eigenvalues().map_err(|e| Error::NoConvergence {
                total_spin_2s: sector.total_spin_2s,
                row: e.0,
            })?
        } else {
            h.lowest_eigenvalues(count)
        };
        for e in levels.into_iter().take(count) {
            let w = (sector.log_degeneracy - beta * e - max).exp();
            norm.add(w);
            energy.add(w * e);
        }
    }
    let log_z = max + norm.value().ln();
    let mean = energy.value() / norm.value();
    Ok(ThermalPoint::new(beta, log_z, mean, params.n_particles, Method::ExactBlock))
}
