use super::{check_beta, prefactor, Method, ThermalPoint, DERIVATIVE_STEP};
use crate::error::{Error, Result};
use crate::oscillator::oscillator_frequency;
use crate::special::{ln_binomial, ln_two_sinh, richardson_derivative};
use crate::spin::ModelParams;

/// `ln Z` in the low-temperature regime.
///
/// Sectors near `S = N/2` dominate, so `ω(S) ≈ ω(N/2)` leaves the sum and the
/// degeneracy is replaced by its leading term `N^p/p!`, which sums to
/// `exp(N e^{βB_x})`.
pub fn log_partition_low_t(params: &ModelParams, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let n = params.n();
    let omega = oscillator_frequency(params, params.n_particles)?;
    Ok(beta * prefactor(params)? - ln_two_sinh(0.5 * beta * omega)
        - 0.5 * beta * params.b_x * (n + 1.0)
        + n * (beta * params.b_x).exp())
}

/// `−∂_β` of [`log_partition_low_t`], evaluated analytically.
pub fn mean_energy_low_t_derivative(params: &ModelParams, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let n = params.n();
    let omega = oscillator_frequency(params, params.n_particles)?;
    let half = 0.5 * beta * omega;
    Ok(-prefactor(params)? + 0.5 * omega / half.tanh() + 0.5 * params.b_x * (n + 1.0)
        - n * params.b_x * (beta * params.b_x).exp())
}

/// `⟨H⟩ ≈ ((4B_x − J)/8 − B_x e^{B_xβ}) N + sqrt(−B_x J N)/(2√2)`.
///
/// This is the large-N form of [`mean_energy_low_t_derivative`]; the two
/// differ by O(1) terms.
pub fn mean_energy_low_t(params: &ModelParams, beta: f64) -> Result<ThermalPoint> {
    let log_z = log_partition_low_t(params, beta)?;
    let n = params.n();
    let (bx, j) = (params.b_x, params.j);
    let mean = ((4.0 * bx - j) / 8.0 - bx * (bx * beta).exp()) * n
        + (-bx * j * n).sqrt() / (2.0 * std::f64::consts::SQRT_2);
    Ok(ThermalPoint::new(beta, log_z, mean, params.n_particles, Method::LowT))
}

/// The low-temperature form specialized to `B = (−1, 0, √3)`, `J = 6`:
/// `¼((4e^{−β} − 5)N + 2 sqrt(3N))`.
pub fn mean_energy_low_t_reference(n_particles: u64, beta: f64) -> f64 {
    let n = n_particles as f64;
    0.25 * ((4.0 * (-beta).exp() - 5.0) * n + 2.0 * (3.0 * n).sqrt())
}

/// Result of the saddle-point treatment of the sector sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceEstimate {
    pub log_z: f64,
    /// Maximizing spin `S*` of the continuous relaxation.
    pub s_star: f64,
    /// Second derivative of the log term at `S*` (negative).
    pub curvature: f64,
}

/// Sector log term with `S` continuous.
fn continuous_log_term(params: &ModelParams, s: f64, beta: f64) -> f64 {
    let n = params.n();
    let k = (0.5 * n - s).max(0.0);
    let log_g = ln_binomial(n, k) + ((2.0 * s + 1.0) / (0.5 * n + s + 1.0)).ln();
    let omega = (params.b_x * (params.b_x - params.j * s)).sqrt();
    log_g - beta * params.b_x * (s + 0.5) - ln_two_sinh(0.5 * beta * omega)
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximization on `[lo, hi]` down to an interval of `tol`.
fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Replace the sector sum by a Gaussian integral around its maximum.
///
/// The maximum `S*` of the continuous log term is bracketed on `[1, N/2]` and
/// located to `1e-6·N`; the term is expanded to second order there and
/// integrated, giving `ln Z ≈ βC + t(S*) + ½ ln(2π/|t''(S*)|)`.
pub fn laplace_estimate(params: &ModelParams, beta: f64) -> Result<LaplaceEstimate> {
    check_beta(beta)?;
    let n = params.n();
    let (lo, hi) = (1.0, 0.5 * n);
    let term = |s: f64| continuous_log_term(params, s, beta);
    let tol = 1e-6 * n;
    let s_star = golden_max(term, lo, hi, tol);

    let step = (0.1 * n.sqrt()).max(1.0);
    if s_star - step < 0.0 || s_star + step > hi || hi - s_star < 10.0 * tol || s_star - lo < 10.0 * tol {
        return Err(Error::ApproximationInvalid(format!(
            "maximum of the sector sum at S* = {s_star:.3} sits on the bracket [{lo}, {hi}]"
        )));
    }
    let peak = term(s_star);
    let curvature = (term(s_star + step) - 2.0 * peak + term(s_star - step)) / (step * step);
    if curvature >= 0.0 || !curvature.is_finite() {
        return Err(Error::ApproximationInvalid(format!(
            "sector sum is not concave at S* = {s_star:.3} (t'' = {curvature:e})"
        )));
    }
    let log_z = beta * prefactor(params)? + peak + 0.5 * (2.0 * std::f64::consts::PI / -curvature).ln();
    Ok(LaplaceEstimate {
        log_z,
        s_star,
        curvature,
    })
}

pub fn log_partition_laplace(params: &ModelParams, beta: f64) -> Result<f64> {
    laplace_estimate(params, beta).map(|e| e.log_z)
}

/// `⟨H⟩` from a numerical β-derivative of [`log_partition_laplace`].
pub fn mean_energy_laplace(params: &ModelParams, beta: f64) -> Result<ThermalPoint> {
    let log_z = log_partition_laplace(params, beta)?;
    // surface the first failure instead of differentiating through NaNs
    for b in [beta - DERIVATIVE_STEP, beta + DERIVATIVE_STEP] {
        log_partition_laplace(params, b)?;
    }
    let mean = -richardson_derivative(
        |b| log_partition_laplace(params, b).unwrap_or(f64::NAN),
        beta,
        DERIVATIVE_STEP,
    );
    Ok(ThermalPoint::new(beta, log_z, mean, params.n_particles, Method::Laplace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo::{log_partition_exact, mean_energy_exact};
    use approx::assert_relative_eq;

    fn reference(n: u64) -> ModelParams {
        ModelParams::reference(n).unwrap()
    }

    #[test]
    fn condensation_term() {
        let p = reference(4);
        let beta = 1.0;
        let omega = oscillator_frequency(&p, 4).unwrap();
        let rest = beta * prefactor(&p).unwrap() - ln_two_sinh(0.5 * beta * omega) + 0.5 * beta * 5.0;
        let lz = log_partition_low_t(&p, beta).unwrap();
        assert_relative_eq!(lz - rest, 4.0 / std::f64::consts::E, max_relative = 1e-12);
    }

    #[test]
    fn low_t_close_to_exact_when_cold() {
        let p = reference(100_000);
        let beta = 10.0;
        let approx = log_partition_low_t(&p, beta).unwrap();
        let exact = log_partition_exact(&p, beta).unwrap();
        assert!(((approx - exact) / exact).abs() < 1e-4);
    }

    #[test]
    fn low_t_energy_matches_exact_at_point_two() {
        let p = reference(100_000);
        let beta = 5.0;
        let approx = mean_energy_low_t(&p, beta).unwrap().energy_per_particle;
        let exact = mean_energy_exact(&p, beta).unwrap().energy_per_particle;
        assert!((approx - exact).abs() < 1e-3, "{approx} vs {exact}");
    }

    #[test]
    fn low_t_general_and_specialized_forms_agree() {
        let p = reference(100_000);
        for beta in [0.5, 1.0, 2.0] {
            let general = mean_energy_low_t(&p, beta).unwrap().mean_energy;
            assert_relative_eq!(general, mean_energy_low_t_reference(100_000, beta), max_relative = 1e-13);
        }
    }

    #[test]
    fn low_t_derivative_is_consistent() {
        let p = reference(100_000);
        for beta in [2.0, 5.0, 10.0] {
            let analytic = mean_energy_low_t_derivative(&p, beta).unwrap();
            let numeric = -richardson_derivative(|b| log_partition_low_t(&p, b).unwrap(), beta, DERIVATIVE_STEP);
            assert_relative_eq!(analytic, numeric, max_relative = 1e-6);
            // the large-N form only drops O(1) pieces
            let large_n = mean_energy_low_t(&p, beta).unwrap().mean_energy;
            assert!((analytic - large_n).abs() < 2.0, "β={beta}: {analytic} vs {large_n}");
        }
    }

    #[test]
    fn low_t_ground_limit() {
        let n = 100_000u64;
        let e = mean_energy_low_t(&reference(n), 200.0).unwrap().energy_per_particle;
        let want = -1.25 + (3.0 / n as f64).sqrt() / 2.0;
        assert_relative_eq!(e, want, max_relative = 1e-14);
    }

    #[test]
    fn naive_critical_temperature_from_low_t() {
        // leading order per particle: −5/4 + e^{−β} = −1 at β = ln 4
        let n = 1u64 << 60;
        let e = mean_energy_low_t(&reference(n), 4f64.ln()).unwrap().energy_per_particle;
        assert!((e + 1.0).abs() < 1e-8);
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let x = golden_max(|x| -(x - 3.3) * (x - 3.3), 0.0, 10.0, 1e-9);
        assert!((x - 3.3).abs() < 1e-8);
    }

    #[test]
    fn saddle_point_location_and_accuracy() {
        let p = reference(100_000);
        let est = laplace_estimate(&p, 1.0).unwrap();
        let ratio = est.s_star / 100_000.0;
        assert!((0.23..=0.27).contains(&ratio), "S*/N = {ratio}");
        let exact = log_partition_exact(&p, 1.0).unwrap();
        assert!(((est.log_z - exact) / exact).abs() < 5e-3);
    }

    #[test]
    fn saddle_point_error_shrinks_with_n() {
        let mut prev = f64::INFINITY;
        for n in [10_000u64, 100_000, 1_000_000] {
            let p = reference(n);
            let err = (log_partition_laplace(&p, 1.0).unwrap() - log_partition_exact(&p, 1.0).unwrap()).abs()
                / n as f64;
            assert!(err < prev, "N = {n}: {err}");
            prev = err;
        }
    }

    #[test]
    fn saddle_point_rejects_boundary_maximum() {
        // at very low T the sum is dominated by S = N/2
        let p = reference(10_000);
        assert!(matches!(laplace_estimate(&p, 30.0), Err(Error::ApproximationInvalid(_))));
        assert!(mean_energy_laplace(&p, 30.0).is_err());
    }

    #[test]
    fn laplace_mean_energy_tracks_exact() {
        let p = reference(100_000);
        let a = mean_energy_laplace(&p, 1.0).unwrap().energy_per_particle;
        let b = mean_energy_exact(&p, 1.0).unwrap().energy_per_particle;
        assert!((a - b).abs() < 1e-3, "{a} vs {b}");
    }
}
