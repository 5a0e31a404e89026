//! Closed forms around `T ≈ 1` for `B = (−1, 0, √3)`, `J = 6`.
//!
//! Both `ln Z_{T≈1}` and the closed-form `⟨H⟩_{T≈1}` are polynomials in β whose
//! coefficients are Laurent polynomials in `√N`. [`NBetaSeries`] stores them
//! coefficient by coefficient so that `−∂_β ln Z` can be compared with the
//! closed-form mean energy order by order in N, without floating-point
//! differentiation.

use std::collections::BTreeMap;

use super::{check_beta, Method, ThermalPoint};
use crate::error::Result;

/// `Σ c_{h,q} N^{h/2} β^q`, keyed by `(h, q)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NBetaSeries {
    coeffs: BTreeMap<(i32, u32), f64>,
}

impl NBetaSeries {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add `c · N^{half_power/2} · β^{beta_power}`.
    pub fn add(&mut self, half_power: i32, beta_power: u32, c: f64) -> &mut Self {
        *self.coeffs.entry((half_power, beta_power)).or_insert(0.0) += c;
        self
    }

    pub fn coefficient(&self, half_power: i32, beta_power: u32) -> f64 {
        self.coeffs.get(&(half_power, beta_power)).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, u32, f64)> + '_ {
        self.coeffs.iter().map(|(&(h, q), &c)| (h, q, c))
    }

    pub fn eval(&self, n: f64, beta: f64) -> f64 {
        let root = n.sqrt();
        self.terms()
            .map(|(h, q, c)| c * root.powi(h) * beta.powi(q as i32))
            .sum()
    }

    pub fn d_beta(&self) -> Self {
        let mut out = Self::new();
        for (h, q, c) in self.terms() {
            if q > 0 {
                out.add(h, q - 1, c * q as f64);
            }
        }
        out
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = Self::new();
        for (h, q, c) in self.terms() {
            out.add(h, q, c * factor);
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (h, q, c) in other.terms() {
            out.add(h, q, -c);
        }
        out
    }

    /// The part of order `N^{half_power/2}`, as a polynomial in β.
    pub fn order(&self, half_power: i32) -> Vec<(u32, f64)> {
        self.terms()
            .filter(|t| t.0 == half_power)
            .map(|(_, q, c)| (q, c))
            .collect()
    }
}

/// `ln Z_{T≈1}` as an [`NBetaSeries`].
pub fn t1_log_partition_series() -> NBetaSeries {
    let ln2 = 2f64.ln();
    let ln3 = 3f64.ln();
    let r = 1.5f64.sqrt();
    let mut s = NBetaSeries::new();
    // 2^{2N+3}
    s.add(2, 0, 2.0 * ln2).add(0, 0, 3.0 * ln2);
    // 3^{β(9/32 √(3/2) √N − 3N/16) − 3N/4 − 5/6}
    s.add(1, 1, 9.0 / 32.0 * r * ln3)
        .add(2, 1, -3.0 / 16.0 * ln3)
        .add(2, 0, -0.75 * ln3)
        .add(0, 0, -5.0 / 6.0 * ln3);
    // (3N/32 − 9/32 √(3/2) √N + 81/256) β²
    s.add(2, 2, 3.0 / 32.0).add(1, 2, -9.0 / 32.0 * r).add(0, 2, 81.0 / 256.0);
    // (N − 9/16 √(3/2) √N + √(3/2)/(4√N) − 1/6) β
    s.add(2, 1, 1.0)
        .add(1, 1, -9.0 / 16.0 * r)
        .add(-1, 1, r / 4.0)
        .add(0, 1, -1.0 / 6.0);
    // − 109/(324N) + 3/32 N ln²3 − 5/18
    s.add(-2, 0, -109.0 / 324.0).add(2, 0, 3.0 / 32.0 * ln3 * ln3).add(0, 0, -5.0 / 18.0);
    s
}

/// `⟨H⟩_{T≈1} = (9√6 √N (2β + 2 − ln 3) − 4N(3β + 16 − 3 ln 3)) / 64` as a series.
pub fn t1_series() -> NBetaSeries {
    let ln3 = 3f64.ln();
    let a = 9.0 * 6f64.sqrt() / 64.0;
    let mut s = NBetaSeries::new();
    s.add(1, 1, 2.0 * a)
        .add(1, 0, a * (2.0 - ln3))
        .add(2, 1, -12.0 / 64.0)
        .add(2, 0, -4.0 * (16.0 - 3.0 * ln3) / 64.0);
    s
}

/// `ln Z_{T≈1}`, evaluated term by term.
pub fn log_partition_appendix(n_particles: u64, beta: f64) -> f64 {
    let n = n_particles as f64;
    let rn = n.sqrt();
    let r = 1.5f64.sqrt();
    let ln3 = 3f64.ln();
    (2.0 * n + 3.0) * 2f64.ln()
        + (beta * (9.0 / 32.0 * r * rn - 3.0 * n / 16.0) - 3.0 * n / 4.0 - 5.0 / 6.0) * ln3
        + (3.0 * n / 32.0 - 9.0 / 32.0 * r * rn + 81.0 / 256.0) * beta * beta
        + (n - 9.0 / 16.0 * r * rn + r / (4.0 * rn) - 1.0 / 6.0) * beta
        - 109.0 / (324.0 * n)
        + 3.0 / 32.0 * n * ln3 * ln3
        - 5.0 / 18.0
}

/// `−∂_β ln Z_{T≈1}`, including the O(1) and O(N^{−1/2}) pieces that the
/// closed-form mean energy drops.
pub fn mean_energy_t1_derivative(n_particles: u64, beta: f64) -> f64 {
    t1_log_partition_series().d_beta().scaled(-1.0).eval(n_particles as f64, beta)
}

/// The closed-form `⟨H⟩_{T≈1}`; `log_z` is the closed-form `ln Z_{T≈1}`.
pub fn mean_energy_t1(n_particles: u64, beta: f64) -> Result<ThermalPoint> {
    check_beta(beta)?;
    let n = n_particles as f64;
    let ln3 = 3f64.ln();
    let mean = (9.0 * 6f64.sqrt() * n.sqrt() * (2.0 * beta + 2.0 - ln3)
        - 4.0 * n * (3.0 * beta + 16.0 - 3.0 * ln3))
        / 64.0;
    Ok(ThermalPoint::new(
        beta,
        log_partition_appendix(n_particles, beta),
        mean,
        n_particles,
        Method::AppendixT1,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::richardson_derivative;
    use crate::spin::ModelParams;
    use crate::thermo::{log_partition_laplace, mean_energy_exact, DERIVATIVE_STEP};
    use approx::assert_relative_eq;

    #[test]
    fn series_matches_direct_evaluation() {
        let s = t1_log_partition_series();
        for n in [100u64, 100_000, 10_000_000] {
            for beta in [0.5, 1.0, 1.3] {
                assert_relative_eq!(
                    s.eval(n as f64, beta),
                    log_partition_appendix(n, beta),
                    max_relative = 1e-13
                );
            }
        }
        let t1 = t1_series();
        for beta in [0.8, 1.1] {
            assert_relative_eq!(
                t1.eval(1e5, beta),
                mean_energy_t1(100_000, beta).unwrap().mean_energy,
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn leading_orders_of_the_derivative() {
        let residual = t1_log_partition_series().d_beta().scaled(-1.0).minus(&t1_series());
        for (_, c) in residual.order(2).into_iter().chain(residual.order(1)) {
            assert!(c.abs() < 1e-14, "{c}");
        }
        // what remains is O(1) and below
        assert_relative_eq!(residual.coefficient(0, 1), -81.0 / 128.0, max_relative = 1e-14);
        assert_relative_eq!(residual.coefficient(0, 0), 1.0 / 6.0, max_relative = 1e-14);
        assert_relative_eq!(residual.coefficient(-1, 0), -1.5f64.sqrt() / 4.0, max_relative = 1e-14);
    }

    #[test]
    fn analytic_derivative_matches_finite_difference() {
        for beta in [0.8, 1.0, 1.2] {
            let numeric = -richardson_derivative(|b| log_partition_appendix(100_000, b), beta, DERIVATIVE_STEP);
            assert_relative_eq!(mean_energy_t1_derivative(100_000, beta), numeric, max_relative = 1e-6);
        }
    }

    #[test]
    fn closed_form_temperature() {
        // N-coefficient −(3β + 16 − 3 ln 3)/16 is exactly −1 at β = ln 3
        let lead = t1_series().order(2);
        let at_ln3: f64 = lead.iter().map(|&(q, c)| c * 3f64.ln().powi(q as i32)).sum();
        assert!((at_ln3 + 1.0).abs() < 1e-15);
        // the √N correction is positive there, so finite N weakens the violation
        let sub = t1_series().order(1);
        let corr: f64 = sub.iter().map(|&(q, c)| c * 3f64.ln().powi(q as i32)).sum();
        assert!(corr > 0.0);
        let e = mean_energy_t1(100_000, 3f64.ln()).unwrap().energy_per_particle;
        assert!(e > -1.0 && e < -1.0 + 5.0 / (1e5f64).sqrt());
    }

    #[test]
    fn t1_log_partition_is_smooth() {
        let mut prev = log_partition_appendix(10_000, 0.5);
        for i in 1..=100 {
            let beta = 0.5 + i as f64 * 0.01;
            let v = log_partition_appendix(10_000, beta);
            assert!(v.is_finite());
            assert!((v - prev).abs() < 0.02 * 10_000.0);
            prev = v;
        }
    }

    #[test]
    fn t1_log_partition_agrees_with_saddle_point() {
        let p = ModelParams::reference(100_000).unwrap();
        let diff = (log_partition_appendix(100_000, 1.0) - log_partition_laplace(&p, 1.0).unwrap()).abs();
        assert!(diff / 1e5 < 1e-2);
    }

    #[test]
    fn closed_form_near_exact_around_tc() {
        let p = ModelParams::reference(100_000).unwrap();
        for t in [0.85, 0.9, 0.95, 1.0, 1.05, 1.1] {
            let a = mean_energy_t1(100_000, 1.0 / t).unwrap().energy_per_particle;
            let b = mean_energy_exact(&p, 1.0 / t).unwrap().energy_per_particle;
            assert!((a - b).abs() < 2e-2);
        }
    }
}
