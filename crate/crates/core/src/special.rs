//! Log-space special functions used by the sector sums.
//!
//! Binomial coefficients are evaluated through Stirling's series with an
//! explicit remainder term, so that `ln C(n, k)` keeps full relative accuracy
//! for `n` in the millions (a plain difference of three log-gamma values loses
//! about `log10(n ln n)` digits).

use statrs::function::gamma::ln_gamma;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Remainder of Stirling's formula: `ln Γ(x+1) - (x ln x - x + ½ ln 2πx)`.
pub fn stirling_remainder(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x > 15.0 {
        let inv = 1.0 / x;
        let inv2 = inv * inv;
        // 1/12x - 1/360x^3 + 1/1260x^5 - 1/1680x^7 + 1/1188x^9
        inv * (1.0 / 12.0
            - inv2
                * (1.0 / 360.0
                    - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))))
    } else if x.fract() == 0.0 {
        let mut ln_fact = 0.0;
        let mut k = 2.0;
        while k <= x {
            ln_fact += f64::ln(k);
            k += 1.0;
        }
        ln_fact - (x * x.ln() - x + HALF_LN_2PI + 0.5 * x.ln())
    } else {
        ln_gamma(x + 1.0) - (x * x.ln() - x + HALF_LN_2PI + 0.5 * x.ln())
    }
}

/// `ln C(n, k)` for real `0 <= k <= n`; integer arguments give the usual
/// binomial coefficient.
pub fn ln_binomial(n: f64, k: f64) -> f64 {
    debug_assert!(k >= 0.0 && k <= n);
    let rest = n - k;
    if k == 0.0 || rest == 0.0 {
        return 0.0;
    }
    // k ln(n/k) + (n-k) ln(n/(n-k)), both terms nonnegative
    let main = k * (n / k).ln() - rest * (-k / n).ln_1p();
    let gauss = 0.5 * (n / (k * rest)).ln() - HALF_LN_2PI;
    main + gauss + stirling_remainder(n) - stirling_remainder(k) - stirling_remainder(rest)
}

/// `ln(2 sinh x)` for `x > 0` without overflow.
pub fn ln_two_sinh(x: f64) -> f64 {
    x + (-(-2.0 * x).exp_m1()).ln()
}

/// Mean excitation energy `ω / (e^{βω} - 1)` of an oscillator above its zero point.
pub fn bose_occupation_energy(omega: f64, beta: f64) -> f64 {
    omega / (beta * omega).exp_m1()
}

/// Compensated (Neumaier) summation in input order.
#[derive(Debug, Default, Clone, Copy)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// `ln Σ exp(xᵢ)`, returning `-inf` for an empty slice.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: NeumaierSum = values.iter().map(|v| (v - max).exp()).collect();
    max + sum.value().ln()
}

/// Central difference of `f` at `x` with one level of Richardson extrapolation.
pub fn richardson_derivative<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let central = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    let coarse = central(h);
    let fine = central(0.5 * h);
    (4.0 * fine - coarse) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ln_binomial_exact(n: u64, k: u64) -> f64 {
        let mut c: u128 = 1;
        for i in 0..k as u128 {
            c = c * (n as u128 - i) / (i + 1);
        }
        (c as f64).ln()
    }

    #[test]
    fn binomial_matches_integer_arithmetic() {
        for n in 1..=60u64 {
            for k in 0..=n {
                let got = ln_binomial(n as f64, k as f64);
                let want = ln_binomial_exact(n, k);
                assert!(
                    (got - want).abs() <= 1e-13 * want.max(1.0),
                    "C({n},{k}): {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn binomial_large_n_against_lgamma() {
        let n: f64 = 1.0e5;
        assert_eq!(ln_binomial(n, 1.0), n.ln());
        assert_relative_eq!(ln_binomial(n, 2.0), (n * (n - 1.0) / 2.0).ln(), max_relative = 1e-15);
        // log-gamma differences are only good to ~1e-9 absolute here
        for k in [17.0, 2.5e4, 5.0e4] {
            let lg = ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0);
            assert!((ln_binomial(n, k) - lg).abs() < 1e-8);
        }
    }

    #[test]
    fn stirling_remainder_is_continuous_at_switch() {
        let below = ln_gamma(15.0 + 1.0) - (15.0 * 15f64.ln() - 15.0 + HALF_LN_2PI + 0.5 * 15f64.ln());
        assert_relative_eq!(stirling_remainder(15.000_000_1), below, max_relative = 1e-7);
        assert_relative_eq!(stirling_remainder(15.0), below, max_relative = 1e-9);
    }

    #[test]
    fn ln_two_sinh_small_and_large() {
        assert_relative_eq!(ln_two_sinh(0.3), (2.0 * 0.3f64.sinh()).ln(), max_relative = 1e-14);
        assert_relative_eq!(ln_two_sinh(800.0), 800.0, max_relative = 1e-15);
    }

    #[test]
    fn log_sum_exp_handles_large_offsets() {
        let v = [1000.0, 1000.0];
        assert_relative_eq!(log_sum_exp(&v), 1000.0 + 2f64.ln(), max_relative = 1e-15);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
    }

    #[test]
    fn richardson_on_polynomial() {
        let d = richardson_derivative(|x| x.powi(3), 2.0, 1e-3);
        assert_relative_eq!(d, 12.0, max_relative = 1e-10);
    }
}
