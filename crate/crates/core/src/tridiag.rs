//! Real symmetric tridiagonal matrices and their eigenvalues.
//!
//! Two independent routes are provided: the implicit-shift QL iteration
//! (all eigenvalues, O(n²)) and Sturm-sequence bisection (any subset of the
//! lowest eigenvalues, O(n) per count). They are cross-checked in tests.

/// Symmetric tridiagonal matrix stored as its diagonal and first off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

/// Row at which the QL iteration gave up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NotConverged(pub usize);

const MAX_QL_SWEEPS: usize = 60;

impl SymTridiagonal {
    /// `off.len()` must be `diag.len() - 1` (or zero for an empty matrix).
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(
            off.len(),
            diag.len().saturating_sub(1),
            "off-diagonal length must be one less than the diagonal"
        );
        Self { diag, off }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off_diag(&self) -> &[f64] {
        &self.off
    }

    /// Entry `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.abs_diff(j) {
            0 => self.diag[i],
            1 => self.off[i.min(j)],
            _ => 0.0,
        }
    }

    pub fn shifted(&self, c: f64) -> Self {
        Self {
            diag: self.diag.iter().map(|d| d + c).collect(),
            off: self.off.clone(),
        }
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }

    /// All eigenvalues in ascending order via implicit-shift QL.
    pub fn eigenvalues(&self) -> Result<Vec<f64>, NotConverged> {
        let n = self.dim();
        let mut d = self.diag.clone();
        let mut e = self.off.clone();
        e.push(0.0);
        if n == 0 {
            return Ok(Vec::new());
        }

        for l in 0..n {
            let mut sweeps = 0;
            loop {
                let mut m = l;
                while m + 1 < n {
                    let dd = d[m].abs() + d[m + 1].abs();
                    if e[m].abs() <= f64::EPSILON * dd {
                        break;
                    }
                    m += 1;
                }
                if m == l {
                    break;
                }
                sweeps += 1;
                if sweeps > MAX_QL_SWEEPS {
                    return Err(NotConverged(l));
                }

                // Wilkinson-type shift from the leading 2x2 block
                let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                let mut r = g.hypot(1.0);
                g = d[m] - d[l] + e[l] / (g + r.copysign(g));
                let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
                let mut deflated = false;
                let mut i = m;
                while i > l {
                    i -= 1;
                    let f = s * e[i];
                    let b = c * e[i];
                    r = f.hypot(g);
                    e[i + 1] = r;
                    if r == 0.0 {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        deflated = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if deflated {
                    continue;
                }
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        }

        d.sort_by(f64::total_cmp);
        Ok(d)
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    pub fn count_below(&self, x: f64) -> usize {
        let n = self.dim();
        let tiny = f64::EPSILON * self.norm_bound() * 1e-3;
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..n {
            let b2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            q = self.diag[i] - x - if i == 0 { 0.0 } else { b2 / q };
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection.
    pub fn kth_eigenvalue(&self, k: usize) -> f64 {
        assert!(k < self.dim(), "eigenvalue index out of range");
        let (mut lo, mut hi) = self.gershgorin();
        let tol = 4.0 * f64::EPSILON * self.norm_bound();
        // count_below(lo) <= k < count_below(hi) is the loop invariant
        hi += tol;
        lo -= tol;
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// The `k` smallest eigenvalues in ascending order by bisection.
    pub fn lowest_eigenvalues(&self, k: usize) -> Vec<f64> {
        (0..k.min(self.dim())).map(|i| self.kth_eigenvalue(i)).collect()
    }
}
