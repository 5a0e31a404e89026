//! Exact treatment of the permutation-invariant Hamiltonian
//!
//! `H₀ = B_x S_x + B_z S_z + (J/2)(S_z² − N/4)`
//!
//! on N spin-1/2 particles. The Hilbert space splits into total-spin sectors
//! of dimension `2S+1`, each repeated `g(S)` times; inside a sector `H₀` is a
//! real symmetric tridiagonal matrix in the `|S, m⟩` basis.
//!
//! Spin quantum numbers are carried as the integer `2S` so half-integer spins
//! never go through a floating-point parity test.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::ln_binomial;
use crate::tridiag::SymTridiagonal;

/// Largest particle number accepted by the dense product-basis oracle.
pub const ORACLE_MAX_PARTICLES: u64 = 12;

/// Largest particle number for the exact integer degeneracy.
pub const EXACT_DEGENERACY_MAX_PARTICLES: u64 = 120;

/// Field and coupling of the model, without a particle number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Couplings {
    pub b_x: f64,
    pub b_z: f64,
    pub j: f64,
}

impl Couplings {
    /// `B = (-1, 0, √3)`, `J = 6`: the couplings of the normalized Bell operator
    /// at the optimal measurement angle.
    pub fn reference() -> Self {
        Self {
            b_x: -1.0,
            b_z: 3f64.sqrt(),
            j: 6.0,
        }
    }

    pub fn with_particles(self, n_particles: u64) -> Result<ModelParams> {
        ModelParams::new(self.b_x, self.b_z, self.j, n_particles)
    }
}

/// Parameters of `H₀` including the particle number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub b_x: f64,
    pub b_z: f64,
    pub j: f64,
    pub n_particles: u64,
}

impl ModelParams {
    /// Requires `b_x < 0`, `j >= 0` and `n_particles >= 2`.
    ///
    /// `j = 0` is accepted: the oscillator frequency stays positive, only the
    /// large-N constant `-(4B_z² + J²N)/8J` is undefined there.
    pub fn new(b_x: f64, b_z: f64, j: f64, n_particles: u64) -> Result<Self> {
        if !(b_x.is_finite() && b_z.is_finite() && j.is_finite()) {
            return Err(Error::InvalidInput("couplings must be finite".into()));
        }
        if b_x >= 0.0 {
            return Err(Error::InvalidInput(format!("b_x must be negative, got {b_x}")));
        }
        if j < 0.0 {
            return Err(Error::InvalidInput(format!("j must be nonnegative, got {j}")));
        }
        if n_particles < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least 2 particles, got {n_particles}"
            )));
        }
        Ok(Self {
            b_x,
            b_z,
            j,
            n_particles,
        })
    }

    pub fn reference(n_particles: u64) -> Result<Self> {
        Couplings::reference().with_particles(n_particles)
    }

    pub fn couplings(&self) -> Couplings {
        Couplings {
            b_x: self.b_x,
            b_z: self.b_z,
            j: self.j,
        }
    }

    pub fn n(&self) -> f64 {
        self.n_particles as f64
    }

    /// True for `B = (-1, 0, √3)`, `J = 6`.
    pub fn is_reference(&self) -> bool {
        let r = Couplings::reference();
        (self.b_x - r.b_x).abs() < 1e-12
            && (self.b_z - r.b_z).abs() < 1e-12
            && (self.j - r.j).abs() < 1e-12
    }
}

/// One total-spin block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinSector {
    pub n_particles: u64,
    pub total_spin_2s: u64,
    pub dimension: usize,
    pub log_degeneracy: f64,
}

impl SpinSector {
    pub fn new(n_particles: u64, total_spin_2s: u64) -> Result<Self> {
        let log_degeneracy = log_degeneracy(n_particles, total_spin_2s)?;
        Ok(Self {
            n_particles,
            total_spin_2s,
            dimension: total_spin_2s as usize + 1,
            log_degeneracy,
        })
    }

    pub fn spin(&self) -> f64 {
        self.total_spin_2s as f64 / 2.0
    }

    /// `p = N/2 - S`, the number of "flipped" spins below maximal length.
    pub fn deficit(&self) -> u64 {
        (self.n_particles - self.total_spin_2s) / 2
    }
}

/// Exact eigenvalues of one sector, ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorSpectrum {
    pub sector: SpinSector,
    pub eigenvalues: Vec<f64>,
}

fn check_sector(n_particles: u64, total_spin_2s: u64) -> Result<()> {
    if total_spin_2s > n_particles {
        return Err(Error::InvalidInput(format!(
            "2S = {total_spin_2s} exceeds N = {n_particles}"
        )));
    }
    if !(n_particles - total_spin_2s).is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "2S = {total_spin_2s} has the wrong parity for N = {n_particles}"
        )));
    }
    Ok(())
}

/// All sectors, from `2S = N` down to `N mod 2` in steps of two.
pub fn sector_list(n_particles: u64) -> Result<Vec<SpinSector>> {
    if n_particles < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 particles, got {n_particles}"
        )));
    }
    (0..=n_particles / 2)
        .map(|p| SpinSector::new(n_particles, n_particles - 2 * p))
        .collect()
}

/// `ln g(S)` with `g(S) = C(N, N/2−S) − C(N, N/2−S−1)`.
///
/// The difference is rewritten as `C(N, k)·(2S+1)/(N/2+S+1)` with
/// `k = N/2 − S`, which has no cancellation.
pub fn log_degeneracy(n_particles: u64, total_spin_2s: u64) -> Result<f64> {
    check_sector(n_particles, total_spin_2s)?;
    let n = n_particles as f64;
    let two_s = total_spin_2s as f64;
    let k = (n_particles - total_spin_2s) as f64 / 2.0;
    Ok(ln_binomial(n, k) + (2.0 * (two_s + 1.0) / (n + two_s + 2.0)).ln())
}

fn binomial_u128(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        c = c * (n as u128 - i) / (i + 1);
    }
    c
}

/// `g(S)` in exact integer arithmetic, for `N <= 120`.
pub fn degeneracy_exact(n_particles: u64, total_spin_2s: u64) -> Result<u128> {
    check_sector(n_particles, total_spin_2s)?;
    if n_particles > EXACT_DEGENERACY_MAX_PARTICLES {
        return Err(Error::SizeLimit {
            what: "exact degeneracy particle number",
            limit: EXACT_DEGENERACY_MAX_PARTICLES as usize,
            got: n_particles as usize,
        });
    }
    let k = (n_particles - total_spin_2s) / 2;
    let below = if k == 0 { 0 } else { binomial_u128(n_particles, k - 1) };
    Ok(binomial_u128(n_particles, k) - below)
}

/// `H₀` restricted to one sector in the `|S, m⟩` basis, `m = -S..=S`.
pub fn sector_hamiltonian(params: &ModelParams, sector: &SpinSector) -> Result<SymTridiagonal> {
    if sector.n_particles != params.n_particles {
        return Err(Error::InvalidInput(format!(
            "sector belongs to N = {}, model has N = {}",
            sector.n_particles, params.n_particles
        )));
    }
    check_sector(sector.n_particles, sector.total_spin_2s)?;
    let two_s = sector.total_spin_2s as i64;
    let n = params.n();
    let diag = (0..=two_s)
        .map(|i| {
            let m = (2 * i - two_s) as f64 / 2.0;
            params.b_z * m + 0.5 * params.j * (m * m - n / 4.0)
        })
        .collect();
    // ⟨m+1| S_x |m⟩ = ½ sqrt(S(S+1) − m(m+1)); in units of 2S and 2m the
    // radicand is ((2S)(2S+2) − (2m)(2m+2)) / 4.
    let off = (0..two_s)
        .map(|i| {
            let two_m = 2 * i - two_s;
            let radicand = (two_s * (two_s + 2) - two_m * (two_m + 2)) as f64 / 4.0;
            0.5 * params.b_x * radicand.sqrt()
        })
        .collect();
    Ok(SymTridiagonal::new(diag, off))
}

/// All eigenvalues of one sector via implicit QL.
pub fn sector_spectrum(params: &ModelParams, sector: &SpinSector) -> Result<SectorSpectrum> {
    let h = sector_hamiltonian(params, sector)?;
    let eigenvalues = h.eigenvalues().map_err(|e| Error::NoConvergence {
        total_spin_2s: sector.total_spin_2s,
        row: e.0,
    })?;
    Ok(SectorSpectrum {
        sector: *sector,
        eigenvalues,
    })
}

/// The `k` lowest eigenvalues of one sector via Sturm bisection.
pub fn sector_lowest(params: &ModelParams, sector: &SpinSector, k: usize) -> Result<Vec<f64>> {
    Ok(sector_hamiltonian(params, sector)?.lowest_eigenvalues(k))
}

/// Lowest eigenvalue of `H₀` over all sectors.
pub fn ground_energy(params: &ModelParams) -> Result<f64> {
    let mut best = f64::INFINITY;
    for sector in sector_list(params.n_particles)? {
        best = best.min(sector_hamiltonian(params, &sector)?.kth_eigenvalue(0));
    }
    Ok(best)
}

/// Lowest eigenvalue in the maximal-spin sector `S = N/2`.
pub fn top_sector_ground_energy(params: &ModelParams) -> Result<f64> {
    let top = SpinSector::new(params.n_particles, params.n_particles)?;
    Ok(sector_hamiltonian(params, &top)?.kth_eigenvalue(0))
}

/// `Σᵢ B·s⁽ⁱ⁾ + J Σ_{i<j} s_z⁽ⁱ⁾ s_z⁽ʲ⁾` in the 2^N product basis.
///
/// Bit `i` of the basis index is 0 for spin up (`s_z = +½`) on site `i`.
pub fn dense_hamiltonian(params: &ModelParams) -> Result<DMatrix<f64>> {
    let n = params.n_particles;
    if n > ORACLE_MAX_PARTICLES {
        return Err(Error::SizeLimit {
            what: "dense oracle particle number",
            limit: ORACLE_MAX_PARTICLES as usize,
            got: n as usize,
        });
    }
    let dim = 1usize << n;
    let mut h = DMatrix::zeros(dim, dim);
    for state in 0..dim {
        let sz = |site: u64| if state >> site & 1 == 0 { 0.5 } else { -0.5 };
        let mut diag = 0.0;
        for a in 0..n {
            diag += params.b_z * sz(a);
            for b in a + 1..n {
                diag += params.j * sz(a) * sz(b);
            }
            h[(state ^ (1 << a), state)] += 0.5 * params.b_x;
        }
        h[(state, state)] = diag;
    }
    Ok(h)
}

/// All 2^N eigenvalues of `H₀` by dense diagonalization, ascending.
pub fn full_spectrum_oracle(params: &ModelParams) -> Result<Vec<f64>> {
    let h = dense_hamiltonian(params)?;
    let mut ev: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Sector spectra with each eigenvalue repeated `g(S)` times, ascending.
pub fn spectrum_with_multiplicities(params: &ModelParams) -> Result<Vec<f64>> {
    let mut all = Vec::new();
    for sector in sector_list(params.n_particles)? {
        let g = degeneracy_exact(params.n_particles, sector.total_spin_2s)? as usize;
        let spec = sector_spectrum(params, &sector)?;
        for e in spec.eigenvalues {
            all.extend(std::iter::repeat_n(e, g));
        }
    }
    all.sort_by(f64::total_cmp);
    Ok(all)
}
