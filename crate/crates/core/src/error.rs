use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The closed-form oscillator approximation is undefined for these parameters.
    #[error("outside the approximation domain: {0}")]
    Domain(String),

    #[error("{what} limited to {limit}, got {got}")]
    SizeLimit {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    #[error("eigensolver did not converge in sector 2S={total_spin_2s} (row {row})")]
    NoConvergence { total_spin_2s: u64, row: usize },

    #[error("approximation invalid: {0}")]
    ApproximationInvalid(String),

    /// The witness margin does not change sign over the temperature bracket.
    #[error("no violation in bracket [{t_lo}, {t_hi}]: margins {margin_lo:.6} / {margin_hi:.6}")]
    NoViolation {
        t_lo: f64,
        t_hi: f64,
        margin_lo: f64,
        margin_hi: f64,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
