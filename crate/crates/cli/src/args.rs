use std::path::PathBuf;

use anyhow::{bail, Result};
use bellcorr_core::bell::operator_from_angle;
use bellcorr_core::{Method, ModelParams};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Directory used for output files when `--output` is not given.
pub const OUTPUT_DIR_ENV: &str = "BELLCORR_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "bellcorr", version, about = "Bell-correlation witness for the infinite-range Ising model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lowest exact sector levels next to the oscillator approximation.
    Spectrum(SpectrumArgs),
    /// ln Z and the mean energy over a temperature grid, one row per method and temperature.
    Partition(CurveArgs),
    /// Mean energy per particle over a temperature grid, one column per method.
    EnergyCurve(CurveArgs),
    /// Numeric and closed-form critical temperatures.
    CriticalTemp(CriticalArgs),
    /// Witness margin at a single temperature.
    Witness(WitnessArgs),
    /// Run the small-N oracle checks and report pass/fail.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Number of particles.
    #[arg(long = "n")]
    pub n: Option<u64>,
    /// Measurement angle θ in radians [default: π/6].
    #[arg(long, conflicts_with_all = ["b_x", "b_z", "j"], allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Transverse field B_x (with --b-z and --j instead of --theta).
    #[arg(long, requires_all = ["b_z", "j"], allow_negative_numbers = true)]
    pub b_x: Option<f64>,
    #[arg(long, requires_all = ["b_x", "j"], allow_negative_numbers = true)]
    pub b_z: Option<f64>,
    /// Two-body coupling J.
    #[arg(long, requires_all = ["b_x", "b_z"], allow_negative_numbers = true)]
    pub j: Option<f64>,
}

/// How the model was specified, echoed into JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct ModelConfig {
    pub n_particles: u64,
    pub theta: Option<f64>,
    pub b_x: f64,
    pub b_z: f64,
    pub j: f64,
}

impl ModelArgs {
    pub fn resolve(&self, default_n: u64) -> Result<(ModelParams, ModelConfig)> {
        let n = self.n.unwrap_or(default_n);
        let (params, theta) = match (self.b_x, self.b_z, self.j) {
            (Some(b_x), Some(b_z), Some(j)) => (ModelParams::new(b_x, b_z, j, n)?, None),
            (None, None, None) => {
                let theta = self.theta.unwrap_or(std::f64::consts::FRAC_PI_6);
                let (couplings, _) = operator_from_angle(theta)?;
                (couplings.with_particles(n)?, Some(theta))
            }
            _ => bail!("--b-x, --b-z and --j must be given together"),
        };
        let config = ModelConfig {
            n_particles: n,
            theta,
            b_x: params.b_x,
            b_z: params.b_z,
            j: params.j,
        };
        Ok((params, config))
    }

    pub fn is_explicit(&self) -> bool {
        self.b_x.is_some()
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file, or `-` for stdout [default: <command>.<format> in $BELLCORR_OUTPUT_DIR or .].
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Total spins S, comma separated [default: N/2, N/2 − 5, N/2 − 20].
    #[arg(long, value_delimiter = ',')]
    pub sectors: Option<Vec<f64>>,
    /// Levels per sector.
    #[arg(long, default_value_t = 6)]
    pub levels: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 0.05)]
    pub t_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub t_max: f64,
    /// Number of temperatures, endpoints included.
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
}

impl GridArgs {
    pub fn temperatures(&self) -> Result<Vec<f64>> {
        if !(self.t_min > 0.0 && self.t_max >= self.t_min && self.t_max.is_finite()) {
            bail!("need 0 < t-min <= t-max, got [{}, {}]", self.t_min, self.t_max);
        }
        match self.steps {
            0 => bail!("--steps must be at least 1"),
            1 => Ok(vec![self.t_min]),
            k => {
                let dt = (self.t_max - self.t_min) / (k - 1) as f64;
                Ok((0..k)
                    .map(|i| if i + 1 == k { self.t_max } else { self.t_min + i as f64 * dt })
                    .collect())
            }
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Thermal method; repeat for several [default: exact_hp_sum].
    #[arg(long = "method", value_parser = parse_method)]
    pub methods: Vec<Method>,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl CurveArgs {
    pub fn methods(&self) -> Vec<Method> {
        if self.methods.is_empty() {
            vec![Method::ExactHpSum]
        } else {
            let mut out = Vec::new();
            for m in &self.methods {
                if !out.contains(m) {
                    out.push(*m);
                }
            }
            out
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CriticalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = bellcorr_core::bell::DEFAULT_BRACKET.0)]
    pub t_lo: f64,
    #[arg(long, default_value_t = bellcorr_core::bell::DEFAULT_BRACKET.1)]
    pub t_hi: f64,
    #[arg(long, default_value_t = bellcorr_core::bell::CRITICAL_TEMPERATURE_TOL)]
    pub tol: f64,
    /// Angular frequency (s⁻¹) of one unit of energy, for the kelvin columns.
    #[arg(long, default_value_t = 1.0)]
    pub unit_hz: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub temperature: f64,
    #[arg(long, value_parser = parse_method, default_value = "exact_hp_sum")]
    pub method: Method,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Also write the outcomes to a file (`-` for stdout).
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse::<Method>().map_err(|e| {
        let names: Vec<_> = Method::ALL.iter().map(|m| m.name()).collect();
        format!("{e}; expected one of {}", names.join(", "))
    })
}
