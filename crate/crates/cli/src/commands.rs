use anyhow::{bail, Context, Result};
use bellcorr_core::bell::{
    critical_temperature_closed, critical_temperature_guess_for, critical_temperature_in,
    max_quantum_violation, to_physical_temperature, witness_margin, NORMALIZED_CLASSICAL_BOUND,
};
use bellcorr_core::oscillator::{hp_energy_with, ConstantTerm};
use bellcorr_core::spin::sector_lowest;
use bellcorr_core::thermo::thermal_point;
use bellcorr_core::validate::run_all;
use bellcorr_core::{Method, ModelParams, SpinSector, ThermalPoint};
use serde_json::{json, Value};

use crate::args::{CriticalArgs, CurveArgs, ModelConfig, OutputArgs, SpectrumArgs, ValidateArgs, WitnessArgs};
use crate::output::{destination, emit, Cell, Table};

pub const SPECTRUM_DEFAULT_N: u64 = 5000;
pub const CURVE_DEFAULT_N: u64 = 100_000;

fn finish(table: &Table, output: &OutputArgs, stem: &str, config: Value) -> Result<()> {
    let bytes = table.render(output.format, config)?;
    emit(&destination(output.output.as_deref(), stem, output.format), &bytes)
}

fn warn(msg: impl std::fmt::Display) {
    eprintln!("warning: {msg}");
}

fn default_sectors(n: u64) -> Vec<f64> {
    let top = n as f64 / 2.0;
    [0.0, 5.0, 20.0].iter().map(|d| top - d).filter(|s| *s >= 0.0).collect()
}

fn two_s(s: f64) -> Result<u64> {
    let t = 2.0 * s;
    if !(t >= 0.0 && t.fract() == 0.0 && t <= u64::MAX as f64) {
        bail!("total spin {s} is not a non-negative multiple of 1/2");
    }
    Ok(t as u64)
}

pub fn spectrum(args: &SpectrumArgs) -> Result<()> {
    let (params, model) = args.model.resolve(SPECTRUM_DEFAULT_N)?;
    let sectors = args.sectors.clone().unwrap_or_else(|| default_sectors(params.n_particles));
    let n = params.n();

    let mut table = Table::new(["s", "n", "e_exact_per_n", "e_hp_per_n", "e_hp_finite_per_n"]);
    for &s in &sectors {
        let sector = SpinSector::new(params.n_particles, two_s(s)?)?;
        let exact = sector_lowest(&params, &sector, args.levels)?;
        for (level, e) in exact.iter().enumerate() {
            let hp = |variant| {
                hp_energy_with(&params, sector.total_spin_2s, level as u64, variant).map_or(f64::NAN, |e| e / n)
            };
            table.push(vec![
                s.into(),
                (level as u64).into(),
                (e / n).into(),
                hp(ConstantTerm::LargeN).into(),
                hp(ConstantTerm::FiniteN).into(),
            ]);
        }
    }
    let config = json!({
        "command": "spectrum",
        "model": model,
        "sectors": sectors,
        "levels": args.levels,
        "format": args.output.format,
    });
    finish(&table, &args.output, "spectrum", config)
}

struct Curve {
    temperatures: Vec<f64>,
    methods: Vec<Method>,
    /// `points[m][i]` for method `m` at temperature `i`.
    points: Vec<Vec<Option<ThermalPoint>>>,
}

fn evaluate_curve(params: &ModelParams, args: &CurveArgs) -> Result<Curve> {
    let temperatures = args.grid.temperatures()?;
    let methods = args.methods();
    let mut points = Vec::with_capacity(methods.len());
    for &method in &methods {
        let mut column = Vec::with_capacity(temperatures.len());
        let mut first_error = None;
        let mut failures = 0;
        let mut first_warning = None;
        let mut warned = 0;
        for &t in &temperatures {
            if let Some(w) = method.regime_warning(params, t) {
                warned += 1;
                first_warning.get_or_insert(w);
            }
            match thermal_point(params, 1.0 / t, method) {
                Ok(p) => column.push(Some(p)),
                Err(e) => {
                    failures += 1;
                    first_error.get_or_insert(format!("T = {t}: {e}"));
                    column.push(None);
                }
            }
        }
        if let Some(w) = first_warning {
            warn(format_args!("{w} ({warned} of {} temperatures affected)", temperatures.len()));
        }
        if let Some(e) = first_error {
            warn(format_args!(
                "{method} failed at {failures} of {} temperatures, first at {e}",
                temperatures.len()
            ));
        }
        points.push(column);
    }
    Ok(Curve {
        temperatures,
        methods,
        points,
    })
}

fn curve_config(command: &str, args: &CurveArgs, model: &ModelConfig) -> Value {
    json!({
        "command": command,
        "model": model,
        "t_min": args.grid.t_min,
        "t_max": args.grid.t_max,
        "steps": args.grid.steps,
        "methods": args.methods(),
        "format": args.output.format,
    })
}

pub fn energy_curve(args: &CurveArgs) -> Result<()> {
    let (params, model) = args.model.resolve(CURVE_DEFAULT_N)?;
    let curve = evaluate_curve(&params, args)?;
    let max_violation = max_quantum_violation(2)?.limit_per_particle;

    let mut columns = vec!["temperature".to_string()];
    columns.extend(curve.methods.iter().map(|m| m.name().to_string()));
    columns.extend(["classical_bound".to_string(), "max_quantum_violation".to_string()]);
    let mut table = Table::new(columns);
    for (i, &t) in curve.temperatures.iter().enumerate() {
        let mut row = vec![Cell::Num(t)];
        for column in &curve.points {
            row.push(Cell::Num(column[i].map_or(f64::NAN, |p| p.energy_per_particle)));
        }
        row.push(NORMALIZED_CLASSICAL_BOUND.into());
        row.push(max_violation.into());
        table.push(row);
    }
    finish(&table, &args.output, "energy-curve", curve_config("energy-curve", args, &model))
}

pub fn partition(args: &CurveArgs) -> Result<()> {
    let (params, model) = args.model.resolve(CURVE_DEFAULT_N)?;
    let curve = evaluate_curve(&params, args)?;

    let mut table = Table::new([
        "temperature",
        "beta",
        "method",
        "log_z",
        "mean_energy",
        "energy_per_particle",
    ]);
    for (m, &method) in curve.methods.iter().enumerate() {
        for (i, &t) in curve.temperatures.iter().enumerate() {
            let p = curve.points[m][i];
            let get = |f: fn(&ThermalPoint) -> f64| p.as_ref().map_or(f64::NAN, f);
            table.push(vec![
                t.into(),
                (1.0 / t).into(),
                method.name().into(),
                get(|p| p.log_z).into(),
                get(|p| p.mean_energy).into(),
                get(|p| p.energy_per_particle).into(),
            ]);
        }
    }
    finish(&table, &args.output, "partition", curve_config("partition", args, &model))
}

pub fn critical_temp(args: &CriticalArgs) -> Result<()> {
    let (params, model) = args.model.resolve(CURVE_DEFAULT_N)?;
    if !params.is_reference() {
        warn("the closed-form temperatures refer to B = (-1, 0, √3), J = 6");
    }
    let numeric = critical_temperature_in(&params, args.t_lo, args.t_hi, args.tol)
        .context("locating the crossing of the exact mean energy with the bound")?;
    let closed = critical_temperature_closed();
    let guess = critical_temperature_guess_for(&params.couplings()).unwrap_or(f64::NAN);
    let kelvin = |t: f64| to_physical_temperature(t, args.unit_hz).map_or(f64::NAN, |k| k);

    let mut table = Table::new([
        "n",
        "t_c_numeric",
        "t_c_closed",
        "t_c_guess",
        "t_c_numeric_kelvin",
        "t_c_closed_kelvin",
        "t_c_guess_kelvin",
    ]);
    table.push(vec![
        params.n_particles.into(),
        numeric.into(),
        closed.into(),
        guess.into(),
        kelvin(numeric).into(),
        kelvin(closed).into(),
        kelvin(guess).into(),
    ]);
    let config = json!({
        "command": "critical-temp",
        "model": model,
        "t_lo": args.t_lo,
        "t_hi": args.t_hi,
        "tol": args.tol,
        "unit_hz": args.unit_hz,
        "format": args.output.format,
    });
    finish(&table, &args.output, "critical-temp", config)
}

pub fn witness(args: &WitnessArgs) -> Result<()> {
    let (params, model) = args.model.resolve(CURVE_DEFAULT_N)?;
    if args.model.is_explicit() {
        warn("explicit couplings: the bound -N assumes they come from a measurement angle");
    }
    let report = witness_margin(&params, args.temperature, args.method)?;
    if let Some(w) = &report.warning {
        warn(w);
    }
    let mut table = Table::new([
        "temperature",
        "method",
        "mean_bell_per_n",
        "margin",
        "violated",
        "warning",
    ]);
    table.push(vec![
        report.temperature.into(),
        report.method.name().into(),
        report.mean_bell_per_n.into(),
        report.margin.into(),
        report.violated.into(),
        report.warning.clone().into(),
    ]);
    let config = json!({
        "command": "witness",
        "model": model,
        "temperature": args.temperature,
        "method": args.method,
        "format": args.output.format,
    });
    finish(&table, &args.output, "witness", config)
}

/// Returns whether every check passed.
pub fn validate(args: &ValidateArgs) -> Result<bool> {
    let outcomes = run_all()?;
    let mut table = Table::new(["check", "passed", "detail"]);
    for c in &outcomes {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        table.push(vec![c.name.as_str().into(), c.passed.into(), c.detail.as_str().into()]);
    }
    if let Some(path) = &args.output {
        let config = json!({ "command": "validate", "format": args.format });
        let bytes = table.render(args.format, config)?;
        emit(&destination(Some(path), "validate", args.format), &bytes)?;
    }
    Ok(outcomes.iter().all(|c| c.passed))
}
