mod args;
mod commands;
mod output;

use std::process::ExitCode;

use args::{Cli, Command};
use clap::Parser;

fn run(cli: &Cli) -> anyhow::Result<bool> {
    match &cli.command {
        Command::Spectrum(a) => commands::spectrum(a)?,
        Command::Partition(a) => commands::partition(a)?,
        Command::EnergyCurve(a) => commands::energy_curve(a)?,
        Command::CriticalTemp(a) => commands::critical_temp(a)?,
        Command::Witness(a) => commands::witness(a)?,
        Command::Validate(a) => return commands::validate(a),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
