//! `liqsim`: command-line experiments for the ergodic liquidation model.
//!
//! Each command writes its CSV artifacts plus a `manifest.toml` into
//! `--out`. The manifest holds every resolved setting and can be passed back
//! with `--config` to reproduce the run byte for byte.

mod args;
mod commands;
mod config;
mod error;
mod inputs;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::config::Settings;
use crate::error::CliError;
use crate::output::OutDir;

fn run(cli: &Cli) -> Result<(), CliError> {
    let file = config::load(&cli.command)?;
    let settings = Settings::resolve(file, &cli.command)?;
    let mut out = OutDir::create(&config::common(&cli.command).out)?;
    commands::run(&cli.command, &settings, &mut out)?;
    let manifest = settings.manifest(&cli.command, out.written());
    let text = toml::to_string(&manifest).map_err(|e| CliError::Config(e.to_string()))?;
    out.text("manifest.toml", &text)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("liqsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
