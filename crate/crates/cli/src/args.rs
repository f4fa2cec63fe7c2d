use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Experiments for an exchange that liquidates inherited positions.
#[derive(Debug, Parser)]
#[command(name = "liqsim", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the closed-form ergodic constant; writes gamma.csv.
    Gamma(CommonArgs),
    /// Simulate one strategy in one cash mode; writes paths.csv and compare.csv.
    Simulate(SimulateArgs),
    /// Simulate several strategies and cash modes on shared seeds.
    Compare(SimulateArgs),
    /// Evaluate gamma (closed form or Monte-Carlo) over a 1-2 axis grid; writes sweep.csv.
    Sweep(SweepArgs),
    /// Estimate lambda, eta, k and b from data files; writes params_estimated.csv.
    Calibrate(CalibrateArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gamma(_) => "gamma",
            Command::Simulate(_) => "simulate",
            Command::Compare(_) => "compare",
            Command::Sweep(_) => "sweep",
            Command::Calibrate(_) => "calibrate",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Flat TOML file of settings (a previous run's manifest.toml works).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Override one setting, e.g. `--set sigma=0.8` (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct EngineArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of Monte-Carlo paths.
    #[arg(long)]
    pub paths: Option<usize>,
    /// Simulation horizon in seconds.
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Euler step in seconds.
    #[arg(long)]
    pub dt: Option<f64>,
    /// full or simplified (repeatable or comma separated).
    #[arg(long = "cash-mode", value_delimiter = ',')]
    pub cash_mode: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// ergodic | half | finite:<T>:<alpha> | discounted:<beta> (repeatable).
    #[arg(long)]
    pub strategy: Vec<String>,
    /// Record every n-th grid point of the first paths to timeseries CSVs.
    #[arg(long, value_name = "STRIDE")]
    pub timeseries: Option<usize>,
    /// How many paths per ensemble get a time series.
    #[arg(long = "timeseries-paths")]
    pub timeseries_paths: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Grid axis as `name=start:end:count`, name in r, eta, lambda, k, b, sigma
    /// (give once or twice).
    #[arg(long)]
    pub axis: Vec<String>,
    /// closed or mc.
    #[arg(long = "sweep-mode")]
    pub sweep_mode: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct CalibrateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Liquidation log with columns time,size.
    #[arg(long)]
    pub liquidations: Option<PathBuf>,
    /// Book snapshots with columns snapshot_time,side,price,volume,mid.
    #[arg(long)]
    pub book: Option<PathBuf>,
    /// Order-flow buckets with columns net_flow,delta_mid.
    #[arg(long)]
    pub flow: Option<PathBuf>,
    /// Divide the event count by this window length instead of the last event time.
    #[arg(long = "lambda-window")]
    pub lambda_window: Option<f64>,
    /// Regress the book deviation through the origin.
    #[arg(long = "k-no-intercept")]
    pub k_no_intercept: bool,
    /// Trade sizes 1, 2, ..., N walked through each snapshot.
    #[arg(long = "max-trade-size")]
    pub max_trade_size: Option<usize>,
}
