//! Settings resolution: built-in defaults, then the `--config` file, then
//! `--set` pairs, then dedicated flags.
//!
//! The file is flat TOML. Every key it accepts is also written to the
//! run manifest, so a manifest can be fed back with `--config`.

use std::path::{Path, PathBuf};

use liquidation_core::{AxisGrid, CashMode, MarketParams, SimConfig, StrategySpec, SweepAxis};
use serde::{Deserialize, Serialize};

use crate::args::{Command, CommonArgs, EngineArgs};
use crate::error::CliError;

/// A string or a list of strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

impl OneOrMany {
    fn into_vec(self) -> Vec<String> {
        match self {
            OneOrMany::One(s) => vec![s],
            OneOrMany::Many(v) => v,
        }
    }
}

/// The on-disk settings format, shared by `--config` files and manifests.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_plus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_minus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_std: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paths: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cash_mode: Option<OneOrMany>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<OneOrMany>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timeseries: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timeseries_paths: Option<usize>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis: Option<OneOrMany>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_mode: Option<String>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub liquidations: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub book: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flow: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_window: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_intercept: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_trade_size: Option<usize>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub outputs: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    Closed,
    MonteCarlo,
}

impl SweepKind {
    fn as_str(self) -> &'static str {
        match self {
            SweepKind::Closed => "closed",
            SweepKind::MonteCarlo => "mc",
        }
    }
}

/// Fully resolved settings for one command.
#[derive(Debug, Clone)]
pub struct Settings {
    pub params: MarketParams,
    pub sim: SimConfig,
    pub strategies: Vec<StrategySpec>,
    pub cash_modes: Vec<CashMode>,
    pub timeseries: Option<usize>,
    pub timeseries_paths: usize,
    pub axes: Vec<AxisGrid>,
    axis_specs: Vec<String>,
    pub sweep_kind: SweepKind,
    pub liquidations: Option<PathBuf>,
    pub book: Option<PathBuf>,
    pub flow: Option<PathBuf>,
    pub lambda_window: Option<f64>,
    pub k_intercept: bool,
    pub max_trade_size: usize,
}

fn read_table(path: &Path) -> Result<toml::Table, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    text.parse::<toml::Table>()
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Parses the right-hand side of `key=value` as a TOML value, falling back
/// to a bare string (so `--set cash_mode=full` works unquoted).
fn parse_value(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

fn float(v: f64) -> toml::Value {
    toml::Value::Float(v)
}

fn int(v: u64, key: &str) -> Result<toml::Value, CliError> {
    i64::try_from(v)
        .map(toml::Value::Integer)
        .map_err(|_| CliError::Config(format!("{key} must be at most {}", i64::MAX)))
}

fn strings(v: &[String]) -> toml::Value {
    toml::Value::Array(v.iter().cloned().map(toml::Value::String).collect())
}

fn engine_flags(e: &EngineArgs, out: &mut Vec<(String, toml::Value)>) -> Result<(), CliError> {
    if let Some(seed) = e.seed {
        out.push(("seed".into(), int(seed, "seed")?));
    }
    if let Some(paths) = e.paths {
        out.push(("paths".into(), int(paths as u64, "paths")?));
    }
    if let Some(h) = e.horizon {
        out.push(("horizon".into(), float(h)));
    }
    if let Some(dt) = e.dt {
        out.push(("dt".into(), float(dt)));
    }
    if !e.cash_mode.is_empty() {
        out.push(("cash_mode".into(), strings(&e.cash_mode)));
    }
    Ok(())
}

fn flag_overrides(command: &Command) -> Result<Vec<(String, toml::Value)>, CliError> {
    let mut out = Vec::new();
    match command {
        Command::Gamma(_) => {}
        Command::Simulate(a) | Command::Compare(a) => {
            engine_flags(&a.engine, &mut out)?;
            if !a.strategy.is_empty() {
                out.push(("strategy".into(), strings(&a.strategy)));
            }
            if let Some(s) = a.timeseries {
                out.push(("timeseries".into(), int(s as u64, "timeseries")?));
            }
            if let Some(n) = a.timeseries_paths {
                out.push(("timeseries_paths".into(), int(n as u64, "timeseries_paths")?));
            }
        }
        Command::Sweep(a) => {
            engine_flags(&a.engine, &mut out)?;
            if !a.axis.is_empty() {
                out.push(("axis".into(), strings(&a.axis)));
            }
            if let Some(m) = &a.sweep_mode {
                out.push(("sweep_mode".into(), toml::Value::String(m.clone())));
            }
        }
        Command::Calibrate(a) => {
            let path = |p: &PathBuf| toml::Value::String(p.to_string_lossy().into_owned());
            if let Some(p) = &a.liquidations {
                out.push(("liquidations".into(), path(p)));
            }
            if let Some(p) = &a.book {
                out.push(("book".into(), path(p)));
            }
            if let Some(p) = &a.flow {
                out.push(("flow".into(), path(p)));
            }
            if let Some(w) = a.lambda_window {
                out.push(("lambda_window".into(), float(w)));
            }
            if a.k_no_intercept {
                out.push(("k_intercept".into(), toml::Value::Boolean(false)));
            }
            if let Some(n) = a.max_trade_size {
                out.push(("max_trade_size".into(), int(n as u64, "max_trade_size")?));
            }
        }
    }
    Ok(out)
}

pub fn common(command: &Command) -> &CommonArgs {
    match command {
        Command::Gamma(c) => c,
        Command::Simulate(a) | Command::Compare(a) => &a.common,
        Command::Sweep(a) => &a.common,
        Command::Calibrate(a) => &a.common,
    }
}

/// Merges file, `--set` pairs and flags into one table and deserialises it.
pub fn load(command: &Command) -> Result<FileConfig, CliError> {
    let common = common(command);
    let mut table = match &common.config {
        Some(path) => read_table(path)?,
        None => toml::Table::new(),
    };
    for pair in &common.set {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("--set expects KEY=VALUE, got `{pair}`")))?;
        table.insert(key.trim().to_string(), parse_value(value.trim()));
    }
    for (key, value) in flag_overrides(command)? {
        table.insert(key, value);
    }
    // Integers are accepted where floats are expected.
    const FLOAT_KEYS: [&str; 16] = [
        "lambda", "lambda_plus", "lambda_minus", "eta", "eta_std", "sigma", "b", "k", "phi", "r",
        "s0", "q0", "x0", "horizon", "dt", "lambda_window",
    ];
    for key in FLOAT_KEYS {
        if let Some(toml::Value::Integer(i)) = table.get(key) {
            let f = *i as f64;
            table.insert(key.to_string(), toml::Value::Float(f));
        }
    }
    toml::Value::Table(table)
        .try_into::<FileConfig>()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn parse_axis(spec: &str) -> Result<AxisGrid, CliError> {
    let bad = || CliError::Config(format!("axis `{spec}` must look like name=start:end:count"));
    let (name, range) = spec.split_once('=').ok_or_else(bad)?;
    let axis: SweepAxis = name.parse().map_err(CliError::Config)?;
    let parts: Vec<&str> = range.split(':').collect();
    let [start, end, count] = parts.as_slice() else {
        return Err(bad());
    };
    let start: f64 = start.trim().parse().map_err(|_| bad())?;
    let end: f64 = end.trim().parse().map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    if count == 0 || !start.is_finite() || !end.is_finite() {
        return Err(bad());
    }
    Ok(AxisGrid::linspace(axis, start, end, count))
}

impl Settings {
    pub fn resolve(file: FileConfig, command: &Command) -> Result<Self, CliError> {
        let mut params = MarketParams::default();
        if let Some(l) = file.lambda {
            if file.lambda_plus.is_some() || file.lambda_minus.is_some() {
                return Err(CliError::Config(
                    "give either lambda or lambda_plus/lambda_minus, not both".into(),
                ));
            }
            params = params.with_lambda(l);
        }
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut params.lambda_plus, file.lambda_plus);
        set(&mut params.lambda_minus, file.lambda_minus);
        set(&mut params.eta_mean, file.eta);
        set(&mut params.eta_std, file.eta_std);
        set(&mut params.sigma, file.sigma);
        set(&mut params.b, file.b);
        set(&mut params.k, file.k);
        set(&mut params.phi, file.phi);
        set(&mut params.r, file.r);
        set(&mut params.s0, file.s0);
        set(&mut params.q0, file.q0);
        set(&mut params.x0, file.x0);

        let is_compare = matches!(command, Command::Compare(_));
        let strategies = match file.strategy {
            Some(s) => s
                .into_vec()
                .iter()
                .map(|s| s.parse::<StrategySpec>())
                .collect::<Result<Vec<_>, _>>()?,
            None if is_compare => vec![StrategySpec::Ergodic, StrategySpec::HalfInventory],
            None => vec![StrategySpec::Ergodic],
        };
        let cash_modes = match file.cash_mode {
            Some(m) => m
                .into_vec()
                .iter()
                .map(|s| s.parse::<CashMode>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(CliError::Config)?,
            None if is_compare => CashMode::ALL.to_vec(),
            None => vec![CashMode::Simplified],
        };
        if strategies.is_empty() || cash_modes.is_empty() {
            return Err(CliError::Config("strategy and cash_mode lists must not be empty".into()));
        }
        if !is_compare && (strategies.len() > 1 || cash_modes.len() > 1) {
            return Err(CliError::Config(format!(
                "`{}` takes a single strategy and cash mode; use `compare` for several",
                command.name()
            )));
        }

        let defaults = SimConfig::default();
        let sim = SimConfig {
            dt: file.dt.unwrap_or(defaults.dt),
            horizon: file.horizon.unwrap_or(defaults.horizon),
            n_paths: file.paths.unwrap_or(defaults.n_paths),
            seed: file.seed.unwrap_or(defaults.seed),
            cash_mode: cash_modes[0],
            strategy: strategies[0],
            series: None,
        };

        let axis_specs = file.axis.map(OneOrMany::into_vec).unwrap_or_default();
        let axes = axis_specs.iter().map(|s| parse_axis(s)).collect::<Result<Vec<_>, _>>()?;
        let sweep_kind = match file.sweep_mode.as_deref().map(str::trim) {
            None | Some("closed") | Some("closed_form") => SweepKind::Closed,
            Some("mc") | Some("monte_carlo") => SweepKind::MonteCarlo,
            Some(other) => {
                return Err(CliError::Config(format!("unknown sweep mode `{other}` (expected closed or mc)")))
            }
        };

        let max_trade_size = file.max_trade_size.unwrap_or(100);
        if max_trade_size < 2 {
            return Err(CliError::Config("max_trade_size must be at least 2".into()));
        }

        Ok(Settings {
            params,
            sim,
            strategies,
            cash_modes,
            timeseries: file.timeseries,
            timeseries_paths: file.timeseries_paths.unwrap_or(10),
            axes,
            axis_specs,
            sweep_kind,
            liquidations: file.liquidations,
            book: file.book,
            flow: file.flow,
            lambda_window: file.lambda_window,
            k_intercept: file.k_intercept.unwrap_or(true),
            max_trade_size,
        })
    }

    fn param_keys(&self, out: &mut FileConfig) {
        let p = &self.params;
        if p.lambda_plus == p.lambda_minus {
            out.lambda = Some(p.lambda_plus);
        } else {
            out.lambda_plus = Some(p.lambda_plus);
            out.lambda_minus = Some(p.lambda_minus);
        }
        out.eta = Some(p.eta_mean);
        out.eta_std = Some(p.eta_std);
        out.sigma = Some(p.sigma);
        out.b = Some(p.b);
        out.k = Some(p.k);
        out.phi = Some(p.phi);
        out.r = Some(p.r);
        out.s0 = Some(p.s0);
        out.q0 = Some(p.q0);
        out.x0 = Some(p.x0);
    }

    fn engine_keys(&self, out: &mut FileConfig) {
        out.seed = Some(self.sim.seed);
        out.paths = Some(self.sim.n_paths);
        out.horizon = Some(self.sim.horizon);
        out.dt = Some(self.sim.dt);
        out.cash_mode = Some(OneOrMany::Many(self.cash_modes.iter().map(|m| m.as_str().to_string()).collect()));
    }

    /// The settings that influence `command`, as a reusable config file.
    pub fn manifest(&self, command: &Command, outputs: &[String]) -> FileConfig {
        let mut out = FileConfig {
            command: Some(command.name().to_string()),
            version: Some(env!("CARGO_PKG_VERSION").to_string()),
            ..FileConfig::default()
        };
        match command {
            Command::Gamma(_) => self.param_keys(&mut out),
            Command::Simulate(_) | Command::Compare(_) => {
                self.param_keys(&mut out);
                self.engine_keys(&mut out);
                out.strategy = Some(OneOrMany::Many(self.strategies.iter().map(|s| s.to_string()).collect()));
                out.timeseries = self.timeseries;
                if self.timeseries.is_some() {
                    out.timeseries_paths = Some(self.timeseries_paths);
                }
            }
            Command::Sweep(_) => {
                self.param_keys(&mut out);
                out.axis = Some(OneOrMany::Many(self.axis_specs.clone()));
                out.sweep_mode = Some(self.sweep_kind.as_str().to_string());
                if self.sweep_kind == SweepKind::MonteCarlo {
                    self.engine_keys(&mut out);
                }
            }
            Command::Calibrate(_) => {
                out.liquidations = self.liquidations.clone();
                out.book = self.book.clone();
                out.flow = self.flow.clone();
                out.lambda_window = self.lambda_window;
                out.k_intercept = Some(self.k_intercept);
                out.max_trade_size = Some(self.max_trade_size);
            }
        }
        out.outputs = Some(outputs.to_vec());
        out
    }
}
