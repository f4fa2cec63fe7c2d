//! Sensitivity of the ergodic constant to one or two model parameters.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::{run_ensemble, EnsembleStats, SimConfig};
use crate::error::SimError;
use crate::params::MarketParams;
use crate::strategies::{ergodic_gamma, StrategySpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepAxis {
    R,
    Eta,
    Lambda,
    K,
    B,
    Sigma,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::R => "r",
            SweepAxis::Eta => "eta",
            SweepAxis::Lambda => "lambda",
            SweepAxis::K => "k",
            SweepAxis::B => "b",
            SweepAxis::Sigma => "sigma",
        }
    }

    /// `params` with this axis set to `value` (`Lambda` sets both sides).
    pub fn apply(self, params: &MarketParams, value: f64) -> MarketParams {
        let mut p = *params;
        match self {
            SweepAxis::R => p.r = value,
            SweepAxis::Eta => p.eta_mean = value,
            SweepAxis::Lambda => p = p.with_lambda(value),
            SweepAxis::K => p.k = value,
            SweepAxis::B => p.b = value,
            SweepAxis::Sigma => p.sigma = value,
        }
        p
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "r" => SweepAxis::R,
            "eta" => SweepAxis::Eta,
            "lambda" => SweepAxis::Lambda,
            "k" => SweepAxis::K,
            "b" => SweepAxis::B,
            "sigma" => SweepAxis::Sigma,
            other => return Err(format!("unknown sweep axis `{other}` (expected r, eta, lambda, k, b or sigma)")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisGrid {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

impl AxisGrid {
    /// `count` evenly spaced points from `start` to `end` inclusive.
    pub fn linspace(axis: SweepAxis, start: f64, end: f64, count: usize) -> Self {
        let values = match count {
            0 => Vec::new(),
            1 => vec![start],
            n => (0..n)
                .map(|i| start + (end - start) * i as f64 / (n - 1) as f64)
                .collect(),
        };
        Self { axis, values }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepMode {
    ClosedForm,
    /// Ergodic strategy simulated with this config (its strategy is ignored).
    /// Every grid point reuses the config's master seed.
    MonteCarlo(SimConfig),
}

impl SweepMode {
    pub fn label(&self) -> &'static str {
        match self {
            SweepMode::ClosedForm => "closed_form",
            SweepMode::MonteCarlo(_) => "monte_carlo",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub coords: Vec<(SweepAxis, f64)>,
    /// Closed-form gamma, or the Monte-Carlo mean average PnL.
    pub value: f64,
    /// Zero in closed-form mode.
    pub std_err: f64,
    pub stats: Option<EnsembleStats>,
}

/// Evaluates gamma over the Cartesian product of one or two axes, the first
/// axis varying slowest.
pub fn sweep_gamma(
    grid: &[AxisGrid],
    params: &MarketParams,
    mode: &SweepMode,
) -> Result<Vec<SweepRow>, SimError> {
    if grid.is_empty() || grid.len() > 2 {
        return Err(SimError::Config(format!("a sweep takes one or two axes, got {}", grid.len())));
    }
    if grid.len() == 2 && grid[0].axis == grid[1].axis {
        return Err(SimError::Config(format!("axis `{}` given twice", grid[0].axis)));
    }
    let mut points: Vec<Vec<(SweepAxis, f64)>> = vec![Vec::new()];
    for axis in grid {
        points = points
            .into_iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push((axis.axis, v));
                    p
                })
            })
            .collect();
    }

    points
        .into_iter()
        .map(|coords| {
            let p = coords.iter().fold(*params, |acc, &(axis, v)| axis.apply(&acc, v));
            p.validate()?;
            match mode {
                SweepMode::ClosedForm => Ok(SweepRow {
                    coords,
                    value: ergodic_gamma(&p)?,
                    std_err: 0.0,
                    stats: None,
                }),
                SweepMode::MonteCarlo(config) => {
                    let config = SimConfig {
                        strategy: StrategySpec::Ergodic,
                        series: None,
                        ..*config
                    };
                    let stats = run_ensemble(&config, &p)?.stats;
                    Ok(SweepRow {
                        coords,
                        value: stats.mean,
                        std_err: stats.std_err,
                        stats: Some(stats),
                    })
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed(axis: SweepAxis, start: f64, end: f64) -> Vec<f64> {
        let grid = [AxisGrid::linspace(axis, start, end, 8)];
        sweep_gamma(&grid, &MarketParams::default(), &SweepMode::ClosedForm)
            .unwrap()
            .into_iter()
            .map(|r| r.value)
            .collect()
    }

    #[test]
    fn gamma_decreases_in_k() {
        let g = closed(SweepAxis::K, 1e-4, 1e-2);
        assert!(g.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn gamma_is_linear_in_r() {
        let p = MarketParams::default();
        let g = closed(SweepAxis::R, 0.0, 0.7);
        let slope = 2.0 * p.lambda_plus * p.eta_mean * p.s0;
        for w in g.windows(2) {
            assert!(w[1] > w[0]);
            assert!(((w[1] - w[0]) / 0.1 - slope).abs() < 1e-9);
        }
    }

    #[test]
    fn gamma_constant_in_sigma() {
        let g = closed(SweepAxis::Sigma, 0.1, 1.0);
        assert!(g.iter().all(|&v| v == g[0]));
    }

    #[test]
    fn two_axis_grid_is_row_major() {
        let grid = [
            AxisGrid::linspace(SweepAxis::R, 0.0, 0.1, 3),
            AxisGrid::linspace(SweepAxis::Eta, 5.0, 10.0, 2),
        ];
        let rows = sweep_gamma(&grid, &MarketParams::default(), &SweepMode::ClosedForm).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[1].coords, vec![(SweepAxis::R, 0.0), (SweepAxis::Eta, 10.0)]);
        assert_eq!(rows[2].coords[0], (SweepAxis::R, 0.05));
    }

    #[test]
    fn rejects_bad_grids() {
        let p = MarketParams::default();
        assert!(sweep_gamma(&[], &p, &SweepMode::ClosedForm).is_err());
        let dup = [AxisGrid::linspace(SweepAxis::K, 1e-3, 2e-3, 2), AxisGrid::linspace(SweepAxis::K, 1e-3, 2e-3, 2)];
        assert!(sweep_gamma(&dup, &p, &SweepMode::ClosedForm).is_err());
        let invalid = [AxisGrid::linspace(SweepAxis::K, 0.0, 1e-3, 2)];
        assert!(sweep_gamma(&invalid, &p, &SweepMode::ClosedForm).is_err());
    }

    #[test]
    fn monte_carlo_mode_fills_stats() {
        let config = SimConfig { horizon: 20.0, n_paths: 4, ..SimConfig::default() };
        let grid = [AxisGrid::linspace(SweepAxis::Sigma, 0.1, 0.2, 2)];
        let rows = sweep_gamma(&grid, &MarketParams::default(), &SweepMode::MonteCarlo(config)).unwrap();
        assert!(rows.iter().all(|r| r.stats.is_some() && r.std_err > 0.0));
    }

    #[test]
    fn axis_names_round_trip() {
        for axis in [SweepAxis::R, SweepAxis::Eta, SweepAxis::Lambda, SweepAxis::K, SweepAxis::B, SweepAxis::Sigma] {
            assert_eq!(axis.as_str().parse::<SweepAxis>().unwrap(), axis);
        }
        assert!("phi".parse::<SweepAxis>().is_err());
    }
}
