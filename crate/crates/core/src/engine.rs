//! Seeded Monte-Carlo harness.
//!
//! Every path owns two ChaCha8 streams derived from its own seed: stream 0
//! drives the liquidation events, stream 1 the Brownian increments. The
//! number of draws per step never depends on the strategy, the cash mode or
//! the volatility, so ensembles that share a master seed see the same
//! liquidations and the same normalised shocks (common random numbers).
//!
//! Path `i` of an ensemble with master seed `m` uses
//! [`path_seed`]`(m, i)`; results are gathered in path order regardless of
//! how work is scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::market::{sample_jumps, step, CashMode, MarketState};
use crate::params::MarketParams;
use crate::stats;
use crate::strategies::{running_reward, Strategy, StrategySpec};

const JUMP_STREAM: u64 = 0;
const BROWNIAN_STREAM: u64 = 1;

/// Which trajectories to sample into [`PathResult::series`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesSpec {
    /// Keep every `stride`-th grid point (plus the terminal one).
    pub stride: usize,
    /// Only paths with `path_id < max_paths` are recorded.
    pub max_paths: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub dt: f64,
    pub horizon: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub cash_mode: CashMode,
    pub strategy: StrategySpec,
    pub series: Option<SeriesSpec>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: 0.1,
            horizon: 2000.0,
            n_paths: 500,
            seed: 42,
            cash_mode: CashMode::Simplified,
            strategy: StrategySpec::Ergodic,
            series: None,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(SimError::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.horizon >= self.dt) || !self.horizon.is_finite() {
            return Err(SimError::Config(format!(
                "horizon must be at least dt={}, got {}",
                self.dt, self.horizon
            )));
        }
        if self.n_paths == 0 {
            return Err(SimError::Config("n_paths must be at least 1".into()));
        }
        if let Some(spec) = self.series {
            if spec.stride == 0 {
                return Err(SimError::Config("time-series stride must be at least 1".into()));
            }
        }
        Ok(())
    }

    /// Number of Euler steps; the last one is shortened to land on the horizon.
    pub fn n_steps(&self) -> usize {
        ((self.horizon / self.dt) - 1e-9).ceil().max(1.0) as usize
    }
}

/// SplitMix64 finaliser applied to `master + (index + 1) * golden_gamma`.
pub fn path_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimePoint {
    pub t: f64,
    pub s: f64,
    pub q: f64,
    pub x: f64,
    pub running_avg_pnl: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathResult {
    pub path_id: usize,
    pub terminal: MarketState,
    /// Left-Riemann sum of `Q^2 dt`.
    pub penalty_integral: f64,
    /// `(X_T + S_T Q_T - x0 - S0 q0 - phi * penalty_integral) / T`.
    pub avg_pnl: f64,
    /// Left-Riemann time average of the running reward `F(Q, nu)`.
    pub avg_reward: f64,
    pub series: Vec<TimePoint>,
}

fn running_avg(state: &MarketState, start_wealth: f64, penalty: f64, phi: f64) -> f64 {
    if state.t > 0.0 {
        (state.wealth() - start_wealth - phi * penalty) / state.t
    } else {
        0.0
    }
}

fn simulate(
    config: &SimConfig,
    params: &MarketParams,
    strategy: &Strategy,
    path_id: usize,
    seed: u64,
) -> Result<PathResult, SimError> {
    let mut jump_rng = ChaCha8Rng::seed_from_u64(seed);
    jump_rng.set_stream(JUMP_STREAM);
    let mut shock_rng = ChaCha8Rng::seed_from_u64(seed);
    shock_rng.set_stream(BROWNIAN_STREAM);

    let jumps = sample_jumps(params, config.horizon, &mut jump_rng);
    let n_steps = config.n_steps();
    let record = config
        .series
        .filter(|spec| path_id < spec.max_paths)
        .map(|spec| spec.stride);

    let mut state = MarketState::initial(params);
    let start_wealth = state.wealth();
    let mut penalty = 0.0;
    let mut reward = 0.0;
    let mut next_jump = 0;
    let mut series = Vec::new();

    for i in 0..n_steps {
        let t = i as f64 * config.dt;
        let end = if i + 1 == n_steps { config.horizon } else { (i + 1) as f64 * config.dt };
        let h = end - t;
        state.t = t;
        if let Some(stride) = record {
            if i % stride == 0 {
                series.push(TimePoint {
                    t,
                    s: state.s,
                    q: state.q,
                    x: state.x,
                    running_avg_pnl: running_avg(&state, start_wealth, penalty, params.phi),
                });
            }
        }

        let nu = strategy.rate(t, state.q, config.dt, params)?;
        penalty += state.q * state.q * h;
        reward += running_reward(state.q, nu, params) * h;

        let z: f64 = StandardNormal.sample(&mut shock_rng);
        let first = next_jump;
        while next_jump < jumps.len() && jumps[next_jump].time <= end {
            next_jump += 1;
        }
        state = step(&state, nu, h, h.sqrt() * z, &jumps[first..next_jump], params, config.cash_mode)?;
    }
    state.t = config.horizon;
    let avg_pnl = (state.wealth() - start_wealth - params.phi * penalty) / config.horizon;
    if record.is_some() {
        series.push(TimePoint {
            t: state.t,
            s: state.s,
            q: state.q,
            x: state.x,
            running_avg_pnl: avg_pnl,
        });
    }

    Ok(PathResult {
        path_id,
        terminal: state,
        penalty_integral: penalty,
        avg_pnl,
        avg_reward: reward / config.horizon,
        series,
    })
}

/// Simulates one controlled path. Deterministic in `(config, params, seed)`.
pub fn run_path(
    config: &SimConfig,
    params: &MarketParams,
    path_id: usize,
    seed: u64,
) -> Result<PathResult, SimError> {
    config.validate()?;
    params.validate()?;
    let strategy = config.strategy.build(params)?;
    simulate(config, params, &strategy, path_id, seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStats {
    pub n: usize,
    pub mean: f64,
    pub std_err: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    /// 5th percentile (nearest rank) of the reward sample.
    pub var95: f64,
    /// Mean of the samples at or below `var95`.
    pub es95: f64,
}

impl EnsembleStats {
    pub fn from_samples(samples: &[f64]) -> Self {
        assert!(!samples.is_empty(), "ensemble statistics need at least one sample");
        let mean = stats::mean(samples);
        let std_err = stats::std_err(samples);
        let (var95, es95) = stats::tail_risk(samples, 0.05);
        Self {
            n: samples.len(),
            mean,
            std_err,
            ci95_low: mean - 1.96 * std_err,
            ci95_high: mean + 1.96 * std_err,
            var95,
            es95,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub stats: EnsembleStats,
    pub paths: Vec<PathResult>,
}

impl Ensemble {
    pub fn avg_pnls(&self) -> Vec<f64> {
        self.paths.iter().map(|p| p.avg_pnl).collect()
    }

    pub fn avg_rewards(&self) -> Vec<f64> {
        self.paths.iter().map(|p| p.avg_reward).collect()
    }
}

/// Runs `config.n_paths` independent paths and summarises their average PnL.
pub fn run_ensemble(config: &SimConfig, params: &MarketParams) -> Result<Ensemble, SimError> {
    config.validate()?;
    params.validate()?;
    let strategy = config.strategy.build(params)?;
    let one = |i: usize| simulate(config, params, &strategy, i, path_seed(config.seed, i as u64));

    #[cfg(feature = "parallel")]
    let paths: Result<Vec<_>, _> = {
        use rayon::prelude::*;
        (0..config.n_paths).into_par_iter().map(one).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let paths: Result<Vec<_>, _> = (0..config.n_paths).map(one).collect();

    let paths = paths?;
    let samples: Vec<f64> = paths.iter().map(|p| p.avg_pnl).collect();
    Ok(Ensemble {
        stats: EnsembleStats::from_samples(&samples),
        paths,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub strategy: StrategySpec,
    pub cash_mode: CashMode,
    pub ensemble: Ensemble,
}

/// One ensemble per `(strategy, mode)`, all sharing `base.seed`.
pub fn compare_strategies(
    base: &SimConfig,
    params: &MarketParams,
    strategies: &[StrategySpec],
    modes: &[CashMode],
) -> Result<Vec<ComparisonRow>, SimError> {
    let mut rows = Vec::with_capacity(strategies.len() * modes.len());
    for &strategy in strategies {
        for &cash_mode in modes {
            let config = SimConfig {
                strategy,
                cash_mode,
                ..*base
            };
            rows.push(ComparisonRow {
                strategy,
                cash_mode,
                ensemble: run_ensemble(&config, params)?,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairedDifference {
    pub n: usize,
    pub mean: f64,
    pub std_err: f64,
}

impl PairedDifference {
    /// Mean difference in units of its standard error.
    pub fn t_stat(&self) -> f64 {
        self.mean / self.std_err
    }
}

/// Statistics of the path-by-path difference `a - b`; both ensembles must
/// come from the same seeds.
pub fn paired_difference(a: &[PathResult], b: &[PathResult]) -> PairedDifference {
    assert_eq!(a.len(), b.len(), "paired ensembles must have equal size");
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x.avg_pnl - y.avg_pnl).collect();
    PairedDifference {
        n: diffs.len(),
        mean: stats::mean(&diffs),
        std_err: stats::std_err(&diffs),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiet() -> MarketParams {
        MarketParams {
            sigma: 0.0,
            ..MarketParams::default().with_lambda(0.0)
        }
    }

    fn short_config(strategy: StrategySpec) -> SimConfig {
        SimConfig {
            horizon: 50.0,
            n_paths: 8,
            strategy,
            ..SimConfig::default()
        }
    }

    #[test]
    fn idle_market_earns_nothing() {
        for strategy in [
            StrategySpec::Ergodic,
            StrategySpec::HalfInventory,
            StrategySpec::Discounted { beta: 1e-3 },
            StrategySpec::FiniteHorizon { horizon: 50.0, alpha: 1.0 },
        ] {
            let e = run_ensemble(&short_config(strategy), &quiet()).unwrap();
            assert_eq!(e.stats.mean, 0.0);
            assert_eq!(e.stats.std_err, 0.0);
            assert_eq!(e.stats.var95, e.stats.mean);
            assert_eq!(e.stats.es95, e.stats.mean);
        }
    }

    #[test]
    fn equal_seeds_give_identical_paths() {
        let config = SimConfig {
            series: Some(SeriesSpec { stride: 10, max_paths: 1 }),
            ..short_config(StrategySpec::Ergodic)
        };
        let p = MarketParams::default();
        let a = run_path(&config, &p, 0, 99).unwrap();
        let b = run_path(&config, &p, 0, 99).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, run_path(&config, &p, 0, 100).unwrap());
    }

    #[test]
    fn ensemble_is_scheduling_independent() {
        let config = short_config(StrategySpec::Ergodic);
        let p = MarketParams::default();
        let e = run_ensemble(&config, &p).unwrap();
        for (i, path) in e.paths.iter().enumerate() {
            let solo = run_path(&config, &p, i, path_seed(config.seed, i as u64)).unwrap();
            assert_eq!(&solo, path);
        }
    }

    #[test]
    fn pnl_identity_holds_per_path() {
        let config = short_config(StrategySpec::HalfInventory);
        let p = MarketParams { q0: 3.0, x0: 1.0, ..MarketParams::default() };
        for path in run_ensemble(&config, &p).unwrap().paths {
            let s = path.terminal;
            let expected = (s.x + s.s * s.q - p.x0 - p.s0 * p.q0 - p.phi * path.penalty_integral) / config.horizon;
            assert!((path.avg_pnl - expected).abs() < 1e-12);
            assert_eq!(s.t, config.horizon);
        }
    }

    #[test]
    fn series_is_sampled_on_stride_and_ends_at_horizon() {
        let config = SimConfig {
            series: Some(SeriesSpec { stride: 100, max_paths: 2 }),
            ..short_config(StrategySpec::Ergodic)
        };
        let e = run_ensemble(&config, &MarketParams::default()).unwrap();
        let first = &e.paths[0].series;
        assert_eq!(first.len(), 500 / 100 + 1);
        assert_eq!(first[0].t, 0.0);
        assert!((first[1].t - 10.0).abs() < 1e-9);
        let last = first.last().unwrap();
        assert_eq!(last.t, 50.0);
        assert_eq!(last.running_avg_pnl, e.paths[0].avg_pnl);
        assert!(e.paths[2].series.is_empty());
    }

    #[test]
    fn uneven_horizon_gets_a_short_last_step() {
        let config = SimConfig { horizon: 1.05, dt: 0.1, ..short_config(StrategySpec::Ergodic) };
        assert_eq!(config.n_steps(), 11);
        let path = run_path(&config, &MarketParams::default(), 0, 1).unwrap();
        assert_eq!(path.terminal.t, 1.05);
    }

    #[test]
    fn config_validation() {
        let base = SimConfig::default();
        assert!(SimConfig { dt: 0.0, ..base }.validate().is_err());
        assert!(SimConfig { horizon: 0.05, ..base }.validate().is_err());
        assert!(SimConfig { n_paths: 0, ..base }.validate().is_err());
        let bad_series = SimConfig { series: Some(SeriesSpec { stride: 0, max_paths: 1 }), ..base };
        assert!(bad_series.validate().is_err());
    }

    #[test]
    fn finite_strategy_shorter_than_simulation_is_rejected() {
        let config = short_config(StrategySpec::FiniteHorizon { horizon: 10.0, alpha: 1.0 });
        assert!(matches!(
            run_ensemble(&config, &MarketParams::default()),
            Err(SimError::Strategy(_))
        ));
    }

    #[test]
    fn path_seeds_are_distinct() {
        let seeds: std::collections::HashSet<u64> = (0..10_000).map(|i| path_seed(42, i)).collect();
        assert_eq!(seeds.len(), 10_000);
        assert_ne!(path_seed(1, 0), path_seed(2, 0));
    }

    #[test]
    fn paired_difference_of_identical_ensembles_is_zero() {
        let config = short_config(StrategySpec::Ergodic);
        let e = run_ensemble(&config, &MarketParams::default()).unwrap();
        let d = paired_difference(&e.paths, &e.paths);
        assert_eq!((d.mean, d.std_err), (0.0, 0.0));
    }

    #[test]
    fn compare_idle_market_all_zero() {
        let rows = compare_strategies(
            &short_config(StrategySpec::Ergodic),
            &quiet(),
            &[StrategySpec::Ergodic],
            &CashMode::ALL,
        )
        .unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.ensemble.stats.mean == 0.0));
    }
}
