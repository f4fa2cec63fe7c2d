//! Plain-Rust computations behind the page, testable off the browser.

use liquidation_core::engine::SeriesSpec;
use liquidation_core::{
    discounted_coeffs, ergodic_rate, run_path, sweep_gamma, AxisGrid, CashMode, FiniteHorizonCoeffs,
    MarketParams, SimConfig, StrategySpec, SweepAxis, SweepMode,
};

/// Gamma on an `nx` by `ny` grid, row-major with `y` varying fastest.
pub fn gamma_surface(
    params: &MarketParams,
    x: (SweepAxis, f64, f64, usize),
    y: (SweepAxis, f64, f64, usize),
) -> Result<Vec<f64>, String> {
    let grid = [AxisGrid::linspace(x.0, x.1, x.2, x.3), AxisGrid::linspace(y.0, y.1, y.2, y.3)];
    let rows = sweep_gamma(&grid, params, &SweepMode::ClosedForm).map_err(|e| e.to_string())?;
    Ok(rows.into_iter().map(|r| r.value).collect())
}

/// Sampled trajectory of one seeded path.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub s: Vec<f64>,
    pub q: Vec<f64>,
    pub x: Vec<f64>,
    pub running_avg_pnl: Vec<f64>,
    pub avg_pnl: f64,
}

/// Simulates one path and keeps about `points` samples of it.
pub fn simulate_path(
    params: &MarketParams,
    strategy: &str,
    cash_mode: &str,
    horizon: f64,
    dt: f64,
    seed: u64,
    points: usize,
) -> Result<Trajectory, String> {
    let strategy: StrategySpec = strategy.parse().map_err(|e: liquidation_core::StrategyError| e.to_string())?;
    let cash_mode: CashMode = cash_mode.parse()?;
    let config = SimConfig { dt, horizon, n_paths: 1, seed, cash_mode, strategy, series: None };
    let stride = (config.n_steps() / points.max(1)).max(1);
    let config = SimConfig { series: Some(SeriesSpec { stride, max_paths: 1 }), ..config };
    let path = run_path(&config, params, 0, seed).map_err(|e| e.to_string())?;
    let mut out = Trajectory { avg_pnl: path.avg_pnl, ..Trajectory::default() };
    for p in path.series {
        out.t.push(p.t);
        out.s.push(p.s);
        out.q.push(p.q);
        out.x.push(p.x);
        out.running_avg_pnl.push(p.running_avg_pnl);
    }
    Ok(out)
}

/// Trading-rate coefficients `nu / q` over `[0, horizon]` for the
/// finite-horizon control, next to the flat ergodic and discounted ones.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlCurves {
    pub t: Vec<f64>,
    pub finite: Vec<f64>,
    pub ergodic: f64,
    pub discounted: f64,
}

pub fn control_curves(
    params: &MarketParams,
    horizon: f64,
    alpha: f64,
    beta: f64,
    points: usize,
) -> Result<ControlCurves, String> {
    let finite = FiniteHorizonCoeffs::new(horizon, alpha, params).map_err(|e| e.to_string())?;
    let discounted = discounted_coeffs(beta, params).map_err(|e| e.to_string())?;
    let n = points.max(2);
    let t: Vec<f64> = (0..n).map(|i| horizon * i as f64 / (n - 1) as f64).collect();
    let finite = t
        .iter()
        .map(|&s| finite.rate(s, 1.0))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    Ok(ControlCurves {
        t,
        finite,
        ergodic: ergodic_rate(1.0, params),
        discounted: discounted.rate_coeff,
    })
}
