use liquidation_core::{
    ergodic_gamma, paired_difference, run_ensemble, run_path, sweep_gamma, AxisGrid, CashMode,
    MarketParams, SimConfig, StrategySpec, SweepAxis, SweepMode,
};
use liquidation_core::engine::SeriesSpec;
use liquidation_core::{path_seed, sample_jumps};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn deterministic() -> MarketParams {
    MarketParams {
        sigma: 0.0,
        q0: 10.0,
        ..MarketParams::default().with_lambda(0.0)
    }
}

// Exact continuous-time average PnL of the ergodic feedback from q0 = 10 with
// no noise over T = 1000, by quadrature at 30 digits.
const NOISELESS_AVG_PNL: f64 = -3.212_277_660_168_379_3e-5;
const NOISELESS_PENALTY: f64 = 158.113_883_008_418_97;

#[test]
fn noiseless_path_matches_the_continuous_oracle() {
    let params = deterministic();
    for (dt, tol) in [(1e-3, 2e-4), (0.1, 2e-2)] {
        let config = SimConfig { dt, horizon: 1000.0, n_paths: 1, ..SimConfig::default() };
        let path = run_path(&config, &params, 0, 7).unwrap();
        let rel = |a: f64, b: f64| ((a - b) / b).abs();
        assert!(rel(path.avg_pnl, NOISELESS_AVG_PNL) < tol, "dt={dt}: {}", path.avg_pnl);
        assert!(rel(path.penalty_integral, NOISELESS_PENALTY) < tol, "dt={dt}: {}", path.penalty_integral);
        let q_exact = 10.0 * (-params.liquidation_speed() * 1000.0f64).exp();
        assert!(path.terminal.q.abs() < 1e-6 && q_exact < 1e-6);
    }
}

#[test]
fn finer_grids_converge_at_first_order() {
    let params = deterministic();
    let err = |dt: f64| {
        let config = SimConfig { dt, horizon: 1000.0, n_paths: 1, ..SimConfig::default() };
        (run_path(&config, &params, 0, 0).unwrap().avg_pnl - NOISELESS_AVG_PNL).abs()
    };
    let ratio = err(0.02) / err(0.01);
    assert!((ratio - 2.0).abs() < 0.1, "ratio {ratio}");
}

#[test]
fn time_average_of_the_running_reward_tracks_the_pnl() {
    let config = SimConfig { horizon: 2000.0, n_paths: 200, seed: 11, ..SimConfig::default() };
    let ens = run_ensemble(&config, &MarketParams::default()).unwrap();
    let diffs: Vec<f64> = ens.paths.iter().map(|p| p.avg_pnl - p.avg_reward).collect();
    let m = diffs.iter().sum::<f64>() / diffs.len() as f64;
    let var = diffs.iter().map(|d| (d - m).powi(2)).sum::<f64>() / (diffs.len() - 1) as f64;
    let se = (var / diffs.len() as f64).sqrt();
    assert!(m.abs() < 3.0 * se, "mean difference {m} vs se {se}");
    let gamma = ergodic_gamma(&MarketParams::default()).unwrap();
    let reward = ens.avg_rewards().iter().sum::<f64>() / diffs.len() as f64;
    assert!((reward - gamma).abs() < 0.01, "reward {reward} vs gamma {gamma}");
}

#[test]
fn cash_modes_coincide_when_the_mid_cannot_move() {
    let params = MarketParams { sigma: 0.0, b: 0.0, ..MarketParams::default() };
    for strategy in [StrategySpec::Ergodic, StrategySpec::HalfInventory] {
        let config = SimConfig { horizon: 500.0, n_paths: 6, strategy, ..SimConfig::default() };
        let full = run_ensemble(&SimConfig { cash_mode: CashMode::Full, ..config }, &params).unwrap();
        let simple = run_ensemble(&SimConfig { cash_mode: CashMode::Simplified, ..config }, &params).unwrap();
        for (a, b) in full.paths.iter().zip(&simple.paths) {
            assert_eq!(a.terminal, b.terminal);
        }
    }
}

#[test]
fn every_liquidation_is_booked_in_inventory_and_cash() {
    // With a frozen mid the wealth change splits into jump transfers
    // (inventory marked at S0 plus margin) and the execution slippage, which
    // the running reward accounts for.
    let params = MarketParams { sigma: 0.0, b: 0.0, ..MarketParams::default() };
    let config = SimConfig { horizon: 3000.0, n_paths: 1, ..SimConfig::default() };
    let seed = path_seed(config.seed, 0);
    let path = run_path(&config, &params, 0, seed).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);
    let jumps = sample_jumps(&params, config.horizon, &mut rng);
    assert!(jumps.len() > 200);
    let transfers: f64 = jumps.iter().map(|j| j.size * (params.r + j.side.sign()) * params.s0).sum();

    let t = config.horizon;
    let margin = 2.0 * params.lambda_plus * params.eta_mean * params.r * params.s0;
    let slippage = margin * t - params.phi * path.penalty_integral - path.avg_reward * t;
    let gain = path.terminal.wealth() - params.x0 - params.s0 * params.q0;
    assert!((gain - (transfers - slippage)).abs() < 1e-8 * transfers.abs(), "{gain} vs {}", transfers - slippage);
}

#[test]
fn faster_disposal_shrinks_one_sided_inventory_pathwise() {
    let base = MarketParams { lambda_minus: 0.0, ..MarketParams::default() };
    let series = Some(SeriesSpec { stride: 1, max_paths: 4 });
    let config = SimConfig { horizon: 400.0, n_paths: 4, series, ..SimConfig::default() };
    let slow = run_ensemble(&config, &base).unwrap();
    let fast = run_ensemble(&config, &MarketParams { phi: 4e-4, ..base }).unwrap();
    for (a, b) in slow.paths.iter().zip(&fast.paths) {
        assert_eq!(a.series.len(), b.series.len());
        for (p, q) in a.series.iter().zip(&b.series) {
            assert!(q.q <= p.q + 1e-12, "t={}: {} > {}", p.t, q.q, p.q);
        }
    }
}

#[test]
fn ensembles_are_reproducible() {
    let config = SimConfig { horizon: 200.0, n_paths: 16, cash_mode: CashMode::Full, ..SimConfig::default() };
    let a = run_ensemble(&config, &MarketParams::default()).unwrap();
    let b = run_ensemble(&config, &MarketParams::default()).unwrap();
    assert_eq!(a, b);
    let other = run_ensemble(&SimConfig { seed: 43, ..config }, &MarketParams::default()).unwrap();
    assert_ne!(a.stats.mean, other.stats.mean);
}

#[test]
fn ergodic_beats_halving_on_shared_seeds() {
    let config = SimConfig { horizon: 1000.0, n_paths: 100, ..SimConfig::default() };
    let params = MarketParams::default();
    let erg = run_ensemble(&config, &params).unwrap();
    let half = run_ensemble(&SimConfig { strategy: StrategySpec::HalfInventory, ..config }, &params).unwrap();
    let d = paired_difference(&erg.paths, &half.paths);
    assert!(d.t_stat() > 3.0, "{d:?}");
}

#[test]
fn monte_carlo_sweep_brackets_the_closed_form() {
    let params = MarketParams::default();
    let grid = [AxisGrid::linspace(SweepAxis::R, 0.02, 0.08, 4)];
    let config = SimConfig { n_paths: 300, ..SimConfig::default() };
    let mc = sweep_gamma(&grid, &params, &SweepMode::MonteCarlo(config)).unwrap();
    let cf = sweep_gamma(&grid, &params, &SweepMode::ClosedForm).unwrap();
    for (m, c) in mc.iter().zip(&cf) {
        let stats = m.stats.unwrap();
        assert!(
            stats.ci95_low <= c.value && c.value <= stats.ci95_high,
            "r={:?}: gamma {} outside [{}, {}]",
            m.coords,
            c.value,
            stats.ci95_low,
            stats.ci95_high
        );
    }
}
