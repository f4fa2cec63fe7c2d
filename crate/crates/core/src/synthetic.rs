//! Synthetic data sets with known parameters, for calibration round-trips.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::calibration::{BookLevel, BookSide, BookSnapshot, FlowInterval, LiquidationRecord};
use crate::error::{CalibrationError, SimError};
use crate::market::{sample_jumps, step, CashMode, MarketState};
use crate::params::MarketParams;

/// One side's liquidation log on `(0, horizon]`: Poisson times at rate
/// `lambda_plus`, sizes drawn as in the simulator.
pub fn liquidation_log(params: &MarketParams, horizon: f64, seed: u64) -> Vec<LiquidationRecord> {
    let one_side = MarketParams { lambda_minus: 0.0, ..*params };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_jumps(&one_side, horizon, &mut rng)
        .into_iter()
        .map(|e| LiquidationRecord { time: e.time, size: e.size })
        .collect()
}

/// A book whose marginal price grows by `2k` per unit of cumulative volume,
/// so that walking it to any level boundary `Q` costs exactly
/// `half_spread + k Q` per unit away from `mid`. Each level is priced at the
/// marginal price of its volume midpoint.
pub fn linear_book(
    time: f64,
    side: BookSide,
    mid: f64,
    half_spread: f64,
    k: f64,
    volumes: &[f64],
) -> Result<BookSnapshot, CalibrationError> {
    let sign = match side {
        BookSide::Ask => 1.0,
        BookSide::Bid => -1.0,
    };
    let mut depth = 0.0;
    let levels = volumes
        .iter()
        .map(|&volume| {
            let price = mid + sign * (half_spread + k * (2.0 * depth + volume));
            depth += volume;
            BookLevel { price, volume }
        })
        .collect();
    BookSnapshot::new(time, side, mid, levels)
}

/// Level volumes drawn uniformly from `[1 - spread, 1 + spread]` until
/// `depth` is covered.
pub fn noisy_volumes(depth: f64, spread: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut total = 0.0;
    while total < depth {
        let v = 1.0 + spread * (2.0 * rng.random::<f64>() - 1.0);
        total += v;
        out.push(v);
    }
    out
}

/// Order-flow buckets generated by the market model without liquidations.
///
/// In each bucket of length `interval` a trader executes at a constant rate
/// drawn from `N(0, flow_std^2)` per second; the bucket's net buying flow is
/// minus the executed selling and the midprice change comes from one Euler
/// step of the midprice.
pub fn flow_intervals(
    params: &MarketParams,
    n: usize,
    interval: f64,
    flow_std: f64,
    seed: u64,
) -> Result<Vec<FlowInterval>, SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = MarketState::initial(params);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let z: f64 = StandardNormal.sample(&mut rng);
        let nu = flow_std * z;
        let z: f64 = StandardNormal.sample(&mut rng);
        let next = step(&state, nu, interval, interval.sqrt() * z, &[], params, CashMode::Simplified)?;
        out.push(FlowInterval { net_flow: -nu * interval, delta_mid: next.s - state.s });
        state = next;
    }
    Ok(out)
}
