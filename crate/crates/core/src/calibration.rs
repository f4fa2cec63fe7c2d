//! Estimating the market parameters from exchange data.
//!
//! * intensity and mean size from a liquidation log,
//! * temporary impact `k` by walking order-book snapshots for a grid of trade
//!   sizes and regressing the per-unit price concession on size,
//! * permanent impact `b` by regressing midprice changes on net order flow
//!   through the origin.
//!
//! `sigma` and `phi` are not estimated here: the first is a standard
//! realised-volatility exercise, the second is a risk preference.

use serde::{Deserialize, Serialize};

use crate::error::CalibrationError;
use crate::stats::{self, LinearFit};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiquidationRecord {
    /// Seconds since the start of the observation window.
    pub time: f64,
    /// Absolute size of the distressed position.
    pub size: f64,
}

/// What the event count is divided by when estimating the intensity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LambdaDivisor {
    /// `N / tau_N`, the time of the last liquidation.
    LastEvent,
    /// `N / T` for an observation window of length `T`.
    Window(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntensityEstimate {
    pub lambda: f64,
    pub eta: f64,
    pub n: usize,
    /// The divisor actually used.
    pub elapsed: f64,
}

pub fn estimate_lambda_eta(
    records: &[LiquidationRecord],
    divisor: LambdaDivisor,
) -> Result<IntensityEstimate, CalibrationError> {
    let last = records.last().ok_or(CalibrationError::EmptyLog)?;
    let mut prev = f64::NEG_INFINITY;
    for (index, rec) in records.iter().enumerate() {
        if !rec.time.is_finite() || rec.time < 0.0 {
            return Err(CalibrationError::BadRecord { index, reason: format!("time {} is not a non-negative number", rec.time) });
        }
        if rec.time < prev {
            return Err(CalibrationError::BadRecord { index, reason: format!("time {} precedes {prev}", rec.time) });
        }
        if !(rec.size > 0.0) || !rec.size.is_finite() {
            return Err(CalibrationError::BadRecord { index, reason: format!("size {} must be positive", rec.size) });
        }
        prev = rec.time;
    }
    let elapsed = match divisor {
        LambdaDivisor::LastEvent => last.time,
        LambdaDivisor::Window(t) => t,
    };
    if !(elapsed > 0.0) {
        return Err(CalibrationError::ZeroElapsed(elapsed));
    }
    let n = records.len();
    Ok(IntensityEstimate {
        lambda: n as f64 / elapsed,
        eta: records.iter().map(|r| r.size).sum::<f64>() / n as f64,
        n,
        elapsed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BookSide {
    Bid,
    Ask,
}

impl BookSide {
    pub fn as_str(self) -> &'static str {
        match self {
            BookSide::Bid => "bid",
            BookSide::Ask => "ask",
        }
    }
}

impl std::str::FromStr for BookSide {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bid" | "buy" => Ok(BookSide::Bid),
            "ask" | "sell" => Ok(BookSide::Ask),
            other => Err(format!("unknown book side `{other}` (expected bid or ask)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BookLevel {
    pub price: f64,
    pub volume: f64,
}

/// One side of the book at one instant, best level first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BookSnapshot {
    pub time: f64,
    pub side: BookSide,
    pub mid: f64,
    levels: Vec<BookLevel>,
}

impl BookSnapshot {
    /// Checks that prices move strictly away from the mid (ascending asks,
    /// descending bids), volumes are positive and the best level does not
    /// cross the mid.
    pub fn new(time: f64, side: BookSide, mid: f64, levels: Vec<BookLevel>) -> Result<Self, CalibrationError> {
        let bad = |reason: String| CalibrationError::BadSnapshot { time, reason };
        if levels.is_empty() {
            return Err(bad("no levels".into()));
        }
        if !mid.is_finite() {
            return Err(bad(format!("mid {mid} is not finite")));
        }
        for level in &levels {
            if !(level.volume > 0.0) || !level.volume.is_finite() || !level.price.is_finite() {
                return Err(bad(format!("level ({}, {}) needs a finite price and positive volume", level.price, level.volume)));
            }
        }
        let away = |a: f64, b: f64| match side {
            BookSide::Ask => b > a,
            BookSide::Bid => b < a,
        };
        if let Some(w) = levels.windows(2).find(|w| !away(w[0].price, w[1].price)) {
            return Err(bad(format!("prices {} then {} are not strictly monotone", w[0].price, w[1].price)));
        }
        let best = levels[0].price;
        let crossed = match side {
            BookSide::Ask => best < mid,
            BookSide::Bid => best > mid,
        };
        if crossed {
            return Err(bad(format!("best {} price {best} crosses mid {mid}", side.as_str())));
        }
        Ok(Self { time, side, mid, levels })
    }

    pub fn levels(&self) -> &[BookLevel] {
        &self.levels
    }

    pub fn depth(&self) -> f64 {
        self.levels.iter().map(|l| l.volume).sum()
    }
}

/// Volume-weighted price per unit of a market order of `trade_size`
/// consuming levels best-first.
pub fn walk_book(snapshot: &BookSnapshot, trade_size: f64) -> Result<f64, CalibrationError> {
    if !(trade_size > 0.0) || !trade_size.is_finite() {
        return Err(CalibrationError::NonPositiveTradeSize(trade_size));
    }
    let available = snapshot.depth();
    if available < trade_size {
        return Err(CalibrationError::InsufficientDepth { available, requested: trade_size });
    }
    let mut remaining = trade_size;
    let mut cost = 0.0;
    for level in &snapshot.levels {
        let take = level.volume.min(remaining);
        cost += level.price * take;
        remaining -= take;
        if remaining <= 0.0 {
            break;
        }
    }
    Ok(cost / trade_size)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotFit {
    pub time: f64,
    pub side: BookSide,
    pub fit: LinearFit,
    /// Trade sizes that exceeded the snapshot's depth.
    pub sizes_skipped: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkippedSnapshot {
    pub time: f64,
    pub side: BookSide,
    pub usable_sizes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KEstimate {
    /// Mean of the per-snapshot slopes.
    pub k: f64,
    pub fits: Vec<SnapshotFit>,
    pub skipped: Vec<SkippedSnapshot>,
}

impl KEstimate {
    pub fn slopes(&self) -> Vec<f64> {
        self.fits.iter().map(|f| f.fit.slope).collect()
    }

    pub fn mean_r_squared(&self) -> f64 {
        stats::mean(&self.fits.iter().map(|f| f.fit.r_squared).collect::<Vec<_>>())
    }

    pub fn mean_residual_std(&self) -> f64 {
        stats::mean(&self.fits.iter().map(|f| f.fit.residual_std).collect::<Vec<_>>())
    }
}

/// The trade-size grid 1, 2, ..., 100.
pub fn default_trade_sizes() -> Vec<f64> {
    (1..=100).map(f64::from).collect()
}

/// Temporary impact from book snapshots.
///
/// For each snapshot the sizes deeper than the book are dropped; with at
/// least two sizes left, `|walk_book(Q) - mid|` is regressed on `Q` (with an
/// intercept absorbing the half-spread when `with_intercept`). The estimate
/// is the mean slope over the snapshots that could be fitted.
pub fn estimate_k(
    snapshots: &[BookSnapshot],
    trade_sizes: &[f64],
    with_intercept: bool,
) -> Result<KEstimate, CalibrationError> {
    if let Some(&bad) = trade_sizes.iter().find(|&&q| !(q > 0.0) || !q.is_finite()) {
        return Err(CalibrationError::NonPositiveTradeSize(bad));
    }
    let mut fits = Vec::new();
    let mut skipped = Vec::new();
    for snap in snapshots {
        let depth = snap.depth();
        let usable: Vec<f64> = trade_sizes.iter().copied().filter(|&q| q <= depth).collect();
        let deviations: Vec<f64> = usable
            .iter()
            .map(|&q| walk_book(snap, q).map(|p| (p - snap.mid).abs()))
            .collect::<Result<_, _>>()?;
        match stats::ols(&usable, &deviations, with_intercept) {
            Some(fit) if usable.len() >= 2 => fits.push(SnapshotFit {
                time: snap.time,
                side: snap.side,
                fit,
                sizes_skipped: trade_sizes.len() - usable.len(),
            }),
            _ => skipped.push(SkippedSnapshot { time: snap.time, side: snap.side, usable_sizes: usable.len() }),
        }
    }
    if fits.is_empty() {
        return Err(CalibrationError::NoUsableSnapshots { skipped: skipped.len() });
    }
    let k = stats::mean(&fits.iter().map(|f| f.fit.slope).collect::<Vec<_>>());
    Ok(KEstimate { k, fits, skipped })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowInterval {
    /// Signed executed volume in the bucket, positive for net buying.
    pub net_flow: f64,
    /// Midprice change over the bucket.
    pub delta_mid: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BEstimate {
    pub b: f64,
    pub fit: LinearFit,
}

/// Permanent impact: `b = sum(mu dS) / sum(mu^2)`, no intercept.
pub fn estimate_b(intervals: &[FlowInterval]) -> Result<BEstimate, CalibrationError> {
    let flow: Vec<f64> = intervals.iter().map(|i| i.net_flow).collect();
    let moves: Vec<f64> = intervals.iter().map(|i| i.delta_mid).collect();
    let fit = stats::ols(&flow, &moves, false).ok_or(CalibrationError::NoFlow)?;
    Ok(BEstimate { b: fit.slope, fit })
}
