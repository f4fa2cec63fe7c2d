//! Controlled market dynamics.
//!
//! Midprice `S` drifts with permanent impact `b * nu` and diffuses with
//! volatility `sigma`; inventory `Q` is sold at rate `nu` and jumps when a
//! distressed position is handed over; cash `X` collects the execution
//! proceeds `(S - k * nu) * nu` plus the confiscated margin `r * size * S_ref`
//! on every liquidation, where `S_ref` is the pre-jump midprice
//! ([`CashMode::Full`]) or the initial midprice ([`CashMode::Simplified`]).

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::params::MarketParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// A distressed long position: the exchange's inventory goes up.
    Long,
    /// A distressed short position: the exchange's inventory goes down.
    Short,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Long => 1.0,
            Side::Short => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpEvent {
    pub time: f64,
    pub side: Side,
    /// Absolute size in contracts, always > 0.
    pub size: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CashMode {
    /// Margin inflow marked at the pre-jump midprice.
    Full,
    /// Margin inflow marked at the initial midprice.
    Simplified,
}

impl CashMode {
    pub const ALL: [CashMode; 2] = [CashMode::Full, CashMode::Simplified];

    pub fn as_str(self) -> &'static str {
        match self {
            CashMode::Full => "full",
            CashMode::Simplified => "simplified",
        }
    }
}

impl fmt::Display for CashMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CashMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "full" => Ok(CashMode::Full),
            "simplified" => Ok(CashMode::Simplified),
            other => Err(format!(
                "unknown cash mode `{other}` (expected full or simplified)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketState {
    pub t: f64,
    pub s: f64,
    pub q: f64,
    pub x: f64,
}

impl MarketState {
    pub fn initial(params: &MarketParams) -> Self {
        Self {
            t: 0.0,
            s: params.s0,
            q: params.q0,
            x: params.x0,
        }
    }

    /// Cash plus inventory marked at the midprice.
    pub fn wealth(&self) -> f64 {
        self.x + self.s * self.q
    }
}

/// Draws a distressed size from N(mean, std), redrawing non-positive values.
pub fn draw_size<R: Rng + ?Sized>(mean: f64, std: f64, rng: &mut R) -> f64 {
    if std == 0.0 {
        return mean;
    }
    loop {
        let z: f64 = StandardNormal.sample(rng);
        let size = mean + std * z;
        if size > 0.0 {
            return size;
        }
    }
}

fn sample_side<R: Rng + ?Sized>(
    side: Side,
    intensity: f64,
    params: &MarketParams,
    horizon: f64,
    rng: &mut R,
    out: &mut Vec<JumpEvent>,
) {
    if intensity <= 0.0 {
        return;
    }
    let gap = Exp::new(intensity).expect("positive intensity");
    let mut time = 0.0;
    loop {
        time += gap.sample(rng);
        if time > horizon {
            break;
        }
        let size = draw_size(params.eta_mean, params.eta_std, rng);
        out.push(JumpEvent { time, side, size });
    }
}

/// Liquidation events on `(0, horizon]`, time-sorted.
///
/// Each side is an independent Poisson process with exponential gaps. The
/// long side is drawn first, then the short side, from the same stream. A
/// non-positive horizon yields no events.
pub fn sample_jumps<R: Rng + ?Sized>(
    params: &MarketParams,
    horizon: f64,
    rng: &mut R,
) -> Vec<JumpEvent> {
    let mut events = Vec::new();
    if !(horizon > 0.0) {
        return events;
    }
    sample_side(Side::Long, params.lambda_plus, params, horizon, rng, &mut events);
    sample_side(Side::Short, params.lambda_minus, params, horizon, rng, &mut events);
    events.sort_by(|a, b| a.time.total_cmp(&b.time));
    events
}

/// Price received per unit when selling at rate `nu` (buying when `nu < 0`).
pub fn execution_price(s: f64, nu: f64, k: f64) -> f64 {
    s - k * nu
}

/// One Euler–Maruyama step of length `dt`.
///
/// Order of application: the midprice takes its drift and diffusion, then
/// the jumps in `(t, t + dt]` land (in `Full` mode their margin inflow is
/// marked at the updated midprice), then the control moves inventory and
/// cash at the step's left-point midprice.
pub fn step(
    state: &MarketState,
    nu: f64,
    dt: f64,
    dw: f64,
    jumps: &[JumpEvent],
    params: &MarketParams,
    mode: CashMode,
) -> Result<MarketState, SimError> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(SimError::NonPositiveStep(dt));
    }
    let s_next = state.s - params.b * nu * dt + params.sigma * dw;

    let mut q = state.q;
    let mut x = state.x;
    let mark = match mode {
        CashMode::Full => s_next,
        CashMode::Simplified => params.s0,
    };
    for jump in jumps {
        q += jump.side.sign() * jump.size;
        x += params.r * jump.size * mark;
    }

    q -= nu * dt;
    x += execution_price(state.s, nu, params.k) * nu * dt;

    Ok(MarketState {
        t: state.t + dt,
        s: s_next,
        q,
        x,
    })
}
