//! WebAssembly bindings for the single-page demo in `www/`.
//!
//! The page can draw a gamma surface over two parameters, simulate one
//! controlled path, and plot the finite-horizon trading rate against the
//! ergodic and discounted ones. Arrays cross the boundary as `Float64Array`.

pub mod demo;

use liquidation_core::{MarketParams, SweepAxis};
use wasm_bindgen::prelude::*;

/// Market parameters in the symmetric model, editable from JavaScript.
#[wasm_bindgen]
#[derive(Debug, Clone, Copy)]
pub struct Market {
    pub lambda: f64,
    pub eta: f64,
    pub eta_std: f64,
    pub sigma: f64,
    pub b: f64,
    pub k: f64,
    pub phi: f64,
    pub r: f64,
    pub s0: f64,
    pub q0: f64,
}

impl Default for Market {
    fn default() -> Self {
        let p = MarketParams::default();
        Self {
            lambda: p.lambda_plus,
            eta: p.eta_mean,
            eta_std: p.eta_std,
            sigma: p.sigma,
            b: p.b,
            k: p.k,
            phi: p.phi,
            r: p.r,
            s0: p.s0,
            q0: p.q0,
        }
    }
}

#[wasm_bindgen]
impl Market {
    /// The reference market.
    #[wasm_bindgen(constructor)]
    pub fn new() -> Market {
        Market::default()
    }
}

impl From<Market> for MarketParams {
    fn from(m: Market) -> Self {
        MarketParams {
            eta_mean: m.eta,
            eta_std: m.eta_std,
            sigma: m.sigma,
            b: m.b,
            k: m.k,
            phi: m.phi,
            r: m.r,
            s0: m.s0,
            q0: m.q0,
            ..MarketParams::default().with_lambda(m.lambda)
        }
    }
}

fn axis(name: &str) -> Result<SweepAxis, JsError> {
    name.parse().map_err(|e: String| JsError::new(&e))
}

/// Closed-form gamma on an `nx * ny` grid, row-major (`y` fastest).
#[wasm_bindgen(js_name = gammaSurface)]
#[allow(clippy::too_many_arguments)]
pub fn gamma_surface(
    market: &Market,
    x_axis: &str,
    x_lo: f64,
    x_hi: f64,
    nx: usize,
    y_axis: &str,
    y_lo: f64,
    y_hi: f64,
    ny: usize,
) -> Result<Vec<f64>, JsError> {
    demo::gamma_surface(&(*market).into(), (axis(x_axis)?, x_lo, x_hi, nx), (axis(y_axis)?, y_lo, y_hi, ny))
        .map_err(|e| JsError::new(&e))
}

/// One simulated path, flattened as `[t, S, Q, X, running_avg_pnl]` per sample.
#[wasm_bindgen(js_name = simulatePath)]
#[allow(clippy::too_many_arguments)]
pub fn simulate_path(
    market: &Market,
    strategy: &str,
    cash_mode: &str,
    horizon: f64,
    dt: f64,
    seed: u64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    let tr = demo::simulate_path(&(*market).into(), strategy, cash_mode, horizon, dt, seed, points)
        .map_err(|e| JsError::new(&e))?;
    let mut flat = Vec::with_capacity(tr.t.len() * 5);
    for i in 0..tr.t.len() {
        flat.extend([tr.t[i], tr.s[i], tr.q[i], tr.x[i], tr.running_avg_pnl[i]]);
    }
    Ok(flat)
}

/// `[ergodic, discounted, t_0, finite_0, t_1, finite_1, ...]` rate coefficients.
#[wasm_bindgen(js_name = controlCurves)]
pub fn control_curves(market: &Market, horizon: f64, alpha: f64, beta: f64, points: usize) -> Result<Vec<f64>, JsError> {
    let c = demo::control_curves(&(*market).into(), horizon, alpha, beta, points).map_err(|e| JsError::new(&e))?;
    let mut flat = vec![c.ergodic, c.discounted];
    for (t, f) in c.t.iter().zip(&c.finite) {
        flat.extend([*t, *f]);
    }
    Ok(flat)
}

/// Closed-form gamma of `market`.
#[wasm_bindgen(js_name = ergodicGamma)]
pub fn ergodic_gamma(market: &Market) -> Result<f64, JsError> {
    liquidation_core::ergodic_gamma(&(*market).into()).map_err(|e| JsError::new(&e.to_string()))
}
