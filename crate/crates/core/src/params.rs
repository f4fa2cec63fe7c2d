//! Model constants.
//!
//! Units follow the exchange's point of view: time in seconds, inventory in
//! contracts (signed, positive = long), prices and cash in quote currency.

use serde::{Deserialize, Serialize};

use crate::error::ParamError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketParams {
    /// Arrival rate of long positions handed to the exchange, events/s.
    pub lambda_plus: f64,
    /// Arrival rate of short positions handed to the exchange, events/s.
    pub lambda_minus: f64,
    /// Mean absolute size of a distressed position, contracts.
    pub eta_mean: f64,
    /// Standard deviation of the (Gaussian) distressed size.
    pub eta_std: f64,
    /// Midprice volatility, currency / sqrt(s).
    pub sigma: f64,
    /// Permanent impact slope: midprice drift per unit trading rate.
    pub b: f64,
    /// Temporary impact slope: execution concession per unit trading rate.
    pub k: f64,
    /// Running inventory penalty weight (risk aversion).
    pub phi: f64,
    /// Margin fraction (inverse leverage) collected on each liquidation. For
    /// lending protocols this slot can carry the liquidation bonus instead.
    pub r: f64,
    pub s0: f64,
    pub q0: f64,
    pub x0: f64,
}

impl Default for MarketParams {
    /// Reference market: lambda = 0.05/s, sizes ~ N(10, 0.5), sigma = 0.5,
    /// b = 1e-5, k = 1e-3, phi = 1e-4, S0 = 10, flat start, r = 0.05.
    fn default() -> Self {
        Self {
            lambda_plus: 0.05,
            lambda_minus: 0.05,
            eta_mean: 10.0,
            eta_std: 0.5,
            sigma: 0.5,
            b: 1e-5,
            k: 1e-3,
            phi: 1e-4,
            r: 0.05,
            s0: 10.0,
            q0: 0.0,
            x0: 0.0,
        }
    }
}

fn check(
    field: &'static str,
    value: f64,
    requirement: &'static str,
    ok: impl Fn(f64) -> bool,
) -> Result<(), ParamError> {
    if value.is_finite() && ok(value) {
        Ok(())
    } else {
        Err(ParamError::Invalid {
            field,
            requirement,
            value,
        })
    }
}

impl MarketParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        check("lambda_plus", self.lambda_plus, ">= 0", |v| v >= 0.0)?;
        check("lambda_minus", self.lambda_minus, ">= 0", |v| v >= 0.0)?;
        check("eta_mean", self.eta_mean, "> 0", |v| v > 0.0)?;
        check("eta_std", self.eta_std, ">= 0", |v| v >= 0.0)?;
        check("sigma", self.sigma, ">= 0", |v| v >= 0.0)?;
        check("b", self.b, ">= 0", |v| v >= 0.0)?;
        check("k", self.k, "> 0", |v| v > 0.0)?;
        check("phi", self.phi, "> 0", |v| v > 0.0)?;
        check("r", self.r, "in [0, 1]", |v| (0.0..=1.0).contains(&v))?;
        check("s0", self.s0, "> 0", |v| v > 0.0)?;
        check("q0", self.q0, "finite", |_| true)?;
        check("x0", self.x0, "finite", |_| true)?;
        Ok(())
    }

    /// The common intensity of the symmetric model; the closed forms are only
    /// derived for `lambda_plus == lambda_minus`.
    pub fn symmetric_lambda(&self) -> Result<f64, ParamError> {
        if self.lambda_plus == self.lambda_minus {
            Ok(self.lambda_plus)
        } else {
            Err(ParamError::Asymmetric {
                plus: self.lambda_plus,
                minus: self.lambda_minus,
            })
        }
    }

    /// Sets both intensities.
    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda_plus = lambda;
        self.lambda_minus = lambda;
        self
    }

    /// sqrt(phi / k): the ergodic liquidation speed, 1/s.
    pub fn liquidation_speed(&self) -> f64 {
        (self.phi / self.k).sqrt()
    }

    /// sqrt(k * phi), the recurring scale of the closed forms.
    pub(crate) fn sqrt_k_phi(&self) -> f64 {
        (self.k * self.phi).sqrt()
    }
}
