//! Closed-form value functions and feedback controls.
//!
//! All three control problems share the quadratic ansatz
//! `u(q) = h0 + h2 * q^2` (the linear coefficient vanishes identically), and
//! the optimal rate is the maximiser `nu* = -(b q + du/dq) / (2k)`, which is
//! always proportional to `q` with a positive coefficient: every optimal
//! strategy sells long inventory and buys back short inventory.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ParamError, StrategyError};
use crate::params::MarketParams;

/// Running reward `F(q, nu) = -k nu^2 - b nu q - phi q^2 + (lambda+ + lambda-) eta r S0`.
pub fn running_reward(q: f64, nu: f64, params: &MarketParams) -> f64 {
    let margin = (params.lambda_plus + params.lambda_minus) * params.eta_mean * params.r * params.s0;
    -params.k * nu * nu - params.b * nu * q - params.phi * q * q + margin
}

/// Ergodic optimal rate `sqrt(phi / k) * q`.
pub fn ergodic_rate(q: f64, params: &MarketParams) -> f64 {
    params.liquidation_speed() * q
}

/// Optimal long-run reward per unit time,
/// `2 r lambda eta S0 - lambda eta^2 b - 2 lambda eta^2 sqrt(k phi)`.
///
/// Independent of `sigma` and of the initial state.
pub fn ergodic_gamma(params: &MarketParams) -> Result<f64, ParamError> {
    params.validate()?;
    let lambda = params.symmetric_lambda()?;
    let eta = params.eta_mean;
    Ok(2.0 * params.r * lambda * eta * params.s0
        - lambda * eta * eta * params.b
        - 2.0 * lambda * eta * eta * params.sqrt_k_phi())
}

/// Sell (buy back) half of the open position over one period of length `dt`.
pub fn half_inventory_action(q: f64, dt: f64) -> f64 {
    debug_assert!(dt > 0.0);
    q / (2.0 * dt)
}

/// Coefficients of the finite-horizon problem with terminal penalty
/// `-alpha * q^2`.
///
/// Internally everything is written in terms of `A = alpha - b/2`,
/// `c = sqrt(k phi)` and `m(tau) = 1 - exp(-2 speed tau)` so that neither
/// `exp(2 speed tau)` overflows for long horizons nor does `1 - xi` cancel
/// near the terminal time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiniteHorizonCoeffs {
    pub horizon: f64,
    pub alpha: f64,
    /// `(A + c) / (A - c)`, strictly greater than one.
    pub xi: f64,
    /// Liquidation speed `sqrt(phi / k)`.
    pub rate_root: f64,
    shifted_alpha: f64,
    sqrt_k_phi: f64,
    params: MarketParams,
}

impl FiniteHorizonCoeffs {
    pub fn new(horizon: f64, alpha: f64, params: &MarketParams) -> Result<Self, StrategyError> {
        params.validate()?;
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(StrategyError::InvalidHorizon(horizon));
        }
        let c = params.sqrt_k_phi();
        let bound = params.b / 2.0 + c;
        if !(alpha > bound) || !alpha.is_finite() {
            return Err(StrategyError::TerminalPenaltyTooSmall { alpha, bound });
        }
        let shifted_alpha = alpha - params.b / 2.0;
        Ok(Self {
            horizon,
            alpha,
            xi: (shifted_alpha + c) / (shifted_alpha - c),
            rate_root: params.liquidation_speed(),
            shifted_alpha,
            sqrt_k_phi: c,
            params: *params,
        })
    }

    pub fn params(&self) -> &MarketParams {
        &self.params
    }

    fn remaining(&self, t: f64) -> Result<f64, StrategyError> {
        if t.is_finite() && (0.0..=self.horizon).contains(&t) {
            Ok(self.horizon - t)
        } else {
            Err(StrategyError::TimeOutOfRange {
                t,
                horizon: self.horizon,
            })
        }
    }

    fn decay(&self, tau: f64) -> f64 {
        -(-2.0 * self.rate_root * tau).exp_m1()
    }

    /// `(2A - m (A - c)) / (2c + m (A - c))`; equals `(xi e + 1) / (xi e - 1)`
    /// with `e = exp(2 speed tau)`.
    fn ratio(&self, tau: f64) -> f64 {
        let (a, c) = (self.shifted_alpha, self.sqrt_k_phi);
        let m = self.decay(tau);
        (2.0 * a - m * (a - c)) / (2.0 * c + m * (a - c))
    }

    /// Quadratic coefficient `h2(t)`; `h2(T) = -alpha`.
    pub fn h2(&self, t: f64) -> Result<f64, StrategyError> {
        let tau = self.remaining(t)?;
        Ok(self.h2_remaining(tau))
    }

    pub(crate) fn h2_remaining(&self, tau: f64) -> f64 {
        -self.sqrt_k_phi * self.ratio(tau) - self.params.b / 2.0
    }

    /// Constant coefficient `h0(t)`; `h0(T) = 0`. Needs symmetric intensities.
    pub fn h0(&self, t: f64) -> Result<f64, StrategyError> {
        let tau = self.remaining(t)?;
        self.h0_remaining(tau)
    }

    pub(crate) fn h0_remaining(&self, tau: f64) -> Result<f64, StrategyError> {
        let p = &self.params;
        let lambda = p.symmetric_lambda()?;
        let eta = p.eta_mean;
        let (a, c) = (self.shifted_alpha, self.sqrt_k_phi);
        // ln[(xi - 1) / (xi e^{s tau} - e^{-s tau})]
        //   = -s tau - ln(1 + m (A - c) / (2c))
        let log_term = -self.rate_root * tau - (self.decay(tau) * (a - c) / (2.0 * c)).ln_1p();
        Ok(2.0 * lambda * eta * eta * p.k * log_term
            - (lambda * eta * eta * p.b - 2.0 * p.r * lambda * eta * p.s0) * tau)
    }

    /// Finite-horizon value `h0(t) + h2(t) q^2`.
    pub fn value(&self, t: f64, q: f64) -> Result<f64, StrategyError> {
        Ok(self.h0(t)? + self.h2(t)? * q * q)
    }

    /// Optimal feedback rate at time `t` for inventory `q`.
    pub fn rate(&self, t: f64, q: f64) -> Result<f64, StrategyError> {
        let tau = self.remaining(t)?;
        Ok(self.rate_root * self.ratio(tau) * q)
    }
}

/// Coefficients of the discounted infinite-horizon problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscountedCoeffs {
    pub beta: f64,
    pub h2: f64,
    pub h0: f64,
    /// Feedback coefficient: the optimal rate is `rate_coeff * q`.
    pub rate_coeff: f64,
}

/// Builds the discounted solution for discount rate `beta`.
///
/// Requires `(k beta - b)^2 + 4 k phi - b^2 >= 0` and `2 phi > beta b`.
pub fn discounted_coeffs(beta: f64, params: &MarketParams) -> Result<DiscountedCoeffs, StrategyError> {
    params.validate()?;
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(StrategyError::InvalidDiscount(beta));
    }
    let (k, b, phi) = (params.k, params.b, params.phi);
    let shift = k * beta - b;
    let discriminant = shift * shift + (4.0 * k * phi - b * b);
    if discriminant < 0.0 {
        return Err(StrategyError::NoRealRoot { beta, discriminant });
    }
    if !(2.0 * phi > beta * b) {
        return Err(StrategyError::Inadmissible {
            beta,
            two_phi: 2.0 * phi,
            beta_b: beta * b,
        });
    }
    let lambda = params.symmetric_lambda()?;
    let eta = params.eta_mean;
    let root = discriminant.sqrt();
    let h2 = shift / 2.0 - root / 2.0;
    let h0 = 2.0 * lambda * eta * (eta * h2 + params.r * params.s0) / beta;
    Ok(DiscountedCoeffs {
        beta,
        h2,
        h0,
        rate_coeff: (root - k * beta) / (2.0 * k),
    })
}

impl DiscountedCoeffs {
    pub fn rate(&self, q: f64) -> f64 {
        self.rate_coeff * q
    }

    pub fn value(&self, q: f64) -> f64 {
        self.h0 + self.h2 * q * q
    }
}

/// Unresolved strategy choice, as written on the command line:
/// `ergodic`, `half`, `finite:<T>:<alpha>` or `discounted:<beta>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StrategySpec {
    Ergodic,
    FiniteHorizon { horizon: f64, alpha: f64 },
    Discounted { beta: f64 },
    HalfInventory,
}

impl StrategySpec {
    pub fn build(&self, params: &MarketParams) -> Result<Strategy, StrategyError> {
        params.validate()?;
        Ok(match *self {
            StrategySpec::Ergodic => Strategy::Ergodic,
            StrategySpec::HalfInventory => Strategy::HalfInventory,
            StrategySpec::FiniteHorizon { horizon, alpha } => {
                Strategy::FiniteHorizon(FiniteHorizonCoeffs::new(horizon, alpha, params)?)
            }
            StrategySpec::Discounted { beta } => Strategy::Discounted(discounted_coeffs(beta, params)?),
        })
    }

    /// Short label used in CSV output.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for StrategySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategySpec::Ergodic => f.write_str("ergodic"),
            StrategySpec::HalfInventory => f.write_str("half"),
            StrategySpec::FiniteHorizon { horizon, alpha } => write!(f, "finite:{horizon}:{alpha}"),
            StrategySpec::Discounted { beta } => write!(f, "discounted:{beta}"),
        }
    }
}

impl FromStr for StrategySpec {
    type Err = StrategyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || StrategyError::Parse(s.to_string());
        let num = |v: &str| v.trim().parse::<f64>().map_err(|_| bad());
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            ["ergodic"] => Ok(StrategySpec::Ergodic),
            ["half"] => Ok(StrategySpec::HalfInventory),
            ["finite", horizon, alpha] => Ok(StrategySpec::FiniteHorizon {
                horizon: num(horizon)?,
                alpha: num(alpha)?,
            }),
            ["discounted", beta] => Ok(StrategySpec::Discounted { beta: num(beta)? }),
            _ => Err(bad()),
        }
    }
}

/// A strategy with its coefficients resolved against a parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    Ergodic,
    FiniteHorizon(FiniteHorizonCoeffs),
    Discounted(DiscountedCoeffs),
    HalfInventory,
}

impl Strategy {
    /// Trading rate at time `t` with inventory `q`; `dt` is the period of the
    /// halving heuristic.
    pub fn rate(&self, t: f64, q: f64, dt: f64, params: &MarketParams) -> Result<f64, StrategyError> {
        match self {
            Strategy::Ergodic => Ok(ergodic_rate(q, params)),
            Strategy::FiniteHorizon(c) => c.rate(t, q),
            Strategy::Discounted(c) => Ok(c.rate(q)),
            Strategy::HalfInventory => Ok(half_inventory_action(q, dt)),
        }
    }
}
