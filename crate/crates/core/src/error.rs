use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("parameter `{field}` must be {requirement} (got {value})")]
    Invalid {
        field: &'static str,
        requirement: &'static str,
        value: f64,
    },
    #[error("closed forms need symmetric intensities, got lambda_plus={plus} and lambda_minus={minus}")]
    Asymmetric { plus: f64, minus: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StrategyError {
    #[error("time {t} outside the horizon [0, {horizon}]")]
    TimeOutOfRange { t: f64, horizon: f64 },
    #[error("horizon must be positive and finite (got {0})")]
    InvalidHorizon(f64),
    #[error("terminal penalty alpha={alpha} must exceed b/2 + sqrt(k*phi) = {bound}")]
    TerminalPenaltyTooSmall { alpha: f64, bound: f64 },
    #[error("discount rate must be positive and finite (got {0})")]
    InvalidDiscount(f64),
    #[error("real-root condition (k*beta - b)^2 + 4*k*phi - b^2 >= 0 fails for beta={beta} (value {discriminant})")]
    NoRealRoot { beta: f64, discriminant: f64 },
    #[error("admissibility condition 2*phi > beta*b fails for beta={beta} ({two_phi} <= {beta_b})")]
    Inadmissible { beta: f64, two_phi: f64, beta_b: f64 },
    #[error("unrecognised strategy `{0}` (expected ergodic, half, finite:<T>:<alpha> or discounted:<beta>)")]
    Parse(String),
    #[error(transparent)]
    Param(#[from] ParamError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    Config(String),
    #[error("time step must be positive and finite (got {0})")]
    NonPositiveStep(f64),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalibrationError {
    #[error("liquidation log is empty")]
    EmptyLog,
    #[error("last liquidation time must be positive (got {0})")]
    ZeroElapsed(f64),
    #[error("liquidation record {index}: {reason}")]
    BadRecord { index: usize, reason: String },
    #[error("trade size must be positive (got {0})")]
    NonPositiveTradeSize(f64),
    #[error("book depth {available} is less than trade size {requested}")]
    InsufficientDepth { available: f64, requested: f64 },
    #[error("malformed book snapshot at t={time}: {reason}")]
    BadSnapshot { time: f64, reason: String },
    #[error("no snapshot had at least two usable trade sizes ({skipped} skipped)")]
    NoUsableSnapshots { skipped: usize },
    #[error("every interval has zero net order flow")]
    NoFlow,
}

/// Umbrella error for callers that mix modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Calibration(#[from] CalibrationError),
}
