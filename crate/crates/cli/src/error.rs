use liquidation_core::{CalibrationError, ParamError, SimError, StrategyError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("numeric precondition failed: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        CliError::Data(format!("{}: {err}", path.display()))
    }
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<StrategyError> for CliError {
    fn from(e: StrategyError) -> Self {
        match e {
            StrategyError::TimeOutOfRange { .. }
            | StrategyError::TerminalPenaltyTooSmall { .. }
            | StrategyError::NoRealRoot { .. }
            | StrategyError::Inadmissible { .. } => CliError::Numeric(e.to_string()),
            StrategyError::InvalidHorizon(_)
            | StrategyError::InvalidDiscount(_)
            | StrategyError::Parse(_)
            | StrategyError::Param(_) => CliError::Config(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Config(_) | SimError::Param(_) => CliError::Config(e.to_string()),
            SimError::NonPositiveStep(_) => CliError::Numeric(e.to_string()),
            SimError::Strategy(inner) => inner.into(),
        }
    }
}

impl From<CalibrationError> for CliError {
    fn from(e: CalibrationError) -> Self {
        CliError::Data(e.to_string())
    }
}
