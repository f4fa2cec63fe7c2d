//! Ergodic optimal liquidation for a derivatives exchange that inherits the
//! positions of distressed traders.
//!
//! The crate is organised bottom-up:
//!
//! * [`params`] – model constants and their validity checks.
//! * [`market`] – the controlled jump-diffusion (midprice, inventory, cash) and
//!   its Euler–Maruyama step.
//! * [`strategies`] – closed-form value-function coefficients and feedback
//!   controls (ergodic, finite horizon, discounted) plus the halving heuristic.
//! * [`engine`] / [`sweep`] – seeded Monte-Carlo harness, ensemble statistics
//!   and parameter sweeps of the ergodic constant.
//! * [`calibration`] – estimators for intensity, size, temporary and permanent
//!   impact from event logs, book snapshots and order-flow buckets.
//! * [`synthetic`] – generated logs, books and flow with known parameters.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod engine;
pub mod error;
pub mod market;
pub mod params;
pub mod stats;
pub mod strategies;
pub mod sweep;
pub mod synthetic;

pub use engine::{
    compare_strategies, paired_difference, path_seed, run_ensemble, run_path, ComparisonRow,
    Ensemble, EnsembleStats, PairedDifference, PathResult, SimConfig, TimePoint,
};
pub use error::{CalibrationError, Error, ParamError, SimError, StrategyError};
pub use market::{execution_price, sample_jumps, step, CashMode, JumpEvent, MarketState, Side};
pub use params::MarketParams;
pub use strategies::{
    discounted_coeffs, ergodic_gamma, ergodic_rate, half_inventory_action, running_reward,
    DiscountedCoeffs, FiniteHorizonCoeffs, Strategy, StrategySpec,
};
pub use sweep::{sweep_gamma, AxisGrid, SweepAxis, SweepMode, SweepRow};
