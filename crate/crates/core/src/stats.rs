//! Small sample statistics shared by the engine and the calibration code.

use serde::{Deserialize, Serialize};

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Standard error of the mean with the unbiased (n - 1) variance; 0 for n < 2.
pub fn std_err(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64;
    (var / n as f64).sqrt()
}

/// Nearest-rank quantile: the `ceil(level * n)`-th smallest sample.
pub fn nearest_rank(sorted: &[f64], level: f64) -> f64 {
    assert!(!sorted.is_empty(), "nearest_rank on empty sample");
    let n = sorted.len();
    // Guard against `0.05 * 100 = 5.000000000000001`-style round-up.
    let rank = ((level * n as f64 - 1e-9).ceil() as usize).clamp(1, n);
    sorted[rank - 1]
}

/// Lower-tail value at risk and expected shortfall of a reward sample.
///
/// Returns `(var, es)` with `var` the nearest-rank `tail` quantile (0.05 for
/// 95% VaR) and `es` the mean of all samples at or below it.
pub fn tail_risk(samples: &[f64], tail: f64) -> (f64, f64) {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let var = nearest_rank(&sorted, tail);
    let tail: Vec<f64> = sorted.iter().copied().take_while(|&x| x <= var).collect();
    (var, mean(&tail))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_std_err: f64,
    pub r_squared: f64,
    /// Residual standard deviation with `n - p` degrees of freedom.
    pub residual_std: f64,
    pub n: usize,
}

/// Ordinary least squares of `y` on `x`, with or without an intercept.
///
/// Returns `None` when the design is degenerate (fewer points than
/// parameters, or no spread in `x`).
pub fn ols(x: &[f64], y: &[f64], with_intercept: bool) -> Option<LinearFit> {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    let params = if with_intercept { 2 } else { 1 };
    if n < params {
        return None;
    }
    let (x_bar, y_bar) = if with_intercept { (mean(x), mean(y)) } else { (0.0, 0.0) };
    let sxx: f64 = x.iter().map(|v| (v - x_bar) * (v - x_bar)).sum();
    if !(sxx > 0.0) {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - x_bar) * (b - y_bar)).sum();
    let slope = sxy / sxx;
    let intercept = y_bar - slope * x_bar;
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let e = b - (intercept + slope * a);
            e * e
        })
        .sum();
    // Centred total sum of squares with an intercept, raw otherwise.
    let y_ref = if with_intercept { y_bar } else { 0.0 };
    let sst: f64 = y.iter().map(|b| (b - y_ref) * (b - y_ref)).sum();
    let r_squared = if sst > 0.0 { 1.0 - sse / sst } else { 1.0 };
    let dof = n - params;
    let residual_var = if dof > 0 { sse / dof as f64 } else { 0.0 };
    Some(LinearFit {
        slope,
        intercept,
        slope_std_err: (residual_var / sxx).sqrt(),
        r_squared,
        residual_std: residual_var.sqrt(),
        n,
    })
}
