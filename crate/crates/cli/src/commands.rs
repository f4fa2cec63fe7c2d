use liquidation_core::calibration::{
    estimate_b, estimate_k, estimate_lambda_eta, LambdaDivisor,
};
use liquidation_core::engine::SeriesSpec;
use liquidation_core::stats;
use liquidation_core::{
    compare_strategies, ergodic_gamma, paired_difference, sweep_gamma, ComparisonRow, SimConfig,
    StrategySpec, SweepMode,
};

use crate::args::Command;
use crate::config::{Settings, SweepKind};
use crate::error::CliError;
use crate::output::{num, OutDir, Table};

pub fn gamma(s: &Settings, out: &mut OutDir) -> Result<(), CliError> {
    let p = &s.params;
    let g = ergodic_gamma(p)?;
    let mut t = Table::new(&["r", "lambda", "eta", "k", "b", "phi", "s0", "gamma"]);
    t.push([p.r, p.lambda_plus, p.eta_mean, p.k, p.b, p.phi, p.s0, g].map(num).to_vec());
    out.table("gamma.csv", &t)?;
    println!("gamma = {}", num(g));
    Ok(())
}

fn file_label(strategy: &StrategySpec) -> String {
    strategy.to_string().replace(':', "-")
}

pub fn simulate(s: &Settings, out: &mut OutDir) -> Result<(), CliError> {
    let base = SimConfig {
        series: s.timeseries.map(|stride| SeriesSpec { stride, max_paths: s.timeseries_paths }),
        ..s.sim
    };
    let rows = compare_strategies(&base, &s.params, &s.strategies, &s.cash_modes)?;

    let mut paths = Table::new(&[
        "path_id", "strategy", "cash_mode", "avg_pnl", "terminal_q", "terminal_x", "penalty_integral",
    ]);
    let mut summary = Table::new(&["strategy", "cash_mode", "mean", "std_err", "ci_low", "ci_high", "var95", "es95"]);
    for row in &rows {
        let (strategy, mode) = (row.strategy.to_string(), row.cash_mode.as_str());
        for p in &row.ensemble.paths {
            paths.push(vec![
                p.path_id.to_string(),
                strategy.clone(),
                mode.to_string(),
                num(p.avg_pnl),
                num(p.terminal.q),
                num(p.terminal.x),
                num(p.penalty_integral),
            ]);
        }
        let st = &row.ensemble.stats;
        let mut line = vec![strategy.clone(), mode.to_string()];
        line.extend([st.mean, st.std_err, st.ci95_low, st.ci95_high, st.var95, st.es95].map(num));
        summary.push(line);
        println!(
            "{strategy:>24} {mode:>10}  mean {}  se {}  es95 {}",
            num(st.mean),
            num(st.std_err),
            num(st.es95)
        );

        if s.timeseries.is_some() {
            let mut ts = Table::new(&["path_id", "t", "S", "Q", "X", "running_avg_pnl"]);
            for p in &row.ensemble.paths {
                for pt in &p.series {
                    let mut line = vec![p.path_id.to_string()];
                    line.extend([pt.t, pt.s, pt.q, pt.x, pt.running_avg_pnl].map(num));
                    ts.push(line);
                }
            }
            out.table(&format!("timeseries_{}_{}.csv", file_label(&row.strategy), mode), &ts)?;
        }
    }
    out.table("paths.csv", &paths)?;
    out.table("compare.csv", &summary)?;
    report_pairs(&rows);
    Ok(())
}

/// Paired differences against the first strategy, per cash mode, and
/// between cash modes per strategy.
fn report_pairs(rows: &[ComparisonRow]) {
    let Some(first) = rows.first() else { return };
    for row in rows.iter().filter(|r| r.strategy != first.strategy) {
        if let Some(base) = rows.iter().find(|r| r.strategy == first.strategy && r.cash_mode == row.cash_mode) {
            let d = paired_difference(&base.ensemble.paths, &row.ensemble.paths);
            println!(
                "paired {} - {} ({}): {} +/- {} (t = {})",
                base.strategy,
                row.strategy,
                row.cash_mode,
                num(d.mean),
                num(d.std_err),
                num(d.t_stat())
            );
        }
    }
    for (i, a) in rows.iter().enumerate() {
        for b in rows[i + 1..].iter().filter(|b| b.strategy == a.strategy) {
            let d = paired_difference(&a.ensemble.paths, &b.ensemble.paths);
            println!(
                "paired {} - {} ({}): {} +/- {} (t = {})",
                a.cash_mode,
                b.cash_mode,
                a.strategy,
                num(d.mean),
                num(d.std_err),
                num(d.t_stat())
            );
        }
    }
}

pub fn sweep(s: &Settings, out: &mut OutDir) -> Result<(), CliError> {
    if s.axes.is_empty() {
        return Err(CliError::Config("sweep needs at least one --axis".into()));
    }
    let mode = match s.sweep_kind {
        SweepKind::Closed => SweepMode::ClosedForm,
        SweepKind::MonteCarlo => SweepMode::MonteCarlo(s.sim),
    };
    let rows = sweep_gamma(&s.axes, &s.params, &mode)?;
    let mut header: Vec<String> = Vec::new();
    for i in 1..=s.axes.len() {
        header.push(format!("axis{i}"));
        header.push(format!("value{i}"));
    }
    header.extend(
        ["mode", "gamma_or_mean", "std_err", "ci_low", "ci_high", "var95", "es95"].map(String::from),
    );
    let mut t = Table::new(&header);
    for row in &rows {
        let mut line = Vec::with_capacity(header.len());
        for (axis, v) in &row.coords {
            line.push(axis.to_string());
            line.push(num(*v));
        }
        line.push(mode.label().to_string());
        line.push(num(row.value));
        line.push(num(row.std_err));
        match &row.stats {
            Some(st) => line.extend([st.ci95_low, st.ci95_high, st.var95, st.es95].map(num)),
            None => line.extend(std::iter::repeat_n(String::new(), 4)),
        }
        t.push(line);
    }
    out.table("sweep.csv", &t)?;
    println!("{} grid points, mode {}", rows.len(), mode.label());
    Ok(())
}

pub fn calibrate(s: &Settings, out: &mut OutDir) -> Result<(), CliError> {
    if s.liquidations.is_none() && s.book.is_none() && s.flow.is_none() {
        return Err(CliError::Config("calibrate needs at least one of --liquidations, --book, --flow".into()));
    }
    let blank = String::new;
    let mut t = Table::new(&["parameter", "value", "std_err", "n", "skipped", "r_squared", "residual_std"]);

    if let Some(path) = &s.liquidations {
        let log = crate::inputs::liquidations(path)?;
        let divisor = s.lambda_window.map_or(LambdaDivisor::LastEvent, LambdaDivisor::Window);
        let est = estimate_lambda_eta(&log, divisor)?;
        let sizes: Vec<f64> = log.iter().map(|r| r.size).collect();
        let n = est.n.to_string();
        t.push(vec!["lambda".into(), num(est.lambda), num(est.lambda / (est.n as f64).sqrt()), n.clone(), "0".into(), blank(), blank()]);
        t.push(vec!["eta".into(), num(est.eta), num(stats::std_err(&sizes)), n, "0".into(), blank(), blank()]);
        println!("lambda = {}  eta = {}  ({} events)", num(est.lambda), num(est.eta), est.n);
    }
    if let Some(path) = &s.book {
        let snaps = crate::inputs::book(path)?;
        let sizes: Vec<f64> = (1..=s.max_trade_size).map(|q| q as f64).collect();
        let est = estimate_k(&snaps, &sizes, s.k_intercept)?;
        t.push(vec![
            "k".into(),
            num(est.k),
            num(stats::std_err(&est.slopes())),
            est.fits.len().to_string(),
            est.skipped.len().to_string(),
            num(est.mean_r_squared()),
            num(est.mean_residual_std()),
        ]);
        println!("k = {}  ({} snapshots, {} skipped)", num(est.k), est.fits.len(), est.skipped.len());
    }
    if let Some(path) = &s.flow {
        let intervals = crate::inputs::flow(path)?;
        let est = estimate_b(&intervals)?;
        t.push(vec![
            "b".into(),
            num(est.b),
            num(est.fit.slope_std_err),
            est.fit.n.to_string(),
            "0".into(),
            num(est.fit.r_squared),
            num(est.fit.residual_std),
        ]);
        println!("b = {}  ({} intervals)", num(est.b), est.fit.n);
    }
    out.table("params_estimated.csv", &t)?;
    Ok(())
}

pub fn run(command: &Command, s: &Settings, out: &mut OutDir) -> Result<(), CliError> {
    match command {
        Command::Gamma(_) => gamma(s, out),
        Command::Simulate(_) | Command::Compare(_) => simulate(s, out),
        Command::Sweep(_) => sweep(s, out),
        Command::Calibrate(_) => calibrate(s, out),
    }
}
