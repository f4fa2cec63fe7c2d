//! Readers for the calibration input files. Columns are located by header
//! name; every parse failure names the file and line.

use std::path::Path;

use liquidation_core::calibration::{BookLevel, BookSide, BookSnapshot, FlowInterval, LiquidationRecord};

use crate::error::CliError;

struct Sheet {
    name: String,
    columns: Vec<usize>,
    rows: Vec<(u64, csv::StringRecord)>,
}

impl Sheet {
    fn open(path: &Path, required: &[&str]) -> Result<Self, CliError> {
        let name = path.display().to_string();
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| CliError::Data(format!("{name}: {e}")))?;
        let header = reader
            .headers()
            .map_err(|e| CliError::Data(format!("{name}: {e}")))?
            .clone();
        let columns = required
            .iter()
            .map(|col| {
                header.iter().position(|h| h == *col).ok_or_else(|| {
                    CliError::Data(format!("{name} line 1: missing column `{col}` (header must contain {})", required.join(",")))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line());
                CliError::Data(format!("{name} line {line}: {e}"))
            })?;
            let line = record.position().map_or(0, |p| p.line());
            rows.push((line, record));
        }
        Ok(Self { name, columns, rows })
    }

    fn field<'a>(&self, line: u64, record: &'a csv::StringRecord, col: usize, label: &str) -> Result<&'a str, CliError> {
        record
            .get(self.columns[col])
            .ok_or_else(|| CliError::Data(format!("{} line {line}: missing `{label}` field", self.name)))
    }

    fn number(&self, line: u64, record: &csv::StringRecord, col: usize, label: &str) -> Result<f64, CliError> {
        let raw = self.field(line, record, col, label)?;
        raw.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| CliError::Data(format!("{} line {line}: `{label}` value `{raw}` is not a finite number", self.name)))
    }

    fn error(&self, line: u64, msg: impl std::fmt::Display) -> CliError {
        CliError::Data(format!("{} line {line}: {msg}", self.name))
    }
}

pub fn liquidations(path: &Path) -> Result<Vec<LiquidationRecord>, CliError> {
    let sheet = Sheet::open(path, &["time", "size"])?;
    let mut out = Vec::with_capacity(sheet.rows.len());
    let mut prev = f64::NEG_INFINITY;
    for (line, rec) in &sheet.rows {
        let time = sheet.number(*line, rec, 0, "time")?;
        let size = sheet.number(*line, rec, 1, "size")?;
        if time < 0.0 || time < prev {
            return Err(sheet.error(*line, format!("time {time} must be non-negative and not before {prev}")));
        }
        if size <= 0.0 {
            return Err(sheet.error(*line, format!("size {size} must be positive")));
        }
        prev = time;
        out.push(LiquidationRecord { time, size });
    }
    Ok(out)
}

/// Rows sharing `(snapshot_time, side)` form one snapshot, levels in file
/// order; snapshots keep the order of their first row.
pub fn book(path: &Path) -> Result<Vec<BookSnapshot>, CliError> {
    let sheet = Sheet::open(path, &["snapshot_time", "side", "price", "volume", "mid"])?;
    struct Group {
        time: f64,
        side: BookSide,
        mid: f64,
        first_line: u64,
        levels: Vec<BookLevel>,
    }
    let mut groups: Vec<Group> = Vec::new();
    for (line, rec) in &sheet.rows {
        let time = sheet.number(*line, rec, 0, "snapshot_time")?;
        let side: BookSide = sheet.field(*line, rec, 1, "side")?.parse().map_err(|e| sheet.error(*line, e))?;
        let price = sheet.number(*line, rec, 2, "price")?;
        let volume = sheet.number(*line, rec, 3, "volume")?;
        let mid = sheet.number(*line, rec, 4, "mid")?;
        let level = BookLevel { price, volume };
        match groups.iter_mut().find(|g| g.time == time && g.side == side) {
            Some(g) if g.mid != mid => {
                return Err(sheet.error(*line, format!("mid {mid} differs from {} earlier in this snapshot", g.mid)));
            }
            Some(g) => g.levels.push(level),
            None => groups.push(Group { time, side, mid, first_line: *line, levels: vec![level] }),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            BookSnapshot::new(g.time, g.side, g.mid, g.levels)
                .map_err(|e| sheet.error(g.first_line, format!("snapshot starting here: {e}")))
        })
        .collect()
}

pub fn flow(path: &Path) -> Result<Vec<FlowInterval>, CliError> {
    let sheet = Sheet::open(path, &["net_flow", "delta_mid"])?;
    sheet
        .rows
        .iter()
        .map(|(line, rec)| {
            Ok(FlowInterval {
                net_flow: sheet.number(*line, rec, 0, "net_flow")?,
                delta_mid: sheet.number(*line, rec, 1, "delta_mid")?,
            })
        })
        .collect()
}
