//! Scaling reports: compile a program over a size range, record size,
//! depth and time complexity per row, and fit a log-log slope over the
//! top half of the rows.

use crate::analysis::time_complexity;
use crate::compiler::{baseline_count, compile, Strategy};
use crate::Program;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use std::fmt::Write as _;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FitError {
    #[error("a slope fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("degenerate fit: all abscissas are equal")]
    Degenerate,
    #[error("fit points must be positive")]
    NonPositive,
}

/// Ordinary least squares on `(ln n, ln size)`.
/// Returns `(slope, residual)` where the residual is the root mean
/// squared error of the fit.
pub fn fit_exponent(points: &[(f64, f64)]) -> Result<(f64, f64), FitError> {
    if points.len() < 3 {
        return Err(FitError::TooFewPoints(points.len()));
    }
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(FitError::NonPositive);
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return Err(FitError::Degenerate);
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mse: f64 = logs
        .iter()
        .map(|p| {
            let e = p.1 - (slope * p.0 + intercept);
            e * e
        })
        .sum::<f64>()
        / m;
    Ok((slope, mse.sqrt()))
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub n: usize,
    pub size: BigUint,
    pub depth: Option<usize>,
    pub time: u64,
    pub ancillas: Option<usize>,
    pub wall_ms: f64,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub program: String,
    pub strategy: &'static str,
    pub count_mode: bool,
    pub rows: Vec<BenchRow>,
    /// Fitted log-log slope over the top half of the rows.
    pub slope: Option<f64>,
    pub residual: Option<f64>,
    /// Sizes skipped because compilation rejected them.
    pub skipped: Vec<(usize, String)>,
}

/// Compile (or count, for the sequential strategy) at every size in
/// `sizes`, skipping sizes the program rejects.
pub fn bench_scaling(p: &Program, id: &str, strategy: Strategy, sizes: &[usize]) -> BenchReport {
    let count_mode = strategy == Strategy::Sequential;
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &n in sizes {
        let start = Instant::now();
        let made = if count_mode {
            baseline_count(p, n).map(|c| (c.size, None, None))
        } else {
            compile(p, n, strategy).map(|out| {
                (
                    BigUint::from(out.stats.size),
                    Some(out.stats.depth),
                    Some(out.stats.ancilla_count),
                )
            })
        };
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        match made {
            Ok((size, depth, ancillas)) => {
                let time = time_complexity(p, n).unwrap_or(0);
                rows.push(BenchRow {
                    n,
                    size,
                    depth,
                    time,
                    ancillas,
                    wall_ms,
                });
            }
            Err(e) => skipped.push((n, e.to_string())),
        }
    }
    let (slope, residual) = match top_half_slope(&rows) {
        Some((s, r)) => (Some(s), Some(r)),
        None => (None, None),
    };
    BenchReport {
        program: id.to_string(),
        strategy: strategy.as_str(),
        count_mode,
        rows,
        slope,
        residual,
        skipped,
    }
}

/// Slope of the upper half of the rows, where finite-size effects have
/// tapered off.
pub fn top_half_slope(rows: &[BenchRow]) -> Option<(f64, f64)> {
    let points: Vec<(f64, f64)> = rows
        .iter()
        .skip(rows.len() / 2)
        .map(|r| (r.n as f64, r.size.to_f64().unwrap_or(f64::MAX)))
        .collect();
    fit_exponent(&points).ok()
}

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,size,depth,time,ancillas\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.n,
                r.size,
                r.depth.map(|d| d.to_string()).unwrap_or_default(),
                r.time,
                r.ancillas.map(|a| a.to_string()).unwrap_or_default(),
            );
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "program": self.program,
            "strategy": self.strategy,
            "count_mode": self.count_mode,
            "rows": self.rows.iter().map(|r| serde_json::json!({
                "n": r.n,
                "size": r.size.to_string(),
                "depth": r.depth,
                "time": r.time,
                "ancillas": r.ancillas,
                "wall_ms": r.wall_ms,
            })).collect::<Vec<_>>(),
            "slope": self.slope,
            "residual": self.residual,
            "skipped": self.skipped.iter().map(|(n, why)| serde_json::json!({
                "n": n, "reason": why,
            })).collect::<Vec<_>>(),
        })
    }
}
