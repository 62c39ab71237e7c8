//! Grid scans that turn each inequality, monotonicity statement and
//! sharpness order into a [`ScanReport`].
//!
//! Oracle values are computed once per `ν` row (rows run in parallel) and
//! shared by every claim in a scan. Reports are merged in `(ν, x)` order, so
//! a scan is deterministic for a fixed grid and configuration.

mod claims;
mod conjecture;
mod fit;
mod monotone;

use std::io::Write;

use rayon::prelude::*;

use crate::oracle::{Oracle, OracleConfig, OraclePoint};
use crate::{Error, Result};

pub use claims::{claim_catalog, find_claim, scan_bound, scan_claims, Claim};
pub use conjecture::{conjecture_scan, ConjectureReport, CONJECTURED_B, PROVED_B};
pub use fit::{
    fit_error_order, run_sharpness, sharpness_cases, sharpness_eps, EpsQuantity, EpsSample, Fit,
    SharpnessCase, SharpnessEps, SharpnessOutcome, COEFFICIENT_TOL, EXPONENT_TOL,
};
pub use monotone::{monotonicity_suite, scan_monotone, Expected, MonotoneCheck, Quantity};

/// Default relative slack tolerance of a bound scan.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default relative tolerance of a monotonicity scan.
pub const MONOTONE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub nu_values: Vec<f64>,
    /// Positive and ascending.
    pub x_values: Vec<f64>,
    /// Human-readable description of excluded orders.
    pub exclusions: String,
}

impl Grid {
    pub fn new(nu_values: Vec<f64>, x_values: Vec<f64>, exclusions: impl Into<String>) -> Result<Self> {
        if let Some(nu) = nu_values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Grid(format!("non-finite order {nu}")));
        }
        if let Some(x) = x_values.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::Grid(format!("argument {x} is not positive and finite")));
        }
        if x_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Grid("arguments must be strictly ascending".into()));
        }
        Ok(Self { nu_values, x_values, exclusions: exclusions.into() })
    }

    /// `ν ∈ {−1, −0.75, …, 20}`, 121 log-spaced `x` in `[10⁻³, 10³]`.
    pub fn default_grid() -> Self {
        Self::new(linear_steps(-1.0, 20.0, 0.25), log_space(1e-3, 1e3, 121), "none").expect("valid default grid")
    }

    /// The same grid with only the orders accepted by `keep`.
    pub fn filter_nu(&self, keep: impl Fn(f64) -> bool, note: &str) -> Self {
        Self {
            nu_values: self.nu_values.iter().copied().filter(|&v| keep(v)).collect(),
            x_values: self.x_values.clone(),
            exclusions: if self.exclusions == "none" { note.to_string() } else { format!("{}; {note}", self.exclusions) },
        }
    }

    pub fn len(&self) -> usize {
        self.nu_values.len() * self.x_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `n` points from `lo` to `hi` with equal ratios; the end points are exact.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| match i {
                    0 => lo,
                    _ if i == n - 1 => hi,
                    _ => (a + (b - a) * i as f64 / (n - 1) as f64).exp(),
                })
                .collect()
        }
    }
}

/// `min, min + step, …` up to `max` (inclusive within a small slack), each
/// computed as `min + i·step` to avoid drift.
pub fn linear_steps(min: f64, max: f64, step: f64) -> Vec<f64> {
    if step.is_nan() || step <= 0.0 || max < min {
        return Vec::new();
    }
    let n = ((max - min) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| min + i as f64 * step).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub nu: f64,
    pub x: f64,
    pub margin: f64,
}

/// One checked point. For monotonicity scans `bound` holds the value at the
/// previous `x` and `oracle` the value at this `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportRow {
    pub nu: f64,
    pub x: f64,
    pub bound: f64,
    pub oracle: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleFailure {
    pub nu: f64,
    pub x: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub claim_id: String,
    pub points_checked: usize,
    pub violations: Vec<Violation>,
    /// Smallest margin seen; `+∞` when no point was checked.
    pub worst_margin: f64,
    pub fitted: Option<Fit>,
    pub rows: Vec<ReportRow>,
    pub oracle_failures: Vec<OracleFailure>,
    /// Points attempted, including those whose oracle failed.
    pub points_attempted: usize,
}

impl ScanReport {
    pub fn new(claim_id: impl Into<String>) -> Self {
        Self {
            claim_id: claim_id.into(),
            points_checked: 0,
            violations: Vec::new(),
            worst_margin: f64::INFINITY,
            fitted: None,
            rows: Vec::new(),
            oracle_failures: Vec::new(),
            points_attempted: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn failure_rate(&self) -> f64 {
        if self.points_attempted == 0 {
            0.0
        } else {
            self.oracle_failures.len() as f64 / self.points_attempted as f64
        }
    }

    fn push_row(&mut self, row: ReportRow, violated: bool) {
        self.points_checked += 1;
        self.worst_margin = self.worst_margin.min(row.margin);
        if violated {
            self.violations.push(Violation { nu: row.nu, x: row.x, margin: row.margin });
        }
        self.rows.push(row);
    }

    /// A short plain-text summary.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "{}: {} points, {} violations, worst margin {:.3e}",
            self.claim_id,
            self.points_checked,
            self.violations.len(),
            self.worst_margin
        );
        if !self.oracle_failures.is_empty() {
            s.push_str(&format!(", {} oracle failures", self.oracle_failures.len()));
        }
        if let Some(f) = &self.fitted {
            s.push_str(&format!(", fitted exponent {:.4} coefficient {:.6e}", f.exponent, f.coefficient));
        }
        if self.points_checked == 0 {
            s.push_str(" (warning: 0 points)");
        }
        s
    }
}

/// Format a float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub const CSV_HEADER: [&str; 6] = ["claim_id", "nu", "x", "bound", "oracle", "margin"];

/// Write reports as CSV with columns `claim_id, nu, x, bound, oracle, margin`.
pub fn write_reports_csv<W: Write>(reports: &[ScanReport], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io = |e: csv::Error| Error::Output(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in reports {
        for row in &r.rows {
            w.write_record([
                r.claim_id.clone(),
                fmt_f64(row.nu),
                fmt_f64(row.x),
                fmt_f64(row.bound),
                fmt_f64(row.oracle),
                fmt_f64(row.margin),
            ])
            .map_err(io)?;
        }
    }
    w.flush().map_err(|e| Error::Output(e.to_string()))?;
    Ok(())
}

/// Scan settings shared by bound and monotonicity scans.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanOptions {
    pub tol: f64,
    pub oracle: OracleConfig,
    /// Re-evaluate violating points with a tightened oracle and keep only
    /// those that persist.
    pub recheck: bool,
    /// Test hook: negate every margin of the named claim.
    pub corrupt: Option<String>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, oracle: OracleConfig::default(), recheck: true, corrupt: None }
    }
}

/// Oracle values for every grid point, row by row.
pub(crate) fn oracle_table(grid: &Grid, cfg: &OracleConfig) -> Vec<Vec<Result<OraclePoint>>> {
    let oracle = Oracle::new(*cfg);
    grid.nu_values.par_iter().map(|&nu| oracle.row(nu, &grid.x_values)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let g = Grid::default_grid();
        assert_eq!(g.nu_values.len(), 85);
        assert_eq!(g.nu_values[0], -1.0);
        assert_eq!(*g.nu_values.last().unwrap(), 20.0);
        assert!(g.nu_values.contains(&0.5) && g.nu_values.contains(&3.0));
        assert_eq!(g.x_values.len(), 121);
        assert_eq!((g.x_values[0], g.x_values[120]), (1e-3, 1e3));
        assert!((g.x_values[60] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(vec![0.0], vec![1.0, 0.5], "").is_err());
        assert!(Grid::new(vec![0.0], vec![0.0, 0.5], "").is_err());
        assert!(Grid::new(vec![f64::NAN], vec![1.0], "").is_err());
        assert!(Grid::new(vec![], vec![], "").unwrap().is_empty());
    }

    #[test]
    fn linear_steps_hit_end_points() {
        assert_eq!(linear_steps(0.0, 1.0, 0.25), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(linear_steps(0.0, 0.3, 0.1).len(), 4);
        assert!(linear_steps(1.0, 0.0, 0.1).is_empty());
    }

    #[test]
    fn csv_uses_fixed_columns_and_precision() {
        let mut r = ScanReport::new("demo");
        r.push_row(ReportRow { nu: 0.5, x: 1.0, bound: 0.5, oracle: 0.4, margin: 0.25 }, false);
        let mut buf = Vec::new();
        write_reports_csv(&[r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "claim_id,nu,x,bound,oracle,margin\n\
             demo,5.0000000000000000e-1,1.0000000000000000e0,5.0000000000000000e-1,\
             4.0000000000000002e-1,2.5000000000000000e-1\n"
        );
    }
}
