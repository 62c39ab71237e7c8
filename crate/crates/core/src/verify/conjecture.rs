use super::{oracle_table, Grid, OracleFailure, ReportRow, ScanReport};
use crate::oracle::{OracleConfig, OraclePoint};

/// `b` in `I_ν K_ν > 1/(2√(x² + ν² + b))`, proved for `ν ≥ 0`.
pub const PROVED_B: f64 = 1.0 / 3.0;
/// The conjectured best constant, nominally for `ν ≥ −1`.
pub const CONJECTURED_B: f64 = 1.0 / 5.0;

/// `s = 1/(4P²) − x² − ν²` and its absolute error estimate.
pub(crate) fn excess(o: &OraclePoint) -> (f64, f64) {
    let q = 0.5 / o.product.value;
    let h = o.x.hypot(o.nu);
    let s = (q - h) * (q + h);
    (s, 2.0 * o.product.rel_error() * q * q + 4.0 * f64::EPSILON * q * q)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureReport {
    /// `s ≤ 1/3` on `ν ≥ 0` rows; gating.
    pub proved: ScanReport,
    /// `s ≤ 1/5` on `ν ≥ −1` rows; reported only.
    pub conjectured: ScanReport,
    /// Supremum of `s` over every row with `ν ≥ −1`, and its location `(ν, x)`.
    pub sup_s: f64,
    pub sup_at: (f64, f64),
    pub sup_s_nonneg: f64,
    pub sup_nonneg_at: (f64, f64),
    /// Rows in `[−1, 0)` other than `ν = −1/2`, evaluated by reflection and
    /// so not backed by a closed form.
    pub reflection_rows: Vec<f64>,
    /// Rows below `ν = −1`, outside the oracle's range.
    pub unsupported_rows: Vec<f64>,
}

impl ConjectureReport {
    pub fn margin_proved(&self) -> f64 {
        PROVED_B - self.sup_s_nonneg
    }

    pub fn margin_conjectured(&self) -> f64 {
        CONJECTURED_B - self.sup_s
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "sup s = {:.10} at nu={} x={:.6e}; on nu >= 0: sup s = {:.10} at nu={} x={:.6e}\n\
             margin to 1/3 (proved, nu >= 0): {:.6e}\n\
             margin to 1/5 (conjectured, reported only): {:.6e}",
            self.sup_s,
            self.sup_at.0,
            self.sup_at.1,
            self.sup_s_nonneg,
            self.sup_nonneg_at.0,
            self.sup_nonneg_at.1,
            self.margin_proved(),
            self.margin_conjectured(),
        );
        if !self.reflection_rows.is_empty() {
            s.push_str(&format!(
                "\nunverified rows (reflection path, no closed form): {:?}",
                self.reflection_rows
            ));
        }
        if !self.unsupported_rows.is_empty() {
            s.push_str(&format!("\nskipped rows below nu = -1: {:?}", self.unsupported_rows));
        }
        s
    }
}

/// Evaluate `s` at every grid point and compare against both constants.
pub fn conjecture_scan(grid: &Grid, cfg: &OracleConfig) -> ConjectureReport {
    let mut proved = ScanReport::new("conjecture-b-1/3");
    let mut conjectured = ScanReport::new("conjecture-b-1/5");
    let mut sup = (f64::NEG_INFINITY, (f64::NAN, f64::NAN));
    let mut sup_nonneg = (f64::NEG_INFINITY, (f64::NAN, f64::NAN));
    let supported = grid.filter_nu(|v| v >= -1.0, "nu < -1");
    let table = oracle_table(&supported, cfg);
    for (&nu, row) in supported.nu_values.iter().zip(&table) {
        for (&x, o) in supported.x_values.iter().zip(row) {
            conjectured.points_attempted += 1;
            if nu >= 0.0 {
                proved.points_attempted += 1;
            }
            let o = match o {
                Ok(o) => o,
                Err(e) => {
                    let f = OracleFailure { nu, x, message: e.to_string() };
                    if nu >= 0.0 {
                        proved.oracle_failures.push(f.clone());
                    }
                    conjectured.oracle_failures.push(f);
                    continue;
                }
            };
            let (s, err) = excess(o);
            if s > sup.0 {
                sup = (s, (nu, x));
            }
            let row = |b: f64| ReportRow { nu, x, bound: b, oracle: s, margin: (b - s) / b };
            conjectured.push_row(row(CONJECTURED_B), s > CONJECTURED_B + err);
            if nu >= 0.0 {
                if s > sup_nonneg.0 {
                    sup_nonneg = (s, (nu, x));
                }
                proved.push_row(row(PROVED_B), s > PROVED_B + err);
            }
        }
    }
    ConjectureReport {
        proved,
        conjectured,
        sup_s: sup.0,
        sup_at: sup.1,
        sup_s_nonneg: sup_nonneg.0,
        sup_nonneg_at: sup_nonneg.1,
        reflection_rows: supported.nu_values.iter().copied().filter(|&v| v < 0.0 && v != -0.5).collect(),
        unsupported_rows: grid.nu_values.iter().copied().filter(|&v| v < -1.0).collect(),
    }
}
