use super::{oracle_table, Grid, OracleFailure, ReportRow, ScanReport};
use crate::nullclines::{cubic_roots, w_values};
use crate::oracle::{OracleConfig, OraclePoint};
use crate::{EvalPoint, Error, Result};

/// A scalar function of `(ν, x)` whose monotonicity in `x` is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    Product,
    XProduct,
    Phi0,
    XPhi0,
    Phi1,
    DoubleI,
    DoubleK,
    WI,
    WO,
    WK,
    LambdaI,
    LambdaO,
    LambdaK,
}

impl Quantity {
    pub const ALL: [Quantity; 13] = [
        Quantity::Product,
        Quantity::XProduct,
        Quantity::Phi0,
        Quantity::XPhi0,
        Quantity::Phi1,
        Quantity::DoubleI,
        Quantity::DoubleK,
        Quantity::WI,
        Quantity::WO,
        Quantity::WK,
        Quantity::LambdaI,
        Quantity::LambdaO,
        Quantity::LambdaK,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Quantity::Product => "P",
            Quantity::XProduct => "xP",
            Quantity::Phi0 => "phi0",
            Quantity::XPhi0 => "x_phi0",
            Quantity::Phi1 => "phi1",
            Quantity::DoubleI => "W_I",
            Quantity::DoubleK => "W_K",
            Quantity::WI => "w_I",
            Quantity::WO => "w_O",
            Quantity::WK => "w_K",
            Quantity::LambdaI => "lambda_I",
            Quantity::LambdaO => "lambda_O",
            Quantity::LambdaK => "lambda_K",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|q| q.id() == id)
            .ok_or_else(|| Error::Unknown(format!("quantity {id}")))
    }

    fn needs_oracle(self) -> bool {
        matches!(
            self,
            Quantity::Product
                | Quantity::XProduct
                | Quantity::Phi0
                | Quantity::XPhi0
                | Quantity::Phi1
                | Quantity::DoubleI
                | Quantity::DoubleK
        )
    }

    /// Value and relative error estimate.
    fn eval(self, p: EvalPoint, o: Option<&OraclePoint>) -> Result<(f64, f64)> {
        let x = p.x();
        if let Some(o) = o {
            let (ri, rk) = (o.i_ratio.rel_error(), o.k_magnitude.rel_error());
            let v = match self {
                Quantity::Product => (o.product.value, o.product.rel_error()),
                Quantity::XProduct => (x * o.product.value, o.product.rel_error()),
                Quantity::Phi0 => (o.i_ratio.value, ri),
                Quantity::XPhi0 => (x * o.i_ratio.value, ri),
                Quantity::Phi1 => (o.phi1(), rk),
                Quantity::DoubleI => (o.w_i(), 2.0 * ri),
                Quantity::DoubleK => (o.w_k(), 2.0 * rk),
                _ => unreachable!("nullcline quantities need no oracle"),
            };
            return Ok(v);
        }
        let rounding = 16.0 * f64::EPSILON;
        let v = match self {
            Quantity::WI => w_values(p)?.w_i,
            Quantity::WO => w_values(p)?.w_o,
            Quantity::WK => w_values(p)?.w_k,
            Quantity::LambdaI => cubic_roots(p)?.lambda_i,
            Quantity::LambdaO => cubic_roots(p)?.lambda_o,
            Quantity::LambdaK => cubic_roots(p)?.lambda_k,
            _ => unreachable!("oracle quantities are evaluated above"),
        };
        Ok((v, rounding))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Expected {
    Increasing,
    Decreasing,
}

impl Expected {
    pub fn name(self) -> &'static str {
        match self {
            Expected::Increasing => "increasing",
            Expected::Decreasing => "decreasing",
        }
    }

    fn sign(self) -> f64 {
        match self {
            Expected::Increasing => 1.0,
            Expected::Decreasing => -1.0,
        }
    }
}

/// Forward-difference sign check along `x` on every `ν` row of `grid`.
///
/// `margin` is the relative step in the expected direction; a violation is a
/// step opposing `expected` by more than `tol` plus the oracle error.
pub fn scan_monotone(q: Quantity, grid: &Grid, expected: Expected, tol: f64, cfg: &OracleConfig) -> ScanReport {
    let mut report = ScanReport::new(format!("{}-{}", q.id(), expected.name()));
    let table = if q.needs_oracle() { Some(oracle_table(grid, cfg)) } else { None };
    for (i, &nu) in grid.nu_values.iter().enumerate() {
        let mut prev: Option<(f64, f64)> = None;
        for (j, &x) in grid.x_values.iter().enumerate() {
            report.points_attempted += 1;
            let value = EvalPoint::new(nu, x).and_then(|p| match &table {
                Some(t) => t[i][j].as_ref().map_err(Clone::clone).and_then(|o| q.eval(p, Some(o))),
                None => q.eval(p, None),
            });
            let (v, err) = match value {
                Ok(v) => v,
                Err(e) => {
                    report.oracle_failures.push(OracleFailure { nu, x, message: e.to_string() });
                    prev = None;
                    continue;
                }
            };
            if let Some((u, err_u)) = prev {
                let scale = u.abs().max(v.abs()).max(f64::MIN_POSITIVE);
                let margin = expected.sign() * (v - u) / scale;
                let row = ReportRow { nu, x, bound: u, oracle: v, margin };
                report.push_row(row, margin < -(tol + err + err_u));
            }
            prev = Some((v, err));
        }
    }
    report
}

/// One monotonicity statement and the orders it is checked on.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCheck {
    pub quantity: Quantity,
    pub expected: Expected,
    pub nu_values: Vec<f64>,
}

impl MonotoneCheck {
    pub fn run(&self, grid: &Grid, tol: f64, cfg: &OracleConfig) -> ScanReport {
        let rows = Grid { nu_values: self.nu_values.clone(), ..grid.clone() };
        scan_monotone(self.quantity, &rows, self.expected, tol, cfg)
    }
}

/// Every monotonicity statement, with orders drawn from `grid` where the
/// statement covers a range.
pub fn monotonicity_suite(grid: &Grid) -> Vec<MonotoneCheck> {
    let rows = |keep: &dyn Fn(f64) -> bool| grid.nu_values.iter().copied().filter(|&v| keep(v)).collect::<Vec<_>>();
    let check = |quantity, expected, nu_values| MonotoneCheck { quantity, expected, nu_values };
    use Expected::*;
    vec![
        check(Quantity::Product, Decreasing, vec![-1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 5.0]),
        check(Quantity::XProduct, Increasing, vec![0.5, 1.0, 2.0, 5.0]),
        check(Quantity::Phi0, Decreasing, rows(&|v| v >= 0.5)),
        check(Quantity::XPhi0, Increasing, rows(&|v| v >= -1.0)),
        check(Quantity::Phi1, Decreasing, rows(&|v| v > 0.5)),
        check(Quantity::DoubleI, Increasing, vec![0.0, 0.5, 1.0, 2.0, 5.0]),
        check(Quantity::DoubleK, Decreasing, vec![0.0, 0.5, 1.0, 2.0, 5.0]),
        check(Quantity::WI, Increasing, rows(&|v| v > 0.0)),
        check(Quantity::WO, Increasing, rows(&|v| v > 0.0)),
        check(Quantity::WK, Decreasing, rows(&|v| v > 0.0)),
    ]
}

#[cfg(test)]
mod tests {
    use super::super::{log_space, MONOTONE_TOL};
    use super::*;

    fn grid(nu: &[f64]) -> Grid {
        Grid::new(nu.to_vec(), log_space(1e-3, 1e3, 61), "none").unwrap()
    }

    #[test]
    fn ids_round_trip() {
        for q in Quantity::ALL {
            assert_eq!(Quantity::from_id(q.id()).unwrap(), q);
        }
        assert!(Quantity::from_id("nope").is_err());
    }

    #[test]
    fn product_decreases_at_order_minus_one() {
        let r = scan_monotone(Quantity::Product, &grid(&[-1.0]), Expected::Decreasing, MONOTONE_TOL, &OracleConfig::default());
        assert_eq!(r.points_checked, 60);
        assert!(r.passed(), "{}", r.summary());
    }

    #[test]
    fn scaled_product_increases_at_half_order() {
        let r = scan_monotone(Quantity::XProduct, &grid(&[0.5]), Expected::Increasing, MONOTONE_TOL, &OracleConfig::default());
        assert!(r.passed(), "{}", r.summary());
    }

    #[test]
    fn w_k_decreases_at_order_two() {
        let r = scan_monotone(Quantity::WK, &grid(&[2.0]), Expected::Decreasing, MONOTONE_TOL, &OracleConfig::default());
        assert!(r.passed(), "{}", r.summary());
    }

    #[test]
    fn wrong_direction_is_flagged() {
        let r = scan_monotone(Quantity::Product, &grid(&[1.0]), Expected::Increasing, MONOTONE_TOL, &OracleConfig::default());
        assert_eq!(r.violations.len(), r.points_checked);
    }

    #[test]
    fn suite_rows_follow_the_stated_ranges() {
        let g = Grid::default_grid();
        for c in monotonicity_suite(&g) {
            assert!(!c.nu_values.is_empty(), "{:?}", c.quantity);
            match c.quantity {
                Quantity::Phi0 => assert!(c.nu_values.iter().all(|&v| v >= 0.5)),
                Quantity::Phi1 => assert!(c.nu_values.iter().all(|&v| v > 0.5)),
                Quantity::WI | Quantity::WO | Quantity::WK => assert!(c.nu_values.iter().all(|&v| v > 0.0)),
                _ => {}
            }
        }
    }
}
