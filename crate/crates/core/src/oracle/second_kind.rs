use crate::ode::{Halt, OdeOptions, Solver};
use crate::point::is_half_integer;
use crate::{Error, Result};

use super::{Method, OracleConfig, OracleResult};

/// `r_ν = K_{ν−1}/K_ν` for `2ν` odd and `ν ≥ 1/2`, by the upward recurrence
/// `r_{ν+1} = 1/(r_ν + 2ν/x)` from `r_{1/2} = 1`.
pub(crate) fn half_integer_ratio(nu: f64, x: f64) -> OracleResult {
    debug_assert!(is_half_integer(nu) && nu > 0.0);
    let mut r = 1.0;
    let mut m = 0.5;
    let mut steps = 0usize;
    while m < nu {
        r = 1.0 / (r + 2.0 * m / x);
        m += 1.0;
        steps += 1;
    }
    OracleResult {
        value: r,
        est_error: 4.0 * f64::EPSILON * (steps as f64 + 1.0) * r,
        method: Method::HalfIntegerRecurrence,
    }
}

/// Large-x seed `K_{ν−1}/K_ν ≈ 1 − (ν−1/2)/x + (ν²−1/4)/(2x²)`.
fn seed(nu: f64, x: f64) -> f64 {
    1.0 - (nu - 0.5) / x + (nu * nu - 0.25) / (2.0 * x * x)
}

fn integration_error(h: Halt) -> Error {
    match h {
        Halt::BlowUp { x, y } => Error::Integration { x, reason: format!("blow-up (|y| = {:e})", y.abs()) },
        Halt::StepFailure { x } => Error::Integration { x, reason: "step-size underflow".into() },
    }
}

/// `K_{ν−1}/K_ν` for `ν ≥ 0` at every `x` in `xs`, from a single backward
/// integration of `r' = r² + ((2ν−1)/x)r − 1`.
pub(crate) fn backward_riccati_row(nu: f64, xs: &[f64], cfg: &OracleConfig) -> Vec<Result<OracleResult>> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[b].total_cmp(&xs[a]));
    let mut out: Vec<Result<OracleResult>> = vec![Err(Error::Grid("not evaluated".into())); xs.len()];
    let Some(&first) = order.first() else { return out };
    let x_start = cfg.x_start_floor.max(cfg.x_start_factor * (nu + 1.0)).max(2.0 * xs[first]);
    let opts = OdeOptions { rtol: cfg.ode_rtol, ..OdeOptions::default() };
    let a = 2.0 * nu - 1.0;
    let mut solver = Solver::new(move |x, r| r * r + (a / x) * r - 1.0, x_start, seed(nu, x_start), -1.0, opts);
    let mut failure: Option<Error> = None;
    for idx in order {
        let x = xs[idx];
        if let Some(e) = &failure {
            out[idx] = Err(e.clone());
            continue;
        }
        out[idx] = match solver.advance_to(x) {
            Ok(()) => Ok(OracleResult {
                value: solver.y(),
                est_error: cfg.ode_error_factor * cfg.ode_rtol * solver.y().abs(),
                method: Method::BackwardRiccati,
            }),
            Err(h) => {
                let e = integration_error(h);
                failure = Some(e.clone());
                Err(e)
            }
        };
    }
    out
}
