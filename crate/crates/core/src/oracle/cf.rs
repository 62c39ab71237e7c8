use crate::{Error, Result};

/// Outcome of a continued-fraction evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct CfValue {
    pub value: f64,
    /// Relative size of the last Lentz correction.
    pub last_delta: f64,
    pub iterations: usize,
}

/// `Φ_ν(x) = I_{ν−1}(x)/I_ν(x)` for `ν ≥ 0` via modified Lentz on
/// `2ν/x + 1/(2(ν+1)/x + 1/(2(ν+2)/x + ⋯))`.
pub(crate) fn first_kind_cf(nu: f64, x: f64, tol: f64, tiny: f64, max_iter: usize) -> Result<CfValue> {
    let b = |j: usize| 2.0 * (nu + j as f64) / x;
    let mut f = b(0);
    if f == 0.0 {
        f = tiny;
    }
    let (mut c, mut d) = (f, 0.0);
    for j in 1..=max_iter {
        let bj = b(j);
        d += bj;
        if d == 0.0 {
            d = tiny;
        }
        c = bj + 1.0 / c;
        if c == 0.0 {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < tol {
            return Ok(CfValue { value: f, last_delta: (delta - 1.0).abs(), iterations: j });
        }
    }
    Err(Error::NonConvergence { nu, x, iterations: max_iter })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cf(nu: f64, x: f64) -> f64 {
        first_kind_cf(nu, x, 1e-15, 1e-300, 1_000_000).unwrap().value
    }

    #[test]
    fn half_order_is_coth() {
        for x in [0.01, 0.5, 1.0, 7.0, 300.0] {
            assert_relative_eq!(cf(0.5, x), 1.0 / x.tanh(), max_relative = 1e-14);
        }
    }

    #[test]
    fn order_zero_starts_from_tiny() {
        // Φ_0 = I_{-1}/I_0 = I_1/I_0 ≈ x/2 for small x
        assert_relative_eq!(cf(0.0, 1e-4), 5e-5, max_relative = 1e-8);
    }

    #[test]
    fn iteration_cap_is_reported() {
        let e = first_kind_cf(0.0, 1e4, 1e-15, 1e-300, 10).unwrap_err();
        assert!(matches!(e, Error::NonConvergence { iterations: 10, .. }));
    }
}
