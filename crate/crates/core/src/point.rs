use crate::{domain, Result};

/// An (order, argument) pair with `x > 0` and finite `nu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint {
    nu: f64,
    x: f64,
}

impl EvalPoint {
    pub fn new(nu: f64, x: f64) -> Result<Self> {
        if !nu.is_finite() {
            return domain(format!("order must be finite, got {nu}"));
        }
        if !x.is_finite() || x <= 0.0 {
            return domain(format!("argument must be finite and positive, got {x}"));
        }
        Ok(Self { nu, x })
    }

    #[inline]
    pub fn nu(&self) -> f64 {
        self.nu
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    /// Same argument, order shifted by `dnu`.
    pub fn shift_order(&self, dnu: f64) -> Result<Self> {
        Self::new(self.nu + dnu, self.x)
    }

    /// True when `2ν` is an odd integer.
    pub fn is_half_integer(&self) -> bool {
        is_half_integer(self.nu)
    }

    pub fn is_integer_order(&self) -> bool {
        self.nu.fract() == 0.0
    }
}

pub(crate) fn is_half_integer(nu: f64) -> bool {
    let twice = 2.0 * nu;
    twice.fract() == 0.0 && (twice.abs() % 2.0) == 1.0
}
