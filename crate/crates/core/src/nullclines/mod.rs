//! Closed-form nullclines and bounds.
//!
//! Two families of curves are covered. The Amos-type nullclines
//! `λ⁺_{a,ν}(x) = (ν − (a+1)/2 + √((ν − (a+1)/2)² + x²))/x` of the Riccati
//! equation for `γ = x^{−a}Φ`, and the three real roots of the cubic
//! `λ³ + λ² − (ν² + x²)λ − ν² = 0` that govern the double-ratio equation.
//! Every bound built from them is returned as a [`Bound`] that carries its
//! own validity flag.

mod bounds;
mod cubic;

pub use bounds::{
    amos_bounds, bound, double_ratio_bounds, product_bounds, psi_bounds,
    product_lower_trig_closed_form, trig_bound_i, trig_bound_k, trig_upper_i_closed_form,
    trig_upper_k_closed_form, Bound, BoundFamily, BoundSpec, Direction, DoubleRatioBounds,
    ProductBounds, PsiBounds, Target,
};
pub use cubic::{cubic_residual, cubic_roots, w_values, CubicRoots, RootBranch, WValues};

use crate::{domain, EvalPoint, Result};

/// `ν − (a+1)/2`, the offset shared by `λ⁺_{a,ν}` and the nullcline extremum.
#[inline]
fn amos_shift(a: f64, nu: f64) -> f64 {
    nu - 0.5 * (a + 1.0)
}

fn check_exponent(a: f64) -> Result<()> {
    if a.is_finite() {
        Ok(())
    } else {
        domain(format!("exponent a must be finite, got {a}"))
    }
}

/// `λ⁺_{a,ν}(x)`; always strictly positive.
pub fn lambda_plus(a: f64, p: EvalPoint) -> Result<f64> {
    check_exponent(a)?;
    let (c, x) = (amos_shift(a, p.nu()), p.x());
    let r = c.hypot(x);
    Ok(if c >= 0.0 { (c + r) / x } else { x / (r - c) })
}

/// `1/λ⁺_{a,ν}(x)` evaluated without cancellation.
pub fn inv_lambda_plus(a: f64, p: EvalPoint) -> Result<f64> {
    check_exponent(a)?;
    let (c, x) = (amos_shift(a, p.nu()), p.x());
    let r = c.hypot(x);
    Ok(if c >= 0.0 { x / (c + r) } else { (r - c) / x })
}

/// The two nullclines `γ̂⁺ = x^{−a}λ⁺` and `γ̂⁻ = −x^{−a}/λ⁺`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaHat {
    pub plus: f64,
    pub minus: f64,
}

pub fn gamma_hat(a: f64, p: EvalPoint) -> Result<GammaHat> {
    let scale = p.x().powf(-a);
    Ok(GammaHat {
        plus: scale * lambda_plus(a, p)?,
        minus: -scale * inv_lambda_plus(a, p)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NullclineBranch {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullclineExtremum {
    pub location: f64,
    pub branch: NullclineBranch,
    pub kind: ExtremumKind,
}

/// Relative extremum of `γ̂^±_{a,ν}` for `0 < |a| < 1`.
///
/// With `x_e = −(√(1−a²)/a)(ν − (a+1)/2)`, the plus branch has its extremum at
/// `x_e` when `x_e > 0` and the minus branch at `−x_e` when `x_e < 0`. For
/// `a < 0` these are a minimum (plus) and a maximum (minus); for `a > 0` the
/// kinds swap. `None` when `x_e = 0`.
pub fn nullcline_extremum(a: f64, nu: f64) -> Result<Option<NullclineExtremum>> {
    if !(a.is_finite() && a != 0.0 && a.abs() < 1.0) {
        return domain(format!("extremum needs 0 < |a| < 1, got a={a}"));
    }
    if !nu.is_finite() {
        return domain(format!("order must be finite, got {nu}"));
    }
    let xe = -((1.0 - a * a).sqrt() / a) * amos_shift(a, nu);
    let (kind_plus, kind_minus) = if a < 0.0 {
        (ExtremumKind::Min, ExtremumKind::Max)
    } else {
        (ExtremumKind::Max, ExtremumKind::Min)
    };
    Ok(if xe > 0.0 {
        Some(NullclineExtremum { location: xe, branch: NullclineBranch::Plus, kind: kind_plus })
    } else if xe < 0.0 {
        Some(NullclineExtremum { location: -xe, branch: NullclineBranch::Minus, kind: kind_minus })
    } else {
        None
    })
}
