use std::f64::consts::PI;

use super::cubic::{cubic_roots, w_values, RootBranch};
use super::{inv_lambda_plus, lambda_plus};
use crate::{EvalPoint, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Upper,
    Lower,
}

/// The quantity a bound refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    /// `Φ₀ = I_{ν−1}/I_ν`.
    IRatio,
    /// `Φ₁ = −K_{ν−1}/K_ν` (signed, negative for `ν ≥ 1/2`).
    KRatio,
    /// `K_{ν−1}/K_ν = −Φ₁`.
    KRatioMagnitude,
    Product,
    DoubleRatioI,
    DoubleRatioK,
    PsiI,
    PsiK,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::IRatio => "I-ratio",
            Target::KRatio => "K-ratio",
            Target::KRatioMagnitude => "K-ratio-magnitude",
            Target::Product => "product",
            Target::DoubleRatioI => "double-ratio-I",
            Target::DoubleRatioK => "double-ratio-K",
            Target::PsiI => "psi-I",
            Target::PsiK => "psi-K",
        }
    }
}

/// A bound value with the range flag of the statement that produces it.
///
/// Outside the stated range `valid` is false but `value` is still the formula
/// value.
#[derive(Debug, Clone, PartialEq)]
pub struct Bound {
    pub value: f64,
    pub direction: Direction,
    pub target: Target,
    pub valid: bool,
    pub validity_note: &'static str,
}

impl Bound {
    fn new(value: f64, direction: Direction, target: Target, valid: bool, note: &'static str) -> Self {
        Self { value, direction, target, valid, validity_note: note }
    }
}

/// Every kind of bound this module can produce. The Amos families are
/// further parameterized by the exponent `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundFamily {
    AmosI,
    AmosK,
    TrigI,
    TrigK,
    ProductUpper,
    ProductLowerAmos,
    ProductLowerTrig,
    ProductLowerSimple,
    ProductLowerConjecture,
    DoubleRatioILower,
    DoubleRatioIUpper,
    DoubleRatioKLower,
    DoubleRatioKUpper,
    PsiILower,
    PsiIUpper,
    PsiKLower,
    PsiKUpper,
}

impl BoundFamily {
    pub const ALL: [BoundFamily; 17] = [
        BoundFamily::AmosI,
        BoundFamily::AmosK,
        BoundFamily::TrigI,
        BoundFamily::TrigK,
        BoundFamily::ProductUpper,
        BoundFamily::ProductLowerAmos,
        BoundFamily::ProductLowerTrig,
        BoundFamily::ProductLowerSimple,
        BoundFamily::ProductLowerConjecture,
        BoundFamily::DoubleRatioILower,
        BoundFamily::DoubleRatioIUpper,
        BoundFamily::DoubleRatioKLower,
        BoundFamily::DoubleRatioKUpper,
        BoundFamily::PsiILower,
        BoundFamily::PsiIUpper,
        BoundFamily::PsiKLower,
        BoundFamily::PsiKUpper,
    ];
}

/// A bound family together with its exponent (ignored outside the Amos
/// families).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSpec {
    pub family: BoundFamily,
    pub a: f64,
}

impl BoundSpec {
    pub fn new(family: BoundFamily) -> Self {
        Self { family, a: 0.0 }
    }

    pub fn amos(family: BoundFamily, a: f64) -> Self {
        Self { family, a }
    }

    pub fn eval(&self, p: EvalPoint) -> Result<Bound> {
        bound(*self, p)
    }
}

/// Evaluate a single bound.
pub fn bound(spec: BoundSpec, p: EvalPoint) -> Result<Bound> {
    use BoundFamily::*;
    Ok(match spec.family {
        AmosI => amos_bounds(p, spec.a)?.0,
        AmosK => amos_bounds(p, spec.a)?.1,
        TrigI => trig_bound_i(p)?,
        TrigK => trig_bound_k(p)?,
        ProductUpper => product_bounds(p)?.upper,
        ProductLowerAmos => product_bounds(p)?.lower_amos,
        ProductLowerTrig => product_bounds(p)?.lower_trig,
        ProductLowerSimple => product_bounds(p)?.lower_simple,
        ProductLowerConjecture => product_bounds(p)?.lower_conjecture,
        DoubleRatioILower => double_ratio_bounds(p)?.i_lower,
        DoubleRatioIUpper => double_ratio_bounds(p)?.i_upper,
        DoubleRatioKLower => double_ratio_bounds(p)?.k_lower,
        DoubleRatioKUpper => double_ratio_bounds(p)?.k_upper,
        PsiILower => psi_bounds(p)?.i_lower,
        PsiIUpper => psi_bounds(p)?.i_upper,
        PsiKLower => psi_bounds(p)?.k_lower,
        PsiKUpper => psi_bounds(p)?.k_upper,
    })
}

/// `U^(I) = (λ_I + ν)/x`, an upper bound on `I_{ν−1}/I_ν` for `ν ≥ 0`.
pub fn trig_bound_i(p: EvalPoint) -> Result<Bound> {
    let r = cubic_roots(p)?;
    Ok(Bound::new(
        r.plus_nu(RootBranch::I) / p.x(),
        Direction::Upper,
        Target::IRatio,
        p.nu() >= 0.0,
        "nu >= 0",
    ))
}

/// `U^(K) = −(λ_K + ν)/x`, an upper bound on `K_{ν−1}/K_ν` for `ν ≥ 0`.
pub fn trig_bound_k(p: EvalPoint) -> Result<Bound> {
    let r = cubic_roots(p)?;
    Ok(Bound::new(
        -r.plus_nu(RootBranch::K) / p.x(),
        Direction::Upper,
        Target::KRatioMagnitude,
        p.nu() >= 0.0,
        "nu >= 0",
    ))
}

/// Literal form `(2g/(3x))·cos(arccos(h/g³)/3) + (ν − 1/3)/x`.
pub fn trig_upper_i_closed_form(p: EvalPoint) -> Result<f64> {
    let r = cubic_roots(p)?;
    let (nu, x) = (p.nu(), p.x());
    Ok(2.0 * r.g / (3.0 * x) * (r.acos_arg.acos() / 3.0).cos() + (nu - 1.0 / 3.0) / x)
}

/// Literal form `(2g/(3x))·cos(arccos(h/g³)/3 − π/3) − (ν − 1/3)/x`.
pub fn trig_upper_k_closed_form(p: EvalPoint) -> Result<f64> {
    let r = cubic_roots(p)?;
    let (nu, x) = (p.nu(), p.x());
    Ok(2.0 * r.g / (3.0 * x) * (r.acos_arg.acos() / 3.0 - PI / 3.0).cos() - (nu - 1.0 / 3.0) / x)
}

/// Literal form `√3/(2g·sin(arccos(h/g³)/3 + π/3))`.
pub fn product_lower_trig_closed_form(p: EvalPoint) -> Result<f64> {
    let r = cubic_roots(p)?;
    Ok(3f64.sqrt() / (2.0 * r.g * (r.acos_arg.acos() / 3.0 + PI / 3.0).sin()))
}

/// Amos-type bounds `(on Φ₀, on Φ₁)` with exponent `a`.
///
/// `a = 0`: `Φ₀ > λ⁺` for `ν ≥ 1/2` and `Φ₁ < −1/λ⁺` for `ν > 1/2` (equality
/// at `ν = 1/2`). `a = −1`: `Φ₀ < λ⁺` for `ν ≥ −1`. `a = 1`: `Φ₁ > −1/λ⁺` for
/// all `ν`. `|a| > 1`: `a(Φ₀ − λ⁺) > 0` for `ν ≥ 0` and `a(Φ₁ + 1/λ⁺) > 0` for
/// all `ν`. Any other combination is returned with `valid = false`, its
/// direction following the sign of `a`.
pub fn amos_bounds(p: EvalPoint, a: f64) -> Result<(Bound, Bound)> {
    let nu = p.nu();
    let li = lambda_plus(a, p)?;
    let lk = -inv_lambda_plus(a, p)?;
    let (dir_i, dir_k) = if a == 0.0 {
        (Direction::Lower, Direction::Upper)
    } else if a > 0.0 {
        (Direction::Lower, Direction::Lower)
    } else {
        (Direction::Upper, Direction::Upper)
    };
    let (valid_i, note_i) = if a == 0.0 {
        (nu >= 0.5, "a = 0: nu >= 1/2")
    } else if a == -1.0 {
        (nu >= -1.0, "a = -1: nu >= -1")
    } else if a.abs() > 1.0 {
        (nu >= 0.0, "|a| > 1: nu >= 0")
    } else {
        (false, "no bound stated for this exponent")
    };
    let (valid_k, note_k) = if a == 0.0 {
        (nu > 0.5, "a = 0: nu > 1/2 (equality at nu = 1/2)")
    } else if a == 1.0 {
        (true, "a = 1: all real nu")
    } else if a.abs() > 1.0 {
        (true, "|a| > 1: all real nu")
    } else {
        (false, "no bound stated for this exponent")
    };
    Ok((
        Bound::new(li, dir_i, Target::IRatio, valid_i, note_i),
        Bound::new(lk, dir_k, Target::KRatio, valid_k, note_k),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductBounds {
    pub upper: Bound,
    pub lower_amos: Bound,
    pub lower_trig: Bound,
    pub lower_simple: Bound,
    /// The `1/5` form; never marked valid since it is not proved.
    pub lower_conjecture: Bound,
}

pub fn product_bounds(p: EvalPoint) -> Result<ProductBounds> {
    let (nu, x) = (p.nu(), p.x());
    let r = cubic_roots(p)?;
    let simple = |b: f64| 0.5 / x.mul_add(x, nu.mul_add(nu, b)).sqrt();
    Ok(ProductBounds {
        upper: Bound::new(
            0.5 / (nu - 0.5).hypot(x),
            Direction::Upper,
            Target::Product,
            nu >= 0.5,
            "nu >= 1/2",
        ),
        lower_amos: Bound::new(
            1.0 / (1.0 + nu.hypot(x) + (nu - 1.0).hypot(x)),
            Direction::Lower,
            Target::Product,
            nu >= -1.0,
            "nu >= -1",
        ),
        lower_trig: Bound::new(
            1.0 / (r.lambda_i - r.lambda_k),
            Direction::Lower,
            Target::Product,
            nu >= 0.0,
            "nu >= 0",
        ),
        lower_simple: Bound::new(simple(1.0 / 3.0), Direction::Lower, Target::Product, nu >= 0.0, "nu >= 0"),
        lower_conjecture: Bound::new(
            simple(0.2),
            Direction::Lower,
            Target::Product,
            false,
            "conjectural; nominal range nu >= -1",
        ),
    })
}

/// `0 < W^I < w_I` and `0 < W^K < w_K`, both for `ν ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubleRatioBounds {
    pub i_lower: Bound,
    pub i_upper: Bound,
    pub k_lower: Bound,
    pub k_upper: Bound,
}

pub fn double_ratio_bounds(p: EvalPoint) -> Result<DoubleRatioBounds> {
    let w = w_values(p)?;
    let valid = p.nu() >= 0.0;
    Ok(DoubleRatioBounds {
        i_lower: Bound::new(0.0, Direction::Lower, Target::DoubleRatioI, valid, "nu >= 0"),
        i_upper: Bound::new(w.w_i, Direction::Upper, Target::DoubleRatioI, valid, "nu >= 0"),
        k_lower: Bound::new(0.0, Direction::Lower, Target::DoubleRatioK, valid, "nu >= 0"),
        k_upper: Bound::new(w.w_k, Direction::Upper, Target::DoubleRatioK, valid, "nu >= 0"),
    })
}

/// `ν < ψ_I < λ_I` and `λ_K < ψ_K < −ν`, both for `ν ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiBounds {
    pub i_lower: Bound,
    pub i_upper: Bound,
    pub k_lower: Bound,
    pub k_upper: Bound,
}

pub fn psi_bounds(p: EvalPoint) -> Result<PsiBounds> {
    let r = cubic_roots(p)?;
    let nu = p.nu();
    let valid = nu >= 0.0;
    Ok(PsiBounds {
        i_lower: Bound::new(nu, Direction::Lower, Target::PsiI, valid, "nu >= 0"),
        i_upper: Bound::new(r.lambda_i, Direction::Upper, Target::PsiI, valid, "nu >= 0"),
        k_lower: Bound::new(r.lambda_k, Direction::Lower, Target::PsiK, valid, "nu >= 0"),
        k_upper: Bound::new(-nu, Direction::Upper, Target::PsiK, valid, "nu >= 0"),
    })
}
