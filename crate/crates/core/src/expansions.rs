//! Truncated small-x, large-x and large-ν expansions.
//!
//! Each function returns exactly the printed terms, tagged with the order of
//! the omitted remainder.

use crate::nullclines::Direction;
use crate::oracle::RatioKind;
use crate::{domain, EvalPoint, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    LargeX,
    SmallX,
    LargeNu,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::LargeX => "large-x",
            Regime::SmallX => "small-x",
            Regime::LargeNu => "large-nu",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExpansionKind {
    IRatio,
    KRatio,
    DoubleI,
    DoubleK,
    Product,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub value: f64,
    pub order_tag: &'static str,
    pub regime: Regime,
    pub kind: ExpansionKind,
}

fn expansion(value: f64, order_tag: &'static str, regime: Regime, kind: ExpansionKind) -> Expansion {
    Expansion { value, order_tag, regime, kind }
}

fn is_natural(nu: f64) -> bool {
    nu >= 1.0 && nu.fract() == 0.0
}

/// `I_{ν−1}/I_ν ≈ 1 + (ν−1/2)/x + (ν²−1/4)/(2x²)` and
/// `K_{ν−1}/K_ν ≈ 1 − (ν−1/2)/x + (ν²−1/4)/(2x²)`.
pub fn large_x_ratio(kind: RatioKind, p: EvalPoint) -> Expansion {
    let (nu, x) = (p.nu(), p.x());
    let a = (nu - 0.5) / x;
    let b = (nu * nu - 0.25) / (2.0 * x * x);
    match kind {
        RatioKind::FirstKind => expansion(1.0 + a + b, "O(x^-3)", Regime::LargeX, ExpansionKind::IRatio),
        RatioKind::SecondKind => expansion(1.0 - a + b, "O(x^-3)", Regime::LargeX, ExpansionKind::KRatio),
    }
}

/// `W ≈ 1 ∓ 1/x ± (ν²−1/4)/(2x³)`, upper sign for the first kind.
pub fn large_x_double(kind: RatioKind, p: EvalPoint) -> Expansion {
    let (nu, x) = (p.nu(), p.x());
    let c = (nu * nu - 0.25) / (2.0 * x * x * x);
    match kind {
        RatioKind::FirstKind => expansion(1.0 - 1.0 / x + c, "O(x^-4)", Regime::LargeX, ExpansionKind::DoubleI),
        RatioKind::SecondKind => expansion(1.0 + 1.0 / x - c, "O(x^-4)", Regime::LargeX, ExpansionKind::DoubleK),
    }
}

/// `(x·I_{ν−1}/I_ν, W^I)` near the origin, `ν ≥ 0`.
pub fn small_x_i(p: EvalPoint) -> Result<(Expansion, Expansion)> {
    let (nu, x) = (p.nu(), p.x());
    if nu < 0.0 {
        return domain(format!("small-x first-kind series needs nu >= 0, got {nu}"));
    }
    let x2 = x * x;
    let n1 = nu + 1.0;
    let ratio = 2.0 * nu + x2 / (2.0 * n1) - x2 * x2 / (8.0 * n1 * n1 * (nu + 2.0));
    let double = nu / n1 + x2 / (2.0 * n1 * n1 * (nu + 2.0));
    Ok((
        expansion(ratio, "O(x^6)", Regime::SmallX, ExpansionKind::IRatio),
        expansion(double, "O(x^4)", Regime::SmallX, ExpansionKind::DoubleI),
    ))
}

/// `x·K_{ν−1}/K_ν` near the origin.
///
/// For `ν > 1` (non-integer) the two printed terms; for `0 < ν < 1` only the
/// order statement, returned as value 0.
pub fn small_x_k(p: EvalPoint) -> Result<Expansion> {
    let (nu, x) = (p.nu(), p.x());
    if nu <= 0.0 || nu.fract() == 0.0 {
        return domain(format!("small-x second-kind series needs nu > 0 non-integer, got {nu}"));
    }
    if nu < 1.0 {
        return Ok(expansion(0.0, "O(x^{2nu})", Regime::SmallX, ExpansionKind::KRatio));
    }
    let x2 = x * x;
    let m = nu - 1.0;
    let value = x2 / (2.0 * m) - x2 * x2 / (8.0 * m * m * (nu - 2.0));
    Ok(expansion(value, "O(x^8)", Regime::SmallX, ExpansionKind::KRatio))
}

/// `x·I_{ν−1}/I_ν` or `x·K_{ν−1}/K_ν` as `ν → ∞` with `x` fixed.
pub fn large_nu_ratio(kind: RatioKind, p: EvalPoint) -> Expansion {
    let (nu, x) = (p.nu(), p.x());
    let x2 = x * x;
    let x4 = x2 * x2;
    let t1 = x2 / (2.0 * nu);
    let t2 = x2 / (2.0 * nu * nu);
    let t3 = (x4 - 4.0 * x2) / (8.0 * nu.powi(3));
    let t4 = (x4 - x2) / (2.0 * nu.powi(4));
    match kind {
        RatioKind::FirstKind => {
            expansion(2.0 * nu + t1 - t2 - t3 + t4, "O(nu^-5)", Regime::LargeNu, ExpansionKind::IRatio)
        }
        RatioKind::SecondKind => expansion(t1 + t2 - t3 - t4, "O(nu^-5)", Regime::LargeNu, ExpansionKind::KRatio),
    }
}

/// `I_ν K_ν` in the given regime.
pub fn product_expansion(regime: Regime, p: EvalPoint) -> Result<Expansion> {
    let (nu, x) = (p.nu(), p.x());
    Ok(match regime {
        Regime::LargeX => expansion(
            0.5 / x - (nu * nu - 0.25) / (4.0 * x * x * x),
            "O(x^-5)",
            regime,
            ExpansionKind::Product,
        ),
        Regime::SmallX => {
            if is_natural(nu) || nu == 0.0 {
                return domain(format!("small-x product series excludes integer orders, got {nu}"));
            }
            let value = 0.5 / nu - x * x / (4.0 * nu * (nu * nu - 1.0));
            expansion(value, "(1 + O(x^{2nu}))", regime, ExpansionKind::Product)
        }
        Regime::LargeNu => {
            expansion(0.5 / nu - x * x / (4.0 * nu.powi(3)), "O(nu^-5)", regime, ExpansionKind::Product)
        }
    })
}

/// `bound/oracle − 1` for upper bounds, `1 − bound/oracle` for lower bounds.
pub fn relative_error(bound: f64, oracle: f64, direction: Direction) -> f64 {
    match direction {
        Direction::Upper => bound / oracle - 1.0,
        Direction::Lower => 1.0 - bound / oracle,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{Oracle, OraclePoint};
    use approx::assert_relative_eq;

    fn pt(nu: f64, x: f64) -> EvalPoint {
        EvalPoint::new(nu, x).unwrap()
    }

    fn oracle(nu: f64, x: f64) -> OraclePoint {
        Oracle::default().point(pt(nu, x)).unwrap()
    }

    #[test]
    fn large_x_ratio_examples() {
        assert_eq!(large_x_ratio(RatioKind::FirstKind, pt(0.5, 10.0)).value, 1.0);
        assert_relative_eq!(large_x_ratio(RatioKind::SecondKind, pt(1.5, 10.0)).value, 0.91, max_relative = 1e-15);
        assert_relative_eq!(
            large_x_ratio(RatioKind::FirstKind, pt(1.0, 100.0)).value,
            1.0 + 0.005 + 0.000_037_5,
            max_relative = 1e-15
        );
    }

    #[test]
    fn large_x_double_examples() {
        assert_relative_eq!(large_x_double(RatioKind::FirstKind, pt(0.5, 10.0)).value, 0.9, max_relative = 1e-15);
        assert_relative_eq!(large_x_double(RatioKind::SecondKind, pt(0.5, 10.0)).value, 1.1, max_relative = 1e-15);
        assert_relative_eq!(
            large_x_double(RatioKind::FirstKind, pt(2.0, 10.0)).value,
            1.0 - 0.1 + 3.75 / 2000.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn small_x_i_examples() {
        // 0.01/2 − 1e-4/16
        let (r, _) = small_x_i(pt(0.0, 0.1)).unwrap();
        assert_relative_eq!(r.value, 0.004_993_75, max_relative = 1e-14);
        let (_, d) = small_x_i(pt(1.0, 1e-8)).unwrap();
        assert_relative_eq!(d.value, 0.5, max_relative = 1e-15);
        let (_, d) = small_x_i(pt(0.0, 1e-8)).unwrap();
        assert!(d.value < 1e-15);
        // I_0 I_2/I_1² at x = 0.01 from 40-digit arithmetic
        let (_, d) = small_x_i(pt(1.0, 0.01)).unwrap();
        assert_relative_eq!(d.value, 0.5 + 1e-4 / 24.0, max_relative = 1e-15);
        assert!((d.value - 0.500_004_166_627_604_5).abs() < 1e-10);
        assert!(small_x_i(pt(-0.5, 0.1)).is_err());
    }

    #[test]
    fn small_x_k_examples() {
        let e = small_x_k(pt(2.5, 0.1)).unwrap();
        assert_relative_eq!(e.value, 0.01 / 3.0 - 1e-4 / 9.0, max_relative = 1e-14);
        assert_relative_eq!(e.value, 0.003_322_2, max_relative = 1e-5);
        assert!(small_x_k(pt(3.0, 0.1)).is_err());
        let e = small_x_k(pt(0.5, 0.1)).unwrap();
        assert_eq!((e.value, e.order_tag), (0.0, "O(x^{2nu})"));
    }

    #[test]
    fn large_nu_examples() {
        let e = large_nu_ratio(RatioKind::FirstKind, pt(100.0, 1.0));
        let expect = 200.0 + 0.005 - 0.000_05 + 3.0 / 8e6 + 0.0;
        assert_relative_eq!(e.value, expect, max_relative = 1e-15);
        let e = large_nu_ratio(RatioKind::SecondKind, pt(100.0, 1.0));
        assert_relative_eq!(e.value, 0.005 + 0.000_05 + 3.0 / 8e6, max_relative = 1e-15);
        let tiny = 1e-160;
        assert_eq!(large_nu_ratio(RatioKind::FirstKind, pt(7.0, tiny)).value, 14.0);
        assert!(large_nu_ratio(RatioKind::SecondKind, pt(7.0, tiny)).value < 1e-300);
    }

    #[test]
    fn product_expansion_examples() {
        assert_eq!(product_expansion(Regime::LargeX, pt(0.5, 10.0)).unwrap().value, 0.05);
        assert_relative_eq!(
            product_expansion(Regime::LargeNu, pt(100.0, 1.0)).unwrap().value,
            0.005 - 2.5e-7,
            max_relative = 1e-15
        );
        let v = product_expansion(Regime::SmallX, pt(2.5, 0.1)).unwrap().value;
        assert_relative_eq!(v, 0.2 - 0.01 / (4.0 * 2.5 * 5.25), max_relative = 1e-15);
        assert!((v - 0.19981).abs() < 1e-5);
        assert!(product_expansion(Regime::SmallX, pt(1.0, 0.1)).is_err());
        assert!(product_expansion(Regime::SmallX, pt(4.0, 0.1)).is_err());
    }

    #[test]
    fn relative_error_examples() {
        assert_eq!(relative_error(2.0, 2.0, Direction::Upper), 0.0);
        assert_relative_eq!(relative_error(1.01, 1.0, Direction::Upper), 0.01, max_relative = 1e-12);
        assert_relative_eq!(relative_error(0.99, 1.0, Direction::Lower), 0.01, max_relative = 1e-12);
    }

    #[test]
    fn ratio_expansions_differ_by_twice_the_first_correction() {
        for (nu, x) in [(0.0, 3.0), (1.0, 100.0), (7.25, 0.5), (-1.0, 20.0)] {
            let p = pt(nu, x);
            let d = large_x_ratio(RatioKind::FirstKind, p).value - large_x_ratio(RatioKind::SecondKind, p).value;
            let expect = 2.0 * (nu - 0.5) / x;
            assert!((d - expect).abs() <= 4.0 * f64::EPSILON * (1.0 + expect.abs()), "nu={nu} x={x}");
        }
    }

    // Each expansion is checked against the oracle at a point of its regime,
    // with the next-order term magnitude as the yardstick.

    #[test]
    fn large_x_expansions_track_oracle() {
        let (nu, x) = (1.0, 100.0);
        let o = oracle(nu, x);
        // next terms: (ν²−1/4)/(2x³) for the ratios, O(x⁻⁴) for W, O(x⁻⁵) for P
        let next3 = (nu * nu - 0.25) / (2.0 * x.powi(3));
        let e = large_x_ratio(RatioKind::FirstKind, pt(nu, x)).value;
        assert!((e / o.i_ratio.value - 1.0).abs() <= 10.0 * next3);
        let e = large_x_ratio(RatioKind::SecondKind, pt(nu, x)).value;
        assert!((e / o.k_magnitude.value - 1.0).abs() <= 10.0 * next3);
        let next4 = x.powi(-4);
        let e = large_x_double(RatioKind::FirstKind, pt(nu, x)).value;
        assert!((e / o.w_i() - 1.0).abs() <= 10.0 * next4);
        let e = large_x_double(RatioKind::SecondKind, pt(nu, x)).value;
        assert!((e / o.w_k() - 1.0).abs() <= 10.0 * next4);
        let e = product_expansion(Regime::LargeX, pt(nu, x)).unwrap().value;
        assert!((e / o.product.value - 1.0).abs() <= 10.0 * x.powi(-4));
    }

    #[test]
    fn small_x_expansions_track_oracle() {
        let x: f64 = 1e-2;
        for nu in [0.0, 0.5, 1.0, 2.5] {
            let o = oracle(nu, x);
            let (r, d) = small_x_i(pt(nu, x)).unwrap();
            let xphi = x * o.i_ratio.value;
            assert!((r.value / xphi - 1.0).abs() <= 10.0 * x.powi(6) / xphi.max(x * x), "nu={nu}");
            assert!((d.value - o.w_i()).abs() <= 10.0 * x.powi(4), "nu={nu}");
        }
        for nu in [2.5, 3.5, 4.25] {
            let o = oracle(nu, x);
            let e = small_x_k(pt(nu, x)).unwrap().value;
            let exact = x * o.k_magnitude.value;
            // relative remainder O(x^{2(ν−1)}) from the reflection term plus O(x⁴)
            let next = x.powf(2.0 * (nu - 1.0)) + x.powi(4);
            assert!((e / exact - 1.0).abs() <= 10.0 * next, "nu={nu}");
        }
        for nu in [2.5, 3.5] {
            let o = oracle(nu, x);
            let e = product_expansion(Regime::SmallX, pt(nu, x)).unwrap().value;
            assert!((e / o.product.value - 1.0).abs() <= 10.0 * (x.powi(4) + x.powf(2.0 * nu)), "nu={nu}");
        }
    }

    #[test]
    fn large_nu_expansions_track_oracle() {
        let (nu, x) = (50.0, 1.0);
        let o = oracle(nu, x);
        let next = nu.powi(-5);
        let e = large_nu_ratio(RatioKind::FirstKind, pt(nu, x)).value;
        assert!((e - x * o.i_ratio.value).abs() <= 10.0 * next);
        let e = large_nu_ratio(RatioKind::SecondKind, pt(nu, x)).value;
        assert!((e - x * o.k_magnitude.value).abs() <= 10.0 * next);
        let e = product_expansion(Regime::LargeNu, pt(nu, x)).unwrap().value;
        assert!((e - o.product.value).abs() <= 10.0 * next);
    }
}
