use crate::expansions::Regime;
use crate::nullclines::{cubic_roots, RootBranch};
use crate::oracle::{Oracle, OraclePoint};
use crate::{EvalPoint, Error, Result};

/// Allowed distance between fitted and expected exponent.
pub const EXPONENT_TOL: f64 = 0.15;
/// Allowed relative distance between fitted and expected coefficient.
pub const COEFFICIENT_TOL: f64 = 0.10;

const MIN_SAMPLES: usize = 3;
const MIN_DECADES: f64 = 0.6;
/// A sample is trusted only when `eps` exceeds its error estimate this often.
const SIGNAL_FACTOR: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsSample {
    /// `x` in the small-x and large-x regimes, `ν` in the large-ν regime.
    pub scale: f64,
    pub eps: f64,
    /// Absolute error estimate of `eps` inherited from the oracle.
    pub oracle_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fit {
    /// Least-squares log–log slope.
    pub exponent: f64,
    /// `eps·scale^{−k}` averaged in log space, `k` the nearest integer to the slope.
    pub coefficient: f64,
    /// `exp` of the free least-squares intercept.
    pub coefficient_free: f64,
    pub snapped_exponent: f64,
    pub regime: Regime,
}

/// Fit `eps ≈ C·scale^e` by least squares in log–log coordinates.
pub fn fit_error_order(samples: &[EpsSample], regime: Regime) -> Result<Fit> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::Unfittable(format!("{} samples, need {MIN_SAMPLES}", samples.len())));
    }
    for s in samples {
        if !(s.scale > 0.0 && s.eps > 0.0 && s.eps.is_finite()) {
            return Err(Error::Unfittable(format!("eps {} at scale {} is not positive", s.eps, s.scale)));
        }
        if s.eps < SIGNAL_FACTOR * s.oracle_error {
            return Err(Error::Unfittable(format!(
                "eps {:.3e} at scale {} is below {SIGNAL_FACTOR}x the oracle error {:.3e}",
                s.eps, s.scale, s.oracle_error
            )));
        }
    }
    let lo = samples.iter().map(|s| s.scale).fold(f64::INFINITY, f64::min);
    let hi = samples.iter().map(|s| s.scale).fold(0.0, f64::max);
    if (hi / lo).log10() < MIN_DECADES - 1e-12 {
        return Err(Error::Unfittable(format!("scales span {:.3} decades, need {MIN_DECADES}", (hi / lo).log10())));
    }
    let n = samples.len() as f64;
    let pts: Vec<(f64, f64)> = samples.iter().map(|s| (s.scale.ln(), s.eps.ln())).collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let exponent = sxy / sxx;
    let snapped = exponent.round();
    let coefficient = (pts.iter().map(|p| p.1 - snapped * p.0).sum::<f64>() / n).exp();
    Ok(Fit {
        exponent,
        coefficient,
        coefficient_free: (my - exponent * mx).exp(),
        snapped_exponent: snapped,
        regime,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EpsQuantity {
    /// Relative error of the trigonometric upper bound on `I_{ν−1}/I_ν`.
    I,
    /// Relative error of the trigonometric upper bound on `K_{ν−1}/K_ν`.
    K,
    /// Relative error of the trigonometric lower bound on `I_ν K_ν`.
    P,
}

impl EpsQuantity {
    pub fn name(self) -> &'static str {
        match self {
            EpsQuantity::I => "eps_I",
            EpsQuantity::K => "eps_K",
            EpsQuantity::P => "eps_P",
        }
    }
}

/// The three relative errors at one point with absolute error estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpnessEps {
    pub i: f64,
    pub k: f64,
    pub p: f64,
    pub i_err: f64,
    pub k_err: f64,
    pub p_err: f64,
}

impl SharpnessEps {
    pub fn get(&self, q: EpsQuantity) -> (f64, f64) {
        match q {
            EpsQuantity::I => (self.i, self.i_err),
            EpsQuantity::K => (self.k, self.k_err),
            EpsQuantity::P => (self.p, self.p_err),
        }
    }
}

/// Relative errors of the trigonometric bounds, assembled from root offsets
/// and oracle gaps so that no leading terms cancel.
pub fn sharpness_eps(p: EvalPoint, o: &OraclePoint) -> Result<SharpnessEps> {
    let roots = cubic_roots(p)?;
    let x = p.x();
    let (_, i_red_err) = o.i_reduced();
    let r = o.k_magnitude.value;
    let num_i = roots.minus_nu(RootBranch::I) - o.psi_gap_i();
    let num_k = o.psi_gap_k() - roots.plus_nu(RootBranch::K);
    let gap = roots.lambda_i - roots.lambda_k;
    let eps = f64::EPSILON;
    let root_err = |v: f64| 8.0 * eps * v.abs();
    let i_abs = x * i_red_err + root_err(roots.minus_nu(RootBranch::I)) + eps * o.psi_gap_i();
    let k_abs = x * o.k_magnitude.est_error + root_err(roots.plus_nu(RootBranch::K));
    let i_den = x * o.i_ratio.value;
    Ok(SharpnessEps {
        i: num_i / i_den,
        k: num_k / (x * r),
        p: (num_i + num_k) / gap,
        i_err: i_abs / i_den + 4.0 * eps * (num_i / i_den).abs(),
        k_err: k_abs / (x * r) + 4.0 * eps * (num_k / (x * r)).abs(),
        p_err: (i_abs + k_abs) / gap + 4.0 * eps * ((num_i + num_k) / gap).abs(),
    })
}

/// One sharpness statement: `eps ≈ coefficient·scale^exponent` in a regime.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessCase {
    pub quantity: EpsQuantity,
    pub regime: Regime,
    /// `ν` for the `x` regimes, `x` for the large-ν regime.
    pub fixed: f64,
    pub scales: Vec<f64>,
    pub expected_exponent: f64,
    pub expected_coefficient: f64,
}

impl SharpnessCase {
    pub fn point(&self, scale: f64) -> Result<EvalPoint> {
        match self.regime {
            Regime::LargeNu => EvalPoint::new(scale, self.fixed),
            _ => EvalPoint::new(self.fixed, scale),
        }
    }

    pub fn label(&self) -> String {
        let fixed = if self.regime == Regime::LargeNu { "x" } else { "nu" };
        format!("{} {} {fixed}={}", self.quantity.name(), self.regime.name(), self.fixed)
    }
}

/// The seven regime statements checked by the sharpness command.
pub fn sharpness_cases() -> Vec<SharpnessCase> {
    let large_x = vec![25.0, 50.0, 100.0, 200.0];
    let small_x = vec![0.02, 0.04, 0.08, 0.16];
    let large_nu = vec![10.0, 20.0, 40.0];
    let case = |quantity, regime, fixed, scales: &Vec<f64>, e, c| SharpnessCase {
        quantity,
        regime,
        fixed,
        scales: scales.clone(),
        expected_exponent: e,
        expected_coefficient: c,
    };
    vec![
        case(EpsQuantity::I, Regime::LargeX, 1.0, &large_x, -2.0, 0.25),
        case(EpsQuantity::I, Regime::SmallX, 1.0, &small_x, 4.0, 1.0 / 192.0),
        case(EpsQuantity::I, Regime::LargeNu, 1.0, &large_nu, -6.0, 0.125),
        case(EpsQuantity::K, Regime::LargeX, 1.0, &large_x, -2.0, 0.25),
        case(EpsQuantity::K, Regime::LargeNu, 1.0, &large_nu, -4.0, 0.5),
        case(EpsQuantity::P, Regime::LargeX, 1.0, &large_x, -2.0, 0.25),
        case(EpsQuantity::P, Regime::LargeNu, 1.0, &large_nu, -6.0, 0.25),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessOutcome {
    pub case: SharpnessCase,
    pub samples: Vec<EpsSample>,
    pub fit: Result<Fit>,
}

impl SharpnessOutcome {
    pub fn passed(&self) -> bool {
        match &self.fit {
            Ok(f) => {
                (f.exponent - self.case.expected_exponent).abs() <= EXPONENT_TOL
                    && (f.coefficient / self.case.expected_coefficient - 1.0).abs() <= COEFFICIENT_TOL
            }
            Err(_) => false,
        }
    }

    pub fn summary(&self) -> String {
        let c = &self.case;
        let head = format!(
            "{}: expected exponent {} coefficient {:.6e}",
            c.label(),
            c.expected_exponent,
            c.expected_coefficient
        );
        match &self.fit {
            Ok(f) => format!(
                "{head}; fitted exponent {:.4} coefficient {:.6e} (free intercept {:.6e}); {}",
                f.exponent,
                f.coefficient,
                f.coefficient_free,
                if self.passed() { "pass" } else { "fail" }
            ),
            Err(e) => format!("{head}; {e}"),
        }
    }
}

/// Sample the relative error of one case and fit its order.
pub fn run_sharpness(case: &SharpnessCase, oracle: &Oracle) -> SharpnessOutcome {
    let samples: Result<Vec<EpsSample>> = case
        .scales
        .iter()
        .map(|&s| {
            let p = case.point(s)?;
            let (eps, oracle_error) = sharpness_eps(p, &oracle.point(p)?)?.get(case.quantity);
            Ok(EpsSample { scale: s, eps, oracle_error })
        })
        .collect();
    match samples {
        Ok(samples) => {
            let fit = fit_error_order(&samples, case.regime);
            SharpnessOutcome { case: case.clone(), samples, fit }
        }
        Err(e) => SharpnessOutcome { case: case.clone(), samples: Vec::new(), fit: Err(e) },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansions::relative_error;
    use crate::nullclines::{bound, BoundFamily, BoundSpec};
    use approx::assert_relative_eq;

    fn exact(scales: &[f64], c: f64, e: f64) -> Vec<EpsSample> {
        scales.iter().map(|&s| EpsSample { scale: s, eps: c * s.powf(e), oracle_error: 0.0 }).collect()
    }

    #[test]
    fn recovers_an_exact_power_law() {
        let f = fit_error_order(&exact(&[10.0, 20.0, 40.0, 80.0], 0.3, -2.0), Regime::LargeX).unwrap();
        assert_relative_eq!(f.exponent, -2.0, epsilon = 1e-12);
        assert_relative_eq!(f.coefficient, 0.3, max_relative = 1e-12);
        assert_relative_eq!(f.coefficient_free, 0.3, max_relative = 1e-10);
    }

    #[test]
    fn snapped_coefficient_ignores_a_slope_perturbation() {
        // eps = C s^e (1 + d/s): the free slope drifts but the snapped
        // coefficient stays near C
        let samples: Vec<EpsSample> = [10.0, 20.0, 40.0]
            .iter()
            .map(|&s: &f64| EpsSample { scale: s, eps: 0.5 * s.powi(-4) * (1.0 + 2.0 / s), oracle_error: 0.0 })
            .collect();
        let f = fit_error_order(&samples, Regime::LargeNu).unwrap();
        assert_eq!(f.snapped_exponent, -4.0);
        assert!((f.coefficient / 0.5 - 1.0).abs() < 0.12);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        let few = exact(&[10.0, 20.0], 1.0, -2.0);
        assert!(matches!(fit_error_order(&few, Regime::LargeX), Err(Error::Unfittable(_))));
        let narrow = exact(&[10.0, 11.0, 12.0, 13.0], 1.0, -2.0);
        assert!(fit_error_order(&narrow, Regime::LargeX).is_err());
        let mut neg = exact(&[10.0, 20.0, 40.0, 80.0], 1.0, -2.0);
        neg[2].eps = -1e-3;
        assert!(fit_error_order(&neg, Regime::LargeX).is_err());
        let mut noisy = exact(&[10.0, 20.0, 40.0, 80.0], 1.0, -2.0);
        noisy[3].oracle_error = noisy[3].eps / 50.0;
        assert!(fit_error_order(&noisy, Regime::LargeX).is_err());
    }

    #[test]
    fn accurate_routes_match_generic_relative_error() {
        // moderate points where the generic route has no cancellation trouble
        let o = Oracle::default();
        for (nu, x) in [(0.5, 1.0), (1.0, 2.0), (2.5, 0.7), (4.0, 5.0)] {
            let p = EvalPoint::new(nu, x).unwrap();
            let op = o.point(p).unwrap();
            let e = sharpness_eps(p, &op).unwrap();
            let bi = bound(BoundSpec::new(BoundFamily::TrigI), p).unwrap();
            let bk = bound(BoundSpec::new(BoundFamily::TrigK), p).unwrap();
            let bp = bound(BoundSpec::new(BoundFamily::ProductLowerTrig), p).unwrap();
            let gi = relative_error(bi.value, op.i_ratio.value, bi.direction);
            let gk = relative_error(bk.value, op.k_magnitude.value, bk.direction);
            let gp = relative_error(bp.value, op.product.value, bp.direction);
            assert!((e.i - gi).abs() <= 1e-9 * gi.abs() + 1e-13, "I at {nu},{x}: {} vs {gi}", e.i);
            assert!((e.k - gk).abs() <= 1e-9 * gk.abs() + 1e-13, "K at {nu},{x}: {} vs {gk}", e.k);
            assert!((e.p - gp).abs() <= 1e-9 * gp.abs() + 1e-13, "P at {nu},{x}: {} vs {gp}", e.p);
            assert!(e.i > 0.0 && e.k > 0.0 && e.p > 0.0);
        }
    }

    #[test]
    fn half_order_first_kind_error_uses_exact_ratio() {
        // Φ₀ = coth x at ν = 1/2
        for x in [0.03, 0.3, 1.0, 4.0, 40.0] {
            let p = EvalPoint::new(0.5, x).unwrap();
            let e = sharpness_eps(p, &Oracle::default().point(p).unwrap()).unwrap();
            let coth = 1.0 / x.tanh();
            let roots = cubic_roots(p).unwrap();
            let expect = (roots.lambda_i + 0.5) / (x * coth) - 1.0;
            assert!((e.i - expect).abs() <= 1e-12 + 1e-8 * expect, "x={x}: {} vs {expect}", e.i);
        }
    }

    #[test]
    fn case_table_shape() {
        let cases = sharpness_cases();
        assert_eq!(cases.len(), 7);
        for c in &cases {
            let p = c.point(c.scales[0]).unwrap();
            match c.regime {
                Regime::LargeNu => assert_eq!(p.x(), c.fixed),
                _ => assert_eq!(p.nu(), c.fixed),
            }
        }
    }
}
