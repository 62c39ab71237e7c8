use bessel_bounds::nullclines::{
    bound, cubic_roots, gamma_hat, nullcline_extremum, product_bounds, BoundFamily, BoundSpec, ExtremumKind,
    NullclineBranch,
};
use bessel_bounds::oracle::OracleConfig;
use bessel_bounds::verify::{log_space, scan_monotone, Expected, Grid, Quantity, MONOTONE_TOL};
use bessel_bounds::EvalPoint;

fn pt(nu: f64, x: f64) -> EvalPoint {
    EvalPoint::new(nu, x).unwrap()
}

const ORDERS: [f64; 8] = [-1.0, -0.5, 0.0, 0.25, 0.5, 1.0, 3.0, 10.0];

/// Sign of every forward difference of `f` over `xs`: +1, −1, or 0 when
/// they are all within `1e-12` relative of zero.
fn trend(xs: &[f64], f: impl Fn(f64) -> f64) -> i32 {
    let v: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let steps: Vec<f64> = v.windows(2).map(|w| (w[1] - w[0]) / w[0].abs().max(w[1].abs())).collect();
    if steps.iter().all(|d| d.abs() <= 1e-12) {
        0
    } else if steps.iter().all(|&d| d > -1e-12) {
        1
    } else if steps.iter().all(|&d| d < 1e-12) {
        -1
    } else {
        2
    }
}

#[test]
fn gamma_hat_branches_are_monotone_for_large_exponents() {
    let xs = log_space(1e-2, 1e2, 81);
    for nu in ORDERS {
        for a in [-3.0, -2.0, -1.5, -1.0] {
            assert_eq!(trend(&xs, |x| gamma_hat(a, pt(nu, x)).unwrap().plus), 1, "a={a} nu={nu}");
            assert_eq!(trend(&xs, |x| gamma_hat(a, pt(nu, x)).unwrap().minus), -1, "a={a} nu={nu}");
        }
        for a in [1.0, 1.5, 2.0, 3.0] {
            assert_eq!(trend(&xs, |x| gamma_hat(a, pt(nu, x)).unwrap().plus), -1, "a={a} nu={nu}");
            assert_eq!(trend(&xs, |x| gamma_hat(a, pt(nu, x)).unwrap().minus), 1, "a={a} nu={nu}");
        }
    }
}

#[test]
fn gamma_hat_at_zero_exponent_turns_on_half_order() {
    let xs = log_space(1e-2, 1e2, 81);
    for nu in ORDERS {
        let expect = if nu > 0.5 {
            -1
        } else if nu < 0.5 {
            1
        } else {
            0
        };
        assert_eq!(trend(&xs, |x| gamma_hat(0.0, pt(nu, x)).unwrap().plus), expect, "nu={nu}");
        // −1/λ moves with λ
        assert_eq!(trend(&xs, |x| gamma_hat(0.0, pt(nu, x)).unwrap().minus), expect, "nu={nu}");
    }
}

#[test]
fn intermediate_exponents_have_one_extremum_where_stated() {
    let xs = log_space(1e-3, 1e3, 4001);
    for a in [-0.75, -0.5, -0.25, 0.25, 0.5, 0.75] {
        for nu in [-0.5, 0.2, 2.0, 6.0] {
            let Some(e) = nullcline_extremum(a, nu).unwrap() else { continue };
            let pick = |x: f64| {
                let g = gamma_hat(a, pt(nu, x)).unwrap();
                match e.branch {
                    NullclineBranch::Plus => g.plus,
                    NullclineBranch::Minus => g.minus,
                }
            };
            let v: Vec<f64> = xs.iter().map(|&x| pick(x)).collect();
            let i = match e.kind {
                ExtremumKind::Min => (0..v.len()).min_by(|&i, &j| v[i].total_cmp(&v[j])).unwrap(),
                ExtremumKind::Max => (0..v.len()).max_by(|&i, &j| v[i].total_cmp(&v[j])).unwrap(),
            };
            assert!(i > 0 && i < v.len() - 1, "a={a} nu={nu}: extremum at the window edge");
            assert!((xs[i] / e.location - 1.0).abs() < 5e-3, "a={a} nu={nu}: {} vs {}", xs[i], e.location);
        }
    }
}

#[test]
fn roots_move_monotonically_in_x() {
    let grid = Grid::new(vec![-2.5, 0.0, 0.5, 1.0, 4.0, 20.0], log_space(1e-3, 1e3, 121), "none").unwrap();
    let cfg = OracleConfig::default();
    for (q, dir) in [
        (Quantity::LambdaI, Expected::Increasing),
        (Quantity::LambdaO, Expected::Increasing),
        (Quantity::LambdaK, Expected::Decreasing),
    ] {
        let r = scan_monotone(q, &grid, dir, MONOTONE_TOL, &cfg);
        assert!(r.passed(), "{}", r.summary());
    }
}

#[test]
fn trig_bounds_reproduce_roots_within_eight_ulps() {
    for nu in [0.0, 0.5, 1.0, 7.25, 20.0] {
        for x in log_space(1e-3, 1e3, 25) {
            let p = pt(nu, x);
            let r = cubic_roots(p).unwrap();
            let ui = bound(BoundSpec::new(BoundFamily::TrigI), p).unwrap().value;
            let uk = bound(BoundSpec::new(BoundFamily::TrigK), p).unwrap().value;
            let ulp = |v: f64| 8.0 * f64::EPSILON * v.abs().max(f64::MIN_POSITIVE);
            assert!((ui * x - nu - r.lambda_i).abs() <= ulp(ui * x) + ulp(r.lambda_i), "nu={nu} x={x}");
            assert!((uk * x + nu + r.lambda_k).abs() <= ulp(uk * x) + ulp(r.lambda_k), "nu={nu} x={x}");
        }
    }
}

#[test]
fn product_bounds_are_ordered_where_valid() {
    for nu in [0.0, 0.5, 1.0, 2.5, 9.0] {
        for x in log_space(1e-3, 1e3, 31) {
            let b = product_bounds(pt(nu, x)).unwrap();
            // the trigonometric lower bound improves on the simple one
            assert!(b.lower_trig.value >= b.lower_simple.value * (1.0 - 1e-15), "nu={nu} x={x}");
            if b.upper.valid {
                assert!(b.lower_trig.value < b.upper.value);
            }
        }
    }
}
