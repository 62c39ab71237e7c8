use std::f64::consts::PI;

use crate::{domain, EvalPoint, Result};

/// Largest roundoff excess of the arccos argument accepted before clamping.
const MAX_ACOS_CLAMP: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootBranch {
    K,
    O,
    I,
}

impl RootBranch {
    pub const ALL: [RootBranch; 3] = [RootBranch::K, RootBranch::O, RootBranch::I];
}

/// The three real roots `λ_K < λ_O < λ_I` of `λ³ + λ² − (ν² + x²)λ − ν² = 0`.
///
/// Roots are seeded by the trigonometric solution and then polished by a
/// safeguarded Newton iteration written in the offset `d = λ − σ` from the
/// nearest `x = 0` root `σ ∈ {|ν|, −|ν|, −1}`. This keeps `λ ∓ |ν|` accurate
/// when `x` is small, which the trigonometric form alone does not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicRoots {
    pub lambda_k: f64,
    pub lambda_o: f64,
    pub lambda_i: f64,
    /// `√(3(ν² + x²) + 1)`.
    pub g: f64,
    /// `(18ν² − 9x² − 2)/(2g³)`, clamped to `[−1, 1]`.
    pub acos_arg: f64,
    /// Amount removed by the clamp (zero in the usual case).
    pub acos_clamp: f64,
    nu: f64,
    x: f64,
    /// `(λ − |ν|, λ + |ν|)` per root, in K, O, I order.
    offsets: [(f64, f64); 3],
}

impl CubicRoots {
    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn root(&self, b: RootBranch) -> f64 {
        match b {
            RootBranch::K => self.lambda_k,
            RootBranch::O => self.lambda_o,
            RootBranch::I => self.lambda_i,
        }
    }

    fn offsets(&self, b: RootBranch) -> (f64, f64) {
        self.offsets[b as usize]
    }

    /// `λ − ν` without cancellation.
    pub fn minus_nu(&self, b: RootBranch) -> f64 {
        let (m, p) = self.offsets(b);
        if self.nu >= 0.0 {
            m
        } else {
            p
        }
    }

    /// `λ + ν` without cancellation.
    pub fn plus_nu(&self, b: RootBranch) -> f64 {
        let (m, p) = self.offsets(b);
        if self.nu >= 0.0 {
            p
        } else {
            m
        }
    }

    /// `λ² − ν²`.
    pub fn square_excess(&self, b: RootBranch) -> f64 {
        let (m, p) = self.offsets(b);
        m * p
    }
}

/// Residual of the cubic at `lambda`, together with the magnitude of its
/// largest monomial (the natural roundoff scale).
pub fn cubic_residual(p: EvalPoint, lambda: f64) -> (f64, f64) {
    let nu2 = p.nu() * p.nu();
    let s = nu2 + p.x() * p.x();
    let l2 = lambda * lambda;
    let residual = ((lambda + 1.0) * lambda - s) * lambda - nu2;
    let scale = (l2 * lambda.abs()).max(l2).max(s * lambda.abs()).max(nu2);
    (residual, scale)
}

/// The trigonometric data `(g, clamped arg, clamp amount)`.
fn trig_data(p: EvalPoint) -> Result<(f64, f64, f64)> {
    let (nu, x) = (p.nu(), p.x());
    let g = (3.0 * (nu * nu + x * x) + 1.0).sqrt();
    let raw = (18.0 * nu * nu - 9.0 * x * x - 2.0) / (2.0 * g * g * g);
    let clamp = (raw.abs() - 1.0).max(0.0);
    if clamp > MAX_ACOS_CLAMP || !raw.is_finite() {
        return domain(format!(
            "arccos argument {raw} out of range at nu={nu}, x={x}"
        ));
    }
    Ok((g, raw.clamp(-1.0, 1.0), clamp))
}

/// Trigonometric estimate `(2/3)g·cos(θ/3 + α) − 1/3`.
pub(crate) fn trig_root(g: f64, acos_arg: f64, alpha: f64) -> f64 {
    (2.0 / 3.0) * g * (acos_arg.acos() / 3.0 + alpha).cos() - 1.0 / 3.0
}

/// Offset form `f(σ + d) = d³ + (3σ+1)d² + c₁d + c₀` for an anchor `σ` that
/// is a root at `x = 0`, or for `σ = 0`.
struct OffsetCubic {
    b: f64,
    c1: f64,
    c0: f64,
}

impl OffsetCubic {
    fn new(sigma: f64, n: f64, x: f64, anchor: Anchor) -> Self {
        let x2 = x * x;
        let c1 = match anchor {
            Anchor::Plus => 2.0 * n * (n + 1.0) - x2,
            Anchor::Minus => 2.0 * n * (n - 1.0) - x2,
            Anchor::MinusOne => (1.0 - n) * (1.0 + n) - x2,
            Anchor::Zero => return Self { b: 1.0, c1: -(n * n + x2), c0: -n * n },
        };
        Self { b: 3.0 * sigma + 1.0, c1, c0: -x2 * sigma }
    }

    fn eval(&self, d: f64) -> (f64, f64) {
        let f = ((d + self.b) * d + self.c1) * d + self.c0;
        let df = (3.0 * d + 2.0 * self.b) * d + self.c1;
        (f, df)
    }

    /// Newton with bisection fallback inside `[lo, hi]`, where `f` changes
    /// sign.
    fn solve(&self, mut lo: f64, mut hi: f64, guess: f64) -> f64 {
        let neg_at_lo = self.eval(lo).0 < 0.0;
        let mut d = if guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
        for _ in 0..200 {
            let (f, df) = self.eval(d);
            if f == 0.0 {
                return d;
            }
            if (f < 0.0) == neg_at_lo {
                lo = d;
            } else {
                hi = d;
            }
            let newton = d - f / df;
            let next = if df != 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if next == d || (next - d).abs() <= 2.0 * f64::EPSILON * next.abs() {
                return next;
            }
            d = next;
        }
        d
    }
}

#[derive(Clone, Copy)]
enum Anchor {
    Plus,
    Minus,
    MinusOne,
    Zero,
}

/// Refine one root given its bracket `(lo, hi)` in λ and a trig estimate.
/// Returns `(λ, λ − n, λ + n)`.
fn refine(n: f64, x: f64, lo: f64, hi: f64, estimate: f64) -> (f64, f64, f64) {
    // λ_O tends to 0 at large x, where the offset from −1 would lose digits
    let candidates = [(n, Anchor::Plus), (-n, Anchor::Minus), (-1.0, Anchor::MinusOne), (0.0, Anchor::Zero)];
    let (sigma, anchor) = candidates
        .into_iter()
        .filter(|(s, _)| *s >= lo && *s <= hi)
        .min_by(|a, b| (a.0 - estimate).abs().total_cmp(&(b.0 - estimate).abs()))
        .unwrap_or(candidates[0]);
    let cubic = OffsetCubic::new(sigma, n, x, anchor);
    let (dlo, dhi) = (lo - sigma, hi - sigma);
    let mut guess = estimate - sigma;
    if !(guess > dlo && guess < dhi) && cubic.c1 != 0.0 {
        // linearized offset, good whenever x is small
        guess = -cubic.c0 / cubic.c1;
    }
    let d = cubic.solve(dlo, dhi, guess);
    (sigma + d, (sigma - n) + d, (sigma + n) + d)
}

pub fn cubic_roots(p: EvalPoint) -> Result<CubicRoots> {
    let (nu, x) = (p.nu(), p.x());
    let (g, acos_arg, acos_clamp) = trig_data(p)?;
    let roots: [(f64, f64, f64); 3] = if nu == 0.0 {
        let s = (1.0 + 4.0 * x * x).sqrt();
        let li = 2.0 * x * x / (1.0 + s);
        let lk = -0.5 * (1.0 + s);
        [(lk, lk, lk), (0.0, 0.0, 0.0), (li, li, li)]
    } else {
        let n = nu.abs();
        let est = |alpha: f64| trig_root(g, acos_arg, alpha);
        [
            refine(n, x, -(n + x + 2.0), (-n).min(-1.0), est(2.0 * PI / 3.0)),
            refine(n, x, (-n).max(-1.0), 0.0, est(-2.0 * PI / 3.0)),
            refine(n, x, n, n + x + 1.0, est(0.0)),
        ]
    };
    Ok(CubicRoots {
        lambda_k: roots[0].0,
        lambda_o: roots[1].0,
        lambda_i: roots[2].0,
        g,
        acos_arg,
        acos_clamp,
        nu,
        x,
        offsets: roots.map(|(_, m, p)| (m, p)),
    })
}

/// Nullcline levels `w_A = (λ_A² − ν²)/x²` of the double-ratio equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WValues {
    pub w_k: f64,
    pub w_o: f64,
    pub w_i: f64,
}

pub fn w_values(p: EvalPoint) -> Result<WValues> {
    let r = cubic_roots(p)?;
    let x = p.x();
    let w = |b: RootBranch| {
        let (m, pl) = r.offsets(b);
        (m / x) * (pl / x)
    };
    Ok(WValues { w_k: w(RootBranch::K), w_o: w(RootBranch::O), w_i: w(RootBranch::I) })
}
