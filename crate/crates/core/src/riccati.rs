//! Trajectories of `γ' = −x^a γ² + ((2ν−1−a)/x)γ + x^{−a}` and of the
//! double ratio `W = (ψ² − ν²)/x²` along them.
//!
//! Solutions are labelled by initial data `(x0, y0)`. Integration runs from
//! `x0` towards both window edges; a step whose end point has `|γ| > 10⁸`
//! terminates the trajectory as a blow-up.

use crate::nullclines::{cubic_residual, ExtremumKind};
use crate::ode::{Halt, OdeOptions, Solver};
use crate::oracle::{Oracle, RatioKind};
use crate::{domain, EvalPoint, Result};

pub const BLOWUP_THRESHOLD: f64 = 1e8;

/// Slopes below this fraction of `max |y|` count as flat.
const FLAT_SLOPE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    ReachedEnd,
    BlowUp { x_at: f64 },
    StepFailure { x_at: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub x: f64,
    pub kind: ExtremumKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Exponent of the equation integrated. `w_along` trajectories integrate
    /// with `a = −1` and store `W` in place of `γ`.
    pub a: f64,
    pub nu: f64,
    /// `(x, y)` pairs in increasing `x`.
    pub samples: Vec<(f64, f64)>,
    pub termination: Termination,
    pub extrema: Vec<Extremum>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolutionClass {
    MonotoneIncreasing,
    MonotoneDecreasing,
    HasInteriorExtremum,
    BlowUp,
}

impl SolutionClass {
    pub fn name(self) -> &'static str {
        match self {
            SolutionClass::MonotoneIncreasing => "monotone-increasing",
            SolutionClass::MonotoneDecreasing => "monotone-decreasing",
            SolutionClass::HasInteriorExtremum => "has-interior-extremum",
            SolutionClass::BlowUp => "blow-up",
        }
    }
}

/// Right-hand side of the generalized Riccati equation.
pub fn rhs(a: f64, nu: f64, x: f64, y: f64) -> f64 {
    let xa = x.powf(a);
    -xa * y * y + ((2.0 * nu - 1.0 - a) / x) * y + 1.0 / xa
}

fn ode_options() -> OdeOptions {
    OdeOptions { rtol: 1e-11, atol: 1e-12, blowup: BLOWUP_THRESHOLD, ..OdeOptions::default() }
}

struct Leg {
    /// Samples in integration order, starting after `x0`.
    samples: Vec<(f64, f64)>,
    events: Vec<(f64, f64)>,
    halt: Option<Halt>,
}

/// Integrate from `(x0, y0)` to `end`, recording points where `event`
/// changes sign. Each event is located by bisection on single sub-steps and
/// reported as `(x, sign of event after the crossing in increasing x)`.
fn leg<F, G>(f: &F, event: &G, x0: f64, y0: f64, end: f64) -> Leg
where
    F: Fn(f64, f64) -> f64,
    G: Fn(f64, f64) -> f64,
{
    let mut out = Leg { samples: Vec::new(), events: Vec::new(), halt: None };
    if end == x0 {
        return out;
    }
    let dir = (end - x0).signum();
    let mut solver = Solver::new(f, x0, y0, dir, ode_options());
    let (mut xp, mut yp) = (x0, y0);
    let mut gp = event(xp, yp);
    while (end - solver.x()) * dir > 0.0 {
        let r = solver.step(end);
        let (xn, yn) = (solver.x(), solver.y());
        if let Err(h) = r {
            if let Halt::BlowUp { x, y } = h {
                if y.is_finite() && x != xp {
                    out.samples.push((x, y));
                }
            }
            out.halt = Some(h);
            break;
        }
        let gn = event(xn, yn);
        if gp != 0.0 && gn != 0.0 && (gp < 0.0) != (gn < 0.0) {
            let (mut lo, mut hi) = (0.0, xn - xp);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if mid == lo || mid == hi {
                    break;
                }
                let ym = solver.trial_from(xp, yp, mid);
                if (event(xp + mid, ym) < 0.0) == (gp < 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let after = if dir > 0.0 { gn } else { gp };
            out.events.push((xp + 0.5 * (lo + hi), after.signum()));
        }
        out.samples.push((xn, yn));
        if gn != 0.0 {
            gp = gn;
        }
        (xp, yp) = (xn, yn);
    }
    out
}

struct Run {
    samples: Vec<(f64, f64)>,
    events: Vec<(f64, f64)>,
    termination: Termination,
}

fn run<F, G>(f: F, event: G, x0: f64, y0: f64, x_lo: f64, x_hi: f64) -> Run
where
    F: Fn(f64, f64) -> f64,
    G: Fn(f64, f64) -> f64,
{
    let back = leg(&f, &event, x0, y0, x_lo);
    let fwd = leg(&f, &event, x0, y0, x_hi);
    let mut samples: Vec<(f64, f64)> = back.samples.into_iter().rev().collect();
    samples.push((x0, y0));
    samples.extend(fwd.samples);
    let mut events: Vec<(f64, f64)> = back.events.into_iter().rev().collect();
    events.extend(fwd.events);
    let nearest = |hs: [Option<Halt>; 2], pick: fn(&Halt) -> Option<f64>| {
        hs.iter()
            .flatten()
            .filter_map(pick)
            .min_by(|a, b| (a - x0).abs().total_cmp(&(b - x0).abs()))
    };
    let halts = [back.halt, fwd.halt];
    let termination = if let Some(x_at) = nearest(halts, |h| match h {
        Halt::BlowUp { x, .. } => Some(*x),
        _ => None,
    }) {
        Termination::BlowUp { x_at }
    } else if let Some(x_at) = nearest(halts, |h| match h {
        Halt::StepFailure { x } => Some(*x),
        _ => None,
    }) {
        Termination::StepFailure { x_at }
    } else {
        Termination::ReachedEnd
    };
    Run { samples, events, termination }
}

fn check_window(x0: f64, y0: f64, x_lo: f64, x_hi: f64) -> Result<()> {
    if !(x_lo > 0.0 && x_lo <= x0 && x0 <= x_hi && x_hi.is_finite()) {
        return domain(format!("need 0 < x_lo <= x0 <= x_hi, got {x_lo}, {x0}, {x_hi}"));
    }
    if !y0.is_finite() {
        return domain(format!("initial value must be finite, got {y0}"));
    }
    Ok(())
}

/// Integrate the generalized Riccati equation from `(x0, y0)` across
/// `[x_lo, x_hi]`. Extrema are where the right-hand side changes sign.
pub fn solve_riccati(a: f64, nu: f64, x0: f64, y0: f64, x_lo: f64, x_hi: f64) -> Result<Trajectory> {
    check_window(x0, y0, x_lo, x_hi)?;
    if !(a.is_finite() && nu.is_finite()) {
        return domain("exponent and order must be finite");
    }
    let f = move |x: f64, y: f64| rhs(a, nu, x, y);
    let r = run(f, f, x0, y0, x_lo, x_hi);
    let extrema = r
        .events
        .into_iter()
        .map(|(x, after)| Extremum { x, kind: if after < 0.0 { ExtremumKind::Max } else { ExtremumKind::Min } })
        .collect();
    Ok(Trajectory { a, nu, samples: r.samples, termination: r.termination, extrema })
}

/// Blow-up first, then any interior extremum, then the sign of the net
/// change. A trajectory that is flat to `10⁻¹²` relative counts as
/// monotone-decreasing.
pub fn classify(traj: &Trajectory) -> SolutionClass {
    if matches!(traj.termination, Termination::BlowUp { .. }) {
        return SolutionClass::BlowUp;
    }
    if !traj.extrema.is_empty() {
        return SolutionClass::HasInteriorExtremum;
    }
    let scale = traj.samples.iter().map(|s| s.1.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut largest = 0.0f64;
    for w in traj.samples.windows(2) {
        let d = w[1].1 - w[0].1;
        if d.abs() > largest.abs() {
            largest = d;
        }
    }
    if largest > FLAT_SLOPE * scale {
        SolutionClass::MonotoneIncreasing
    } else {
        SolutionClass::MonotoneDecreasing
    }
}

/// Where a `W` trajectory comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WSource {
    /// Oracle values on a log-spaced grid of the window.
    Oracle(RatioKind),
    /// A solution of the `Φ` equation through `(x0, phi0)`.
    Initial { x0: f64, phi0: f64 },
}

/// Number of oracle samples in a [`WSource::Oracle`] trajectory.
pub const ORACLE_W_SAMPLES: usize = 200;

/// `W(x) = (ψ² − ν²)/x²` sampled along `window`.
///
/// For initial data the `a = −1` form `γ = xΦ = ψ + ν` is integrated and the
/// extrema of `W` are located where `ψ` crosses a root of the nullcline
/// cubic (`W' = −2f(ψ)/x³`).
pub fn w_along(source: WSource, nu: f64, window: (f64, f64)) -> Result<Trajectory> {
    let (x_lo, x_hi) = window;
    match source {
        WSource::Oracle(kind) => {
            if !(x_lo > 0.0 && x_lo < x_hi && x_hi.is_finite()) {
                return domain(format!("bad window [{x_lo}, {x_hi}]"));
            }
            let n = ORACLE_W_SAMPLES;
            let xs: Vec<f64> = (0..n)
                .map(|i| x_lo * (x_hi / x_lo).powf(i as f64 / (n - 1) as f64))
                .collect();
            let mut samples = Vec::with_capacity(n);
            for (x, p) in xs.iter().zip(Oracle::default().row(nu, &xs)) {
                samples.push((*x, p?.double_ratio(kind)));
            }
            Ok(Trajectory { a: -1.0, nu, samples, termination: Termination::ReachedEnd, extrema: Vec::new() })
        }
        WSource::Initial { x0, phi0 } => {
            check_window(x0, phi0, x_lo, x_hi)?;
            let f = move |x: f64, g: f64| rhs(-1.0, nu, x, g);
            let event = move |x: f64, g: f64| {
                let psi = g - nu;
                -cubic_residual(EvalPoint::new(nu, x).expect("window is positive"), psi).0
            };
            let r = run(f, event, x0, x0 * phi0, x_lo, x_hi);
            let w = |x: f64, g: f64| g * (g - 2.0 * nu) / (x * x);
            let samples = r.samples.iter().map(|&(x, g)| (x, w(x, g))).collect();
            let extrema = r
                .events
                .into_iter()
                .map(|(x, after)| Extremum { x, kind: if after < 0.0 { ExtremumKind::Max } else { ExtremumKind::Min } })
                .collect();
            Ok(Trajectory { a: -1.0, nu, samples, termination: r.termination, extrema })
        }
    }
}

/// `W` on the trajectory through `(x0, phi0)` at `x`, by integrating to `x`.
pub fn w_at(nu: f64, x0: f64, phi0: f64, x: f64) -> Result<f64> {
    let f = move |x: f64, g: f64| rhs(-1.0, nu, x, g);
    let mut s = Solver::new(f, x0, x0 * phi0, (x - x0).signum(), ode_options());
    s.advance_to(x).map_err(|h| crate::Error::Integration {
        x: match h {
            Halt::BlowUp { x, .. } | Halt::StepFailure { x } => x,
        },
        reason: "trajectory did not reach the requested point".into(),
    })?;
    let g = s.y();
    Ok(g * (g - 2.0 * nu) / (x * x))
}
