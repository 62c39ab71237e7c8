//! Scalar Dormand–Prince 5(4) integrator with PI step control.
//!
//! Integration may run in either direction. [`Solver::step`] takes one
//! accepted step without passing a limit, [`Solver::advance_to`] lands
//! exactly on a target, and [`Solver::trial`] evaluates an uncontrolled
//! sub-step from the last accepted point so callers can locate events.

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// `|y|` above this halts with [`Halt::BlowUp`].
    pub blowup: f64,
    pub max_steps: usize,
    /// Upper limit on `|h|`; `None` means unlimited.
    pub h_max: Option<f64>,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-11, atol: 1e-300, blowup: 1e8, max_steps: 1_000_000, h_max: None }
    }
}

/// Why integration stopped early.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Halt {
    /// `|y|` exceeded the threshold (or became non-finite) at `x`.
    BlowUp { x: f64, y: f64 },
    /// Step size underflow or step budget exhausted at `x`.
    StepFailure { x: f64 },
}

pub struct Solver<F> {
    f: F,
    x: f64,
    y: f64,
    k1: f64,
    h: f64,
    dir: f64,
    err_old: f64,
    steps: usize,
    opts: OdeOptions,
}

impl<F: Fn(f64, f64) -> f64> Solver<F> {
    /// `direction` is `+1` for increasing `x`, `−1` for decreasing.
    pub fn new(f: F, x0: f64, y0: f64, direction: f64, opts: OdeOptions) -> Self {
        let k1 = f(x0, y0);
        let dir = direction.signum();
        let h = initial_step(x0, y0, k1, &opts) * dir;
        Self { f, x: x0, y: y0, k1, h, dir, err_old: 1e-4, steps: 0, opts }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// Right-hand side at the current point.
    pub fn slope(&self) -> f64 {
        self.k1
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    fn stages(&self, x: f64, y: f64, k1: f64, h: f64) -> (f64, f64, f64) {
        let f = &self.f;
        let k2 = f(x + C2 * h, y + h * A21 * k1);
        let k3 = f(x + C3 * h, y + h * (A31 * k1 + A32 * k2));
        let k4 = f(x + C4 * h, y + h * (A41 * k1 + A42 * k2 + A43 * k3));
        let k5 = f(x + C5 * h, y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
        let k6 = f(x + h, y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
        let y_new = y + h * (A71 * k1 + A73 * k3 + A74 * k4 + A75 * k5 + A76 * k6);
        let k7 = f(x + h, y_new);
        let err = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
        (y_new, k7, err)
    }

    /// Uncontrolled step of size `h` from the last accepted point.
    pub fn trial(&self, h: f64) -> f64 {
        self.stages(self.x, self.y, self.k1, h).0
    }

    /// Uncontrolled step of size `h` from an arbitrary point.
    pub fn trial_from(&self, x: f64, y: f64, h: f64) -> f64 {
        self.stages(x, y, (self.f)(x, y), h).0
    }

    /// One accepted step that does not pass `limit`.
    pub fn step(&mut self, limit: f64) -> Result<(), Halt> {
        let remaining = limit - self.x;
        if remaining * self.dir <= 0.0 {
            return Ok(());
        }
        loop {
            if self.steps >= self.opts.max_steps {
                return Err(Halt::StepFailure { x: self.x });
            }
            let mut h = self.h;
            if let Some(hm) = self.opts.h_max {
                h = h.signum() * h.abs().min(hm);
            }
            let last = h.abs() >= remaining.abs();
            if last {
                h = remaining;
            }
            if h.abs() <= 16.0 * f64::EPSILON * self.x.abs().max(f64::MIN_POSITIVE) {
                return Err(Halt::StepFailure { x: self.x });
            }
            self.steps += 1;
            let (y_new, k7, err) = self.stages(self.x, self.y, self.k1, h);
            let scale = self.opts.atol + self.opts.rtol * self.y.abs().max(y_new.abs());
            let err_n = if y_new.is_finite() && k7.is_finite() { (err / scale).abs() } else { f64::INFINITY };
            if err_n <= 1.0 {
                let fac11 = err_n.max(1e-10).powf(0.17);
                let fac = (fac11 / self.err_old.powf(0.04) / 0.9).clamp(0.2, 10.0);
                self.err_old = err_n.max(1e-4);
                self.x = if last { limit } else { self.x + h };
                self.y = y_new;
                self.k1 = k7;
                self.h = h / fac;
                if !y_new.is_finite() || y_new.abs() > self.opts.blowup {
                    return Err(Halt::BlowUp { x: self.x, y: y_new });
                }
                return Ok(());
            }
            if !y_new.is_finite() && h.abs() <= 1e-6 * self.x.abs() {
                // the solution leaves the representable range within the step
                return Err(Halt::BlowUp { x: self.x + h, y: y_new });
            }
            let shrink = if err_n.is_finite() { (err_n.powf(0.17) / 0.9).min(10.0) } else { 10.0 };
            self.h = h / shrink;
        }
    }

    /// Integrate until `x` equals `target` exactly.
    pub fn advance_to(&mut self, target: f64) -> Result<(), Halt> {
        while (target - self.x) * self.dir > 0.0 {
            self.step(target)?;
        }
        Ok(())
    }
}

fn initial_step(x0: f64, y0: f64, k1: f64, opts: &OdeOptions) -> f64 {
    let scale = opts.atol + opts.rtol * y0.abs();
    let h = if k1 != 0.0 { 0.01 * (scale / opts.rtol.max(1e-16)) / k1.abs() } else { f64::INFINITY };
    let cap = 1e-3 * x0.abs().max(1e-3);
    let h = h.min(cap).max(1e-6 * cap);
    opts.h_max.map_or(h, |hm| h.min(hm))
}
