//! Reference values built only from the three-term recurrence and the
//! Riccati equation.
//!
//! - `Φ₀` comes from the continued fraction of the recurrence (the ratio of
//!   its minimal solution), evaluated by modified Lentz.
//! - `K_{ν−1}/K_ν` comes from the exact upward recurrence when `2ν` is odd
//!   and otherwise from a backward integration of the Riccati equation seeded
//!   with the large-x expansion.
//! - Negative orders use `K_{−ν} = K_ν` for the second kind and one
//!   recurrence step down from order `ν + 1` for the first kind; supported for
//!   `ν ≥ −1`.
//!
//! Quantities that cancel in their defining form (`ψ − ν`, `W`, `Φ₀ − Φ₁`)
//! are assembled from pieces that don't.

mod cf;
mod second_kind;

use crate::point::is_half_integer;
use crate::{domain, EvalPoint, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RatioKind {
    /// `I_ν`, regular at the origin.
    FirstKind,
    /// `K_ν`, recessive at infinity.
    SecondKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ContinuedFraction,
    HalfIntegerRecurrence,
    BackwardRiccati,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ContinuedFraction => "continued-fraction",
            Method::HalfIntegerRecurrence => "half-integer-recurrence",
            Method::BackwardRiccati => "backward-riccati",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    /// Absolute error estimate.
    pub est_error: f64,
    pub method: Method,
}

impl OracleResult {
    pub fn rel_error(&self) -> f64 {
        if self.value == 0.0 {
            self.est_error
        } else {
            self.est_error / self.value.abs()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Relative stopping tolerance of the continued fraction.
    pub cf_tol: f64,
    pub cf_tiny: f64,
    pub cf_max_iter: usize,
    /// Relative step-control tolerance of the backward integration.
    pub ode_rtol: f64,
    /// `est_error = ode_error_factor · ode_rtol · |value|`.
    pub ode_error_factor: f64,
    /// The integration starts at `max(x_start_floor, x_start_factor·(ν+1), 2x)`.
    pub x_start_floor: f64,
    pub x_start_factor: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            cf_tol: 1e-14,
            cf_tiny: 1e-300,
            cf_max_iter: 1_000_000,
            ode_rtol: 1e-11,
            ode_error_factor: 10.0,
            x_start_floor: 50.0,
            x_start_factor: 10.0,
        }
    }
}

impl OracleConfig {
    /// The same configuration with both tolerances divided by 100.
    pub fn tightened(&self) -> Self {
        Self { cf_tol: self.cf_tol * 1e-2, ode_rtol: self.ode_rtol * 1e-2, ..*self }
    }
}

/// Every oracle quantity at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OraclePoint {
    pub nu: f64,
    pub x: f64,
    /// `Φ₀ = I_{ν−1}/I_ν`.
    pub i_ratio: OracleResult,
    /// `Φ₀ − 2ν/x = I_{ν+1}/I_ν`.
    i_reduced: f64,
    i_reduced_err: f64,
    /// `r = K_{ν−1}/K_ν = −Φ₁`.
    pub k_magnitude: OracleResult,
    /// `r + 2ν/x = K_{ν+1}/K_ν`.
    k_shifted: f64,
    pub product: OracleResult,
}

impl OraclePoint {
    /// `Φ₁ = −K_{ν−1}/K_ν`.
    pub fn phi1(&self) -> f64 {
        -self.k_magnitude.value
    }

    /// `ψ_I − ν = x·I_{ν+1}/I_ν`.
    pub fn psi_gap_i(&self) -> f64 {
        self.x * self.i_reduced
    }

    /// `ψ_K + ν = −x·K_{ν−1}/K_ν`.
    pub fn psi_gap_k(&self) -> f64 {
        -self.x * self.k_magnitude.value
    }

    /// `I_{ν+1}/I_ν` and its absolute error estimate.
    pub fn i_reduced(&self) -> (f64, f64) {
        (self.i_reduced, self.i_reduced_err)
    }

    /// `K_{ν+1}/K_ν`.
    pub fn k_shifted(&self) -> f64 {
        self.k_shifted
    }

    pub fn psi_i(&self) -> f64 {
        self.nu + self.psi_gap_i()
    }

    pub fn psi_k(&self) -> f64 {
        self.psi_gap_k() - self.nu
    }

    /// `W^I = I_{ν−1}I_{ν+1}/I_ν²`.
    pub fn w_i(&self) -> f64 {
        self.i_ratio.value * self.i_reduced
    }

    /// `W^K = K_{ν−1}K_{ν+1}/K_ν²`.
    pub fn w_k(&self) -> f64 {
        self.k_magnitude.value * self.k_shifted
    }

    pub fn psi(&self, kind: RatioKind) -> f64 {
        match kind {
            RatioKind::FirstKind => self.psi_i(),
            RatioKind::SecondKind => self.psi_k(),
        }
    }

    pub fn double_ratio(&self, kind: RatioKind) -> f64 {
        match kind {
            RatioKind::FirstKind => self.w_i(),
            RatioKind::SecondKind => self.w_k(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Oracle {
    pub config: OracleConfig,
}

impl Oracle {
    pub fn new(config: OracleConfig) -> Self {
        Self { config }
    }

    /// `I_{ν+1}/I_ν` for `ν ≥ −1`, as `1/Φ_{ν+1}`.
    fn i_reduced(&self, nu: f64, x: f64) -> Result<OracleResult> {
        let c = &self.config;
        let tail = cf::first_kind_cf(nu + 1.0, x, c.cf_tol, c.cf_tiny, c.cf_max_iter)?;
        let value = 1.0 / tail.value;
        Ok(OracleResult {
            value,
            est_error: (4.0 * tail.last_delta.max(c.cf_tol) + 8.0 * f64::EPSILON) * value,
            method: Method::ContinuedFraction,
        })
    }

    fn check_first_kind_order(nu: f64) -> Result<()> {
        if nu >= -1.0 {
            Ok(())
        } else {
            domain(format!("first-kind oracle needs nu >= -1, got {nu}"))
        }
    }

    /// `Φ₀ = I_{ν−1}/I_ν` for `ν ≥ −1`.
    pub fn i_ratio(&self, p: EvalPoint) -> Result<OracleResult> {
        let (nu, x) = (p.nu(), p.x());
        Self::check_first_kind_order(nu)?;
        if nu == -1.0 {
            // I_{-2}/I_{-1} = I_2/I_1, free of the cancellation in -2/x + I_0/I_1
            return self.i_reduced(1.0, x);
        }
        let tail = self.i_reduced(nu, x)?;
        let value = 2.0 * nu / x + tail.value;
        let est_error = tail.est_error + 2.0 * f64::EPSILON * (2.0 * nu / x).abs() + f64::EPSILON * value.abs();
        Ok(OracleResult { value, est_error, method: Method::ContinuedFraction })
    }

    /// `K_{ν−1}/K_ν` for `ν ≥ 0` along a row.
    fn k_magnitude_row_nonneg(&self, nu: f64, xs: &[f64]) -> Vec<Result<OracleResult>> {
        if is_half_integer(nu) {
            xs.iter().map(|&x| Ok(second_kind::half_integer_ratio(nu, x))).collect()
        } else {
            second_kind::backward_riccati_row(nu, xs, &self.config)
        }
    }

    /// `K_{ν−1}/K_ν` for `ν ≥ 0` by backward integration only, even at
    /// half-integer orders where [`Oracle::k_ratio`] uses the recurrence.
    pub fn k_magnitude_integrated(&self, nu: f64, xs: &[f64]) -> Vec<Result<OracleResult>> {
        if nu < 0.0 {
            return xs.iter().map(|_| domain(format!("integration path needs nu >= 0, got {nu}"))).collect();
        }
        second_kind::backward_riccati_row(nu, xs, &self.config)
    }

    /// `(K_{ν−1}/K_ν, K_{ν+1}/K_ν)` for any real `ν` along a row.
    fn k_pair_row(&self, nu: f64, xs: &[f64]) -> Vec<Result<(OracleResult, f64)>> {
        let n = nu.abs();
        self.k_magnitude_row_nonneg(n, xs)
            .into_iter()
            .zip(xs)
            .map(|(r, &x)| {
                let r = r?;
                // K_{ν+1}/K_ν − K_{ν−1}/K_ν = 2ν/x; for ν < 0 the roles swap under K_{−ν} = K_ν
                let shifted = r.value + 2.0 * n / x;
                Ok(if nu >= 0.0 {
                    (r, shifted)
                } else {
                    let e = r.est_error + 2.0 * f64::EPSILON * shifted;
                    (OracleResult { value: shifted, est_error: e, method: r.method }, r.value)
                })
            })
            .collect()
    }

    /// `Φ₁ = −K_{ν−1}/K_ν`.
    pub fn k_ratio(&self, p: EvalPoint) -> Result<OracleResult> {
        self.k_ratio_row(p.nu(), &[p.x()]).pop().expect("one entry per argument")
    }

    /// `Φ₁` at every `x` in `xs`, sharing one backward integration.
    pub fn k_ratio_row(&self, nu: f64, xs: &[f64]) -> Vec<Result<OracleResult>> {
        self.k_pair_row(nu, xs)
            .into_iter()
            .map(|r| r.map(|(r, _)| OracleResult { value: -r.value, ..r }))
            .collect()
    }

    /// All oracle quantities at every `x` in `xs`.
    pub fn row(&self, nu: f64, xs: &[f64]) -> Vec<Result<OraclePoint>> {
        let k = self.k_pair_row(nu, xs);
        xs.iter()
            .zip(k)
            .map(|(&x, k)| {
                EvalPoint::new(nu, x)?;
                Self::check_first_kind_order(nu)?;
                let i_ratio = self.i_ratio(EvalPoint::new(nu, x)?)?;
                let i_red = self.i_reduced(nu, x)?;
                let (k_magnitude, k_shifted) = k?;
                // Φ₀ − Φ₁ = I_{ν+1}/I_ν + K_{ν+1}/K_ν, a sum of positive terms
                let d = i_red.value + k_shifted;
                let value = 1.0 / (x * d);
                let rel = (i_red.est_error + k_magnitude.est_error) / d + 4.0 * f64::EPSILON;
                Ok(OraclePoint {
                    nu,
                    x,
                    i_ratio,
                    i_reduced: i_red.value,
                    i_reduced_err: i_red.est_error,
                    k_magnitude,
                    k_shifted,
                    product: OracleResult { value, est_error: rel * value, method: k_magnitude.method },
                })
            })
            .collect()
    }

    pub fn point(&self, p: EvalPoint) -> Result<OraclePoint> {
        self.row(p.nu(), &[p.x()]).pop().expect("one entry per argument")
    }

    /// `ψ = xΦ − ν`.
    pub fn psi(&self, kind: RatioKind, p: EvalPoint) -> Result<f64> {
        Ok(self.point(p)?.psi(kind))
    }

    /// `W = Φ_ν/Φ_{ν+1} = (ψ² − ν²)/x²`.
    pub fn double_ratio(&self, kind: RatioKind, p: EvalPoint) -> Result<f64> {
        Ok(self.point(p)?.double_ratio(kind))
    }

    /// `P = I_ν K_ν = 1/(x(Φ₀ − Φ₁))`.
    pub fn product(&self, p: EvalPoint) -> Result<OracleResult> {
        Ok(self.point(p)?.product)
    }
}

pub fn i_ratio(p: EvalPoint) -> Result<OracleResult> {
    Oracle::default().i_ratio(p)
}

pub fn k_ratio(p: EvalPoint) -> Result<OracleResult> {
    Oracle::default().k_ratio(p)
}

pub fn psi(kind: RatioKind, p: EvalPoint) -> Result<f64> {
    Oracle::default().psi(kind, p)
}

pub fn double_ratio(kind: RatioKind, p: EvalPoint) -> Result<f64> {
    Oracle::default().double_ratio(kind, p)
}

pub fn product(p: EvalPoint) -> Result<OracleResult> {
    Oracle::default().product(p)
}
