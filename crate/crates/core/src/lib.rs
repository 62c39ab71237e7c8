//! Bounds, nullclines and monotonicity properties for ratios and products of
//! modified Bessel functions.
//!
//! The crate works with the first-kind ratio `Φ₀ = I_{ν−1}(x)/I_ν(x)`, the
//! signed second-kind ratio `Φ₁ = −K_{ν−1}(x)/K_ν(x)`, the logarithmic
//! derivatives `ψ = xΦ − ν`, the double ratios `W = Φ_ν/Φ_{ν+1}` and the
//! product `P_ν(x) = I_ν(x)K_ν(x)`.
//!
//! - [`nullclines`] evaluates every closed-form bound: Amos-type nullclines
//!   `λ⁺_{a,ν}`, the roots of the nullcline cubic and the trigonometric
//!   bounds derived from them.
//! - [`oracle`] provides reference values computed only from the three-term
//!   recurrence and the Riccati equation (continued fractions, exact
//!   half-integer recurrences, backward integration).
//! - [`expansions`] holds the truncated small-x, large-x and large-ν series.
//! - [`riccati`] integrates the generalized Riccati equation and classifies
//!   its solutions.
//! - [`verify`] turns every claim into a grid scan with a CSV report.

pub mod expansions;
pub mod nullclines;
pub mod ode;
pub mod oracle;
mod point;
pub mod riccati;
pub mod verify;

pub use point::EvalPoint;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("continued fraction did not converge after {iterations} iterations (nu={nu}, x={x})")]
    NonConvergence { nu: f64, x: f64, iterations: usize },
    #[error("integration failed at x={x}: {reason}")]
    Integration { x: f64, reason: String },
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("unfittable samples: {0}")]
    Unfittable(String),
    #[error("unknown identifier: {0}")]
    Unknown(String),
    #[error("output error: {0}")]
    Output(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
