use rayon::prelude::*;

use super::{oracle_table, Grid, OracleFailure, ReportRow, ScanOptions, ScanReport};
use crate::nullclines::{Bound, BoundFamily, BoundSpec, Direction, Target};
use crate::oracle::{Oracle, OraclePoint};
use crate::{EvalPoint, Error, Result};

/// A registered inequality: one bound producer plus its scan semantics.
#[derive(Debug, Clone, PartialEq)]
pub struct Claim {
    pub id: String,
    pub spec: BoundSpec,
    /// Non-gating claims are scanned and reported but never fail a run.
    pub gating: bool,
    pub statement: &'static str,
}

impl Claim {
    fn new(id: impl Into<String>, spec: BoundSpec, statement: &'static str) -> Self {
        Self { id: id.into(), spec, gating: true, statement }
    }

    /// Whether the claim is checked at order `nu` given the produced bound.
    /// Proved claims follow `bound.valid`; the conjecture uses its nominal
    /// range `ν ≥ −1`.
    pub fn applies(&self, bound: &Bound, nu: f64) -> bool {
        if self.spec.family == BoundFamily::ProductLowerConjecture {
            nu >= -1.0
        } else {
            bound.valid
        }
    }
}

/// Exponents of the signed Amos forms that are scanned.
pub const SIGNED_AMOS_EXPONENTS: [f64; 6] = [-3.0, -2.0, -1.5, 1.5, 2.0, 3.0];

pub fn claim_catalog() -> Vec<Claim> {
    use BoundFamily::*;
    let mut c = vec![
        Claim::new("amos-I-a0", BoundSpec::amos(AmosI, 0.0), "I_{nu-1}/I_nu > lambda+_{0,nu}, nu >= 1/2"),
        Claim::new("amos-K-a0", BoundSpec::amos(AmosK, 0.0), "-K_{nu-1}/K_nu < -1/lambda+_{0,nu}, nu > 1/2"),
        Claim::new("amos-I-a-1", BoundSpec::amos(AmosI, -1.0), "I_{nu-1}/I_nu < lambda+_{-1,nu}, nu >= -1"),
        Claim::new("amos-K-a1", BoundSpec::amos(AmosK, 1.0), "-K_{nu-1}/K_nu > -1/lambda+_{1,nu}, all nu"),
    ];
    for a in SIGNED_AMOS_EXPONENTS {
        c.push(Claim::new(format!("amos-I-a{a}"), BoundSpec::amos(AmosI, a), "a(Phi_0 - lambda+_{a,nu}) > 0, |a| > 1, nu >= 0"));
        c.push(Claim::new(format!("amos-K-a{a}"), BoundSpec::amos(AmosK, a), "a(Phi_1 + 1/lambda+_{a,nu}) > 0, |a| > 1, all nu"));
    }
    let fixed: [(&str, BoundFamily, &'static str); 15] = [
        ("trig-upper-I", TrigI, "I_{nu-1}/I_nu < (lambda_I + nu)/x, nu >= 0"),
        ("trig-upper-K", TrigK, "K_{nu-1}/K_nu < -(lambda_K + nu)/x, nu >= 0"),
        ("product-upper", ProductUpper, "I_nu K_nu < 1/(2 sqrt((nu-1/2)^2 + x^2)), nu >= 1/2"),
        ("product-lower-amos", ProductLowerAmos, "I_nu K_nu > 1/(1 + sqrt(nu^2+x^2) + sqrt((nu-1)^2+x^2)), nu >= -1"),
        ("product-lower-trig", ProductLowerTrig, "I_nu K_nu > 1/(lambda_I - lambda_K), nu >= 0"),
        ("product-lower-simple", ProductLowerSimple, "I_nu K_nu > 1/(2 sqrt(x^2 + nu^2 + 1/3)), nu >= 0"),
        ("product-lower-conjecture", ProductLowerConjecture, "I_nu K_nu > 1/(2 sqrt(x^2 + nu^2 + 1/5)), nu >= -1 (conjectured)"),
        ("double-ratio-I-lower", DoubleRatioILower, "W^I > 0, nu >= 0"),
        ("double-ratio-I-upper", DoubleRatioIUpper, "W^I < w_I, nu >= 0"),
        ("double-ratio-K-lower", DoubleRatioKLower, "W^K > 0, nu >= 0"),
        ("double-ratio-K-upper", DoubleRatioKUpper, "W^K < w_K, nu >= 0"),
        ("psi-I-lower", PsiILower, "psi_I > nu, nu >= 0"),
        ("psi-I-upper", PsiIUpper, "psi_I < lambda_I, nu >= 0"),
        ("psi-K-lower", PsiKLower, "psi_K > lambda_K, nu >= 0"),
        ("psi-K-upper", PsiKUpper, "psi_K < -nu, nu >= 0"),
    ];
    for (id, family, statement) in fixed {
        let mut claim = Claim::new(id, BoundSpec::new(family), statement);
        claim.gating = family != ProductLowerConjecture;
        c.push(claim);
    }
    c
}

pub fn find_claim(id: &str) -> Result<Claim> {
    claim_catalog()
        .into_iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::Unknown(format!("claim {id}")))
}

/// Oracle value of `target` and its relative error estimate.
pub(crate) fn oracle_value(o: &OraclePoint, target: Target) -> (f64, f64) {
    let ri = o.i_ratio.rel_error();
    let rk = o.k_magnitude.rel_error();
    match target {
        Target::IRatio => (o.i_ratio.value, ri),
        Target::KRatio => (o.phi1(), rk),
        Target::KRatioMagnitude => (o.k_magnitude.value, rk),
        Target::Product => (o.product.value, o.product.rel_error()),
        Target::DoubleRatioI => (o.w_i(), 2.0 * ri),
        Target::DoubleRatioK => (o.w_k(), 2.0 * rk),
        Target::PsiI => {
            let v = o.psi_i();
            (v, ri * (o.psi_gap_i() / v).abs())
        }
        Target::PsiK => {
            let v = o.psi_k();
            (v, rk * (o.psi_gap_k() / v).abs())
        }
    }
}

/// Signed relative slack; negative when the bound fails.
pub(crate) fn margin(bound: f64, oracle: f64, direction: Direction) -> f64 {
    let scale = oracle.abs().max(f64::MIN_POSITIVE);
    match direction {
        Direction::Upper => (bound - oracle) / scale,
        Direction::Lower => (oracle - bound) / scale,
    }
}

fn check(claim: &Claim, bound: &Bound, o: &OraclePoint, opts: &ScanOptions) -> (ReportRow, bool) {
    let (value, rel_err) = oracle_value(o, bound.target);
    let mut m = margin(bound.value, value, bound.direction);
    if opts.corrupt.as_deref() == Some(claim.id.as_str()) {
        m = -m;
    }
    let row = ReportRow { nu: o.nu, x: o.x, bound: bound.value, oracle: value, margin: m };
    (row, m < -(opts.tol + rel_err))
}

fn scan_one(claim: &Claim, grid: &Grid, table: &[Vec<Result<OraclePoint>>], opts: &ScanOptions) -> ScanReport {
    let mut report = ScanReport::new(claim.id.clone());
    let tight = Oracle::new(opts.oracle.tightened());
    for (&nu, row) in grid.nu_values.iter().zip(table) {
        for (&x, o) in grid.x_values.iter().zip(row) {
            let p = match EvalPoint::new(nu, x) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let bound = match claim.spec.eval(p) {
                Ok(b) => b,
                Err(e) => {
                    report.points_attempted += 1;
                    report.oracle_failures.push(OracleFailure { nu, x, message: e.to_string() });
                    continue;
                }
            };
            if !claim.applies(&bound, nu) {
                continue;
            }
            report.points_attempted += 1;
            let o = match o {
                Ok(o) => o,
                Err(e) => {
                    report.oracle_failures.push(OracleFailure { nu, x, message: e.to_string() });
                    continue;
                }
            };
            let (mut row, mut violated) = check(claim, &bound, o, opts);
            if violated && opts.recheck {
                if let Ok(o2) = tight.point(p) {
                    (row, violated) = check(claim, &bound, &o2, opts);
                }
            }
            report.push_row(row, violated);
        }
    }
    report
}

/// Scan several claims over one grid, sharing the oracle evaluations.
pub fn scan_claims(claims: &[Claim], grid: &Grid, opts: &ScanOptions) -> Vec<ScanReport> {
    let table = oracle_table(grid, &opts.oracle);
    claims.par_iter().map(|c| scan_one(c, grid, &table, opts)).collect()
}

/// Check one claim at every grid point where it applies.
pub fn scan_bound(claim: &Claim, grid: &Grid, opts: &ScanOptions) -> ScanReport {
    scan_claims(std::slice::from_ref(claim), grid, opts).pop().expect("one report per claim")
}
