use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use bessel_bounds::nullclines::{bound, cubic_roots, product_bounds, w_values, BoundFamily, BoundSpec};
use bessel_bounds::oracle::{Oracle, OracleConfig};
use bessel_bounds::riccati::{classify, solve_riccati, Termination, Trajectory};
use bessel_bounds::verify::{
    claim_catalog, conjecture_scan, fmt_f64, monotonicity_suite, run_sharpness, scan_claims, sharpness_cases,
    write_reports_csv, ScanOptions, ScanReport, MONOTONE_TOL,
};
use bessel_bounds::EvalPoint;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::RunConfig;

/// Oracle failure share above which a run exits with [`Failure::Oracle`].
pub const MAX_FAILURE_RATE: f64 = 0.01;

#[derive(Debug)]
pub enum Failure {
    /// A claim was violated; carries the failing ids.
    Violation(Vec<String>),
    Usage(String),
    Oracle(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Violation(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Oracle(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Violation(ids) => write!(f, "violated: {}", ids.join(", ")),
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Oracle(m) => write!(f, "oracle failure: {m}"),
        }
    }
}

fn io_failure(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("output: {e}"))
}

/// `--out` as a buffered file, or standard output.
fn data_sink(cfg: &RunConfig) -> Result<Box<dyn Write>, Failure> {
    Ok(match &cfg.out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(io_failure)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn check_failure_rate(failed: usize, attempted: usize) -> Result<(), Failure> {
    if attempted > 0 && failed as f64 / attempted as f64 > MAX_FAILURE_RATE {
        return Err(Failure::Oracle(format!("{failed} of {attempted} oracle evaluations failed")));
    }
    Ok(())
}

pub const TABULATE_HEADER: [&str; 15] = [
    "nu",
    "x",
    "i_ratio",
    "k_ratio",
    "product",
    "U_I",
    "U_K",
    "lambda_I",
    "lambda_K",
    "lambda_O",
    "w_I",
    "w_K",
    "w_O",
    "product_upper",
    "product_lower_trig",
];

/// A tabulated row, and whether its oracle evaluation failed.
type TabulatedPoint = (Result<[f64; 15], String>, bool);

/// One tabulated row; oracle columns are `NaN` where the oracle failed.
fn tabulate_row(oracle: Option<(f64, f64, f64)>, p: EvalPoint) -> bessel_bounds::Result<[f64; 15]> {
    let (i, k, prod) = oracle.unwrap_or((f64::NAN, f64::NAN, f64::NAN));
    let r = cubic_roots(p)?;
    let w = w_values(p)?;
    let pb = product_bounds(p)?;
    Ok([
        p.nu(),
        p.x(),
        i,
        k,
        prod,
        bound(BoundSpec::new(BoundFamily::TrigI), p)?.value,
        bound(BoundSpec::new(BoundFamily::TrigK), p)?.value,
        r.lambda_i,
        r.lambda_k,
        r.lambda_o,
        w.w_i,
        w.w_k,
        w.w_o,
        pb.upper.value,
        pb.lower_trig.value,
    ])
}

pub fn tabulate(cfg: &RunConfig) -> Result<(), Failure> {
    let grid = cfg.grid().map_err(Failure::Usage)?;
    let oracle = Oracle::default();
    let rows: Vec<Vec<TabulatedPoint>> = grid
        .nu_values
        .par_iter()
        .map(|&nu| {
            oracle
                .row(nu, &grid.x_values)
                .into_iter()
                .zip(&grid.x_values)
                .map(|(o, &x)| {
                    let failed = o.is_err();
                    let values = o.ok().map(|o| (o.i_ratio.value, o.phi1(), o.product.value));
                    let row = EvalPoint::new(nu, x).and_then(|p| tabulate_row(values, p)).map_err(|e| e.to_string());
                    (row, failed)
                })
                .collect()
        })
        .collect();
    if grid.is_empty() {
        eprintln!("warning: 0 points in grid");
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(data_sink(cfg)?);
    w.write_record(TABULATE_HEADER).map_err(io_failure)?;
    let mut failed = 0;
    for (row, oracle_failed) in rows.into_iter().flatten() {
        failed += oracle_failed as usize;
        let row = row.map_err(Failure::Usage)?;
        w.write_record(row.iter().map(|&v| fmt_f64(v))).map_err(io_failure)?;
    }
    w.flush().map_err(io_failure)?;
    check_failure_rate(failed, grid.len())
}

fn report_line(r: &ScanReport, gating: bool) -> String {
    let status = match (r.passed(), gating) {
        (true, _) => "ok",
        (false, true) => "FAIL",
        (false, false) => "reported",
    };
    format!("[{status}] {}", r.summary())
}

pub fn verify(cfg: &RunConfig, corrupt: Option<String>) -> Result<(), Failure> {
    let grid = cfg.grid().map_err(Failure::Usage)?;
    let catalog = claim_catalog();
    if let Some(id) = &corrupt {
        if !catalog.iter().any(|c| &c.id == id) {
            return Err(Failure::Usage(format!("unknown claim '{id}'")));
        }
    }
    let opts = ScanOptions { tol: cfg.tol, corrupt, ..ScanOptions::default() };
    let oracle_cfg = OracleConfig::default();
    let mut reports: Vec<(ScanReport, bool)> =
        scan_claims(&catalog, &grid, &opts).into_iter().zip(catalog.iter().map(|c| c.gating)).collect();
    for check in monotonicity_suite(&grid) {
        let mut check = check;
        check.nu_values.retain(|nu| grid.nu_values.contains(nu));
        reports.push((check.run(&grid, MONOTONE_TOL, &oracle_cfg), true));
    }

    let mut stdout = io::stdout().lock();
    writeln!(stdout, "grid: {} orders x {} arguments", grid.nu_values.len(), grid.x_values.len()).map_err(io_failure)?;
    for (r, gating) in &reports {
        writeln!(stdout, "{}", report_line(r, *gating)).map_err(io_failure)?;
    }
    if let Some(dir) = &cfg.out {
        write_report_dir(dir, reports.iter().map(|(r, _)| r))?;
    }

    let failing: Vec<String> =
        reports.iter().filter(|(r, gating)| *gating && !r.passed()).map(|(r, _)| r.claim_id.clone()).collect();
    if !failing.is_empty() {
        return Err(Failure::Violation(failing));
    }
    let failed = reports.iter().map(|(r, _)| r.oracle_failures.len()).sum();
    let attempted = reports.iter().map(|(r, _)| r.points_attempted).sum();
    check_failure_rate(failed, attempted)
}

/// One `<claim_id>.csv` per report under `dir`.
fn write_report_dir<'a>(dir: &Path, reports: impl Iterator<Item = &'a ScanReport>) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(io_failure)?;
    for r in reports {
        let name = format!("{}.csv", r.claim_id.replace('/', "_"));
        let file = BufWriter::new(File::create(dir.join(name)).map_err(io_failure)?);
        write_reports_csv(std::slice::from_ref(r), file).map_err(io_failure)?;
    }
    Ok(())
}

pub fn sharpness(cfg: &RunConfig) -> Result<(), Failure> {
    let oracle = Oracle::default();
    let outcomes: Vec<_> = sharpness_cases().iter().map(|c| run_sharpness(c, &oracle)).collect();
    let mut stdout = io::stdout().lock();
    for o in &outcomes {
        writeln!(stdout, "{}", o.summary()).map_err(io_failure)?;
    }
    if let Some(path) = &cfg.out {
        let file = BufWriter::new(File::create(path).map_err(io_failure)?);
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(file);
        w.write_record(["case", "scale", "eps", "oracle_error"]).map_err(io_failure)?;
        for o in &outcomes {
            for s in &o.samples {
                w.write_record([o.case.label(), fmt_f64(s.scale), fmt_f64(s.eps), fmt_f64(s.oracle_error)])
                    .map_err(io_failure)?;
            }
        }
        w.flush().map_err(io_failure)?;
    }
    let failing: Vec<String> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.case.label()).collect();
    if failing.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violation(failing))
    }
}

pub fn conjecture(cfg: &RunConfig) -> Result<(), Failure> {
    let grid = cfg.grid().map_err(Failure::Usage)?;
    let r = conjecture_scan(&grid, &OracleConfig::default());
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "{}", r.summary()).map_err(io_failure)?;
    writeln!(stdout, "{}", report_line(&r.proved, true)).map_err(io_failure)?;
    writeln!(stdout, "{}", report_line(&r.conjectured, false)).map_err(io_failure)?;
    if let Some(path) = &cfg.out {
        let file = BufWriter::new(File::create(path).map_err(io_failure)?);
        write_reports_csv(&[r.proved.clone(), r.conjectured.clone()], file).map_err(io_failure)?;
    }
    if !r.proved.passed() {
        return Err(Failure::Violation(vec![r.proved.claim_id.clone()]));
    }
    check_failure_rate(r.conjectured.oracle_failures.len(), r.conjectured.points_attempted)
}

fn describe(t: &Trajectory) -> String {
    let (lo, hi) = t.samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s.1), hi.max(s.1)));
    let mut s = format!("{}; y in [{lo:.10e}, {hi:.10e}]", classify(t).name());
    match t.termination {
        Termination::ReachedEnd => {}
        Termination::BlowUp { x_at } => s.push_str(&format!("; blow-up at x = {x_at:.10e}")),
        Termination::StepFailure { x_at } => s.push_str(&format!("; step failure at x = {x_at:.10e}")),
    }
    for e in &t.extrema {
        s.push_str(&format!("; {:?} at x = {:.10e}", e.kind, e.x));
    }
    s
}

pub fn explore(cfg: &RunConfig) -> Result<(), Failure> {
    let nu = cfg.nu.ok_or_else(|| Failure::Usage("explore needs --nu".into()))?;
    let mut starts = Vec::new();
    if let Some(y0) = cfg.y0 {
        starts.push(y0);
    }
    if cfg.samples > 0 {
        // γ = x^{−a}Φ strictly between the first- and second-kind values
        let p = EvalPoint::new(nu, cfg.x0).map_err(|e| Failure::Usage(e.to_string()))?;
        let oracle = Oracle::default();
        let i = oracle.i_ratio(p).map_err(|e| Failure::Oracle(e.to_string()))?.value;
        let k = oracle.k_ratio(p).map_err(|e| Failure::Oracle(e.to_string()))?.value;
        let scale = cfg.x0.powf(-cfg.a);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..cfg.samples {
            let u: f64 = rng.gen_range(0.01..0.99);
            starts.push(scale * (k + u * (i - k)));
        }
    }
    if starts.is_empty() {
        return Err(Failure::Usage("explore needs --y0 or --samples".into()));
    }
    let trajectories = starts
        .par_iter()
        .map(|&y0| solve_riccati(cfg.a, nu, cfg.x0, y0, cfg.x_lo, cfg.x_hi))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Usage(e.to_string()))?;

    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(data_sink(cfg)?);
    w.write_record(["trajectory", "y0", "x", "y"]).map_err(io_failure)?;
    for (n, (t, &y0)) in trajectories.iter().zip(&starts).enumerate() {
        for &(x, y) in &t.samples {
            w.write_record([n.to_string(), fmt_f64(y0), fmt_f64(x), fmt_f64(y)]).map_err(io_failure)?;
        }
    }
    w.flush().map_err(io_failure)?;
    for (n, (t, y0)) in trajectories.iter().zip(&starts).enumerate() {
        eprintln!("trajectory {n} (y0 = {y0:.10e}): {}", describe(t));
    }
    Ok(())
}

