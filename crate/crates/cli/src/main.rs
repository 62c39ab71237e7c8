//! `bessel-bounds`: tabulate, verify and explore bounds for ratios and
//! products of modified Bessel functions.
//!
//! Exit codes: 0 success, 1 claim violation, 2 usage error, 3 too many
//! oracle failures.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::Failure;
use config::{Overrides, RunConfig};

#[derive(Parser)]
#[command(name = "bessel-bounds", version, about = "Bounds, nullclines and monotonicity checks for modified Bessel ratios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Oracle values, bounds and nullcline roots at every grid point, as CSV.
    #[command(allow_negative_numbers = true)]
    Tabulate {
        #[command(flatten)]
        grid: GridFlags,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Scan every registered claim and monotonicity statement over the grid.
    #[command(allow_negative_numbers = true)]
    Verify {
        #[command(flatten)]
        grid: GridFlags,
        /// Relative slack tolerated before a point counts as a violation.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        common: CommonFlags,
        /// Negate the margins of the named claim (harness self-test).
        #[arg(long, hide = true)]
        corrupt: Option<String>,
    },
    /// Fit the order and leading coefficient of each trigonometric bound's
    /// relative error in its asymptotic regimes.
    Sharpness {
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Scan `1/(4P²) − x² − ν²` against the proved and conjectured constants.
    #[command(allow_negative_numbers = true)]
    Conjecture {
        #[command(flatten)]
        grid: GridFlags,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Integrate the generalized Riccati equation from given or random
    /// initial values and classify the solutions.
    #[command(allow_negative_numbers = true)]
    Explore {
        /// Exponent of the scaled unknown `x^{−a}Φ`.
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long)]
        x0: Option<f64>,
        /// Initial value at `x0`.
        #[arg(long)]
        y0: Option<f64>,
        #[arg(long)]
        x_lo: Option<f64>,
        #[arg(long)]
        x_hi: Option<f64>,
        /// Also draw this many initial values between the two oracle ratios.
        #[arg(long)]
        samples: Option<usize>,
        /// Seed for `--samples`.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: CommonFlags,
    },
}

#[derive(Args)]
struct GridFlags {
    #[arg(long)]
    nu_min: Option<f64>,
    #[arg(long)]
    nu_max: Option<f64>,
    #[arg(long)]
    nu_step: Option<f64>,
    #[arg(long)]
    x_min: Option<f64>,
    #[arg(long)]
    x_max: Option<f64>,
    /// Number of log-spaced arguments in `[x-min, x-max]`.
    #[arg(long)]
    x_points: Option<usize>,
    /// A single order instead of the `nu-min..nu-max` range.
    #[arg(long)]
    nu: Option<f64>,
    /// A single argument instead of the `x-min..x-max` range.
    #[arg(long)]
    x: Option<f64>,
}

impl GridFlags {
    fn overrides(self) -> Overrides {
        Overrides {
            nu_min: self.nu_min,
            nu_max: self.nu_max,
            nu_step: self.nu_step,
            x_min: self.x_min,
            x_max: self.x_max,
            x_points: self.x_points,
            nu: self.nu,
            x: self.x,
            ..Overrides::default()
        }
    }
}

#[derive(Args)]
struct CommonFlags {
    /// Output file (a directory for `verify`); CSV goes to stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat `key=value` file; command line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the resolved settings to this file in `--config` format.
    #[arg(long)]
    save_config: Option<PathBuf>,
}

fn resolve(flags: Overrides, common: CommonFlags) -> Result<RunConfig, Failure> {
    let flags = Overrides { out: common.out, ..flags };
    let file = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            Overrides::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
        None => Overrides::default(),
    };
    let cfg = RunConfig::resolve(flags.over(file));
    if let Some(path) = &common.save_config {
        std::fs::write(path, cfg.to_overrides().to_text())
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Tabulate { grid, common } => commands::tabulate(&resolve(grid.overrides(), common)?),
        Command::Verify { grid, tol, common, corrupt } => {
            let flags = Overrides { tol, ..grid.overrides() };
            commands::verify(&resolve(flags, common)?, corrupt)
        }
        Command::Sharpness { common } => commands::sharpness(&resolve(Overrides::default(), common)?),
        Command::Conjecture { grid, common } => commands::conjecture(&resolve(grid.overrides(), common)?),
        Command::Explore { a, nu, x0, y0, x_lo, x_hi, samples, seed, common } => {
            let flags = Overrides { a, nu, x0, y0, x_lo, x_hi, samples, seed, ..Overrides::default() };
            commands::explore(&resolve(flags, common)?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
