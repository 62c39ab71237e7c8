//! Run settings: built-in defaults, a flat `key=value` file, and command
//! line flags, merged in that order of increasing precedence.

use std::fmt::Write as _;
use std::path::PathBuf;

use bessel_bounds::verify::{linear_steps, log_space, Grid, DEFAULT_TOL};

/// Every setting, each optional so that layers can be merged.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub nu_min: Option<f64>,
    pub nu_max: Option<f64>,
    pub nu_step: Option<f64>,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub x_points: Option<usize>,
    pub nu: Option<f64>,
    pub x: Option<f64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub a: Option<f64>,
    pub x0: Option<f64>,
    pub y0: Option<f64>,
    pub x_lo: Option<f64>,
    pub x_hi: Option<f64>,
    pub samples: Option<usize>,
}

macro_rules! fields {
    ($m:ident) => {
        $m!(nu_min, nu_max, nu_step, x_min, x_max, x_points, nu, x, tol, out, seed, a, x0, y0, x_lo, x_hi, samples)
    };
}

impl Overrides {
    /// Field-wise `self` where set, otherwise `lower`.
    pub fn over(self, lower: Overrides) -> Overrides {
        macro_rules! merge {
            ($($f:ident),*) => { Overrides { $($f: self.$f.or(lower.$f)),* } };
        }
        fields!(merge)
    }

    /// Parse `key = value` lines. Blank lines and `#` comments are skipped;
    /// keys may use `-` or `_`.
    pub fn parse(text: &str) -> Result<Overrides, String> {
        let mut o = Overrides::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| format!("line {}: expected key=value", n + 1))?;
            let (key, value) = (key.trim().replace('-', "_"), value.trim());
            let bad = |e: &dyn std::fmt::Display| format!("line {}: {key}: {e}", n + 1);
            macro_rules! set {
                ($($f:ident),*) => {
                    match key.as_str() {
                        $(stringify!($f) => o.$f = Some(value.parse().map_err(|e| bad(&e))?),)*
                        _ => return Err(format!("line {}: unknown key '{key}'", n + 1)),
                    }
                };
            }
            fields!(set);
        }
        Ok(o)
    }

    /// The set fields as config-file text, one `key=value` per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        macro_rules! emit {
            ($($f:ident),*) => {
                $(if let Some(v) = &self.$f {
                    let _ = writeln!(s, "{}={}", stringify!($f), Shown(v));
                })*
            };
        }
        fields!(emit);
        s
    }
}

struct Shown<'a, T>(&'a T);

macro_rules! shown_display {
    ($($t:ty),*) => {$(
        impl std::fmt::Display for Shown<'_, $t> {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    )*};
}
shown_display!(f64, usize, u64);

impl std::fmt::Display for Shown<'_, PathBuf> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0.display())
    }
}

/// Fully resolved settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub nu_min: f64,
    pub nu_max: f64,
    pub nu_step: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub x_points: usize,
    /// A single order, replacing the `nu_min..nu_max` range.
    pub nu: Option<f64>,
    /// A single argument, replacing the `x_min..x_max` range.
    pub x: Option<f64>,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub a: f64,
    pub x0: f64,
    pub y0: Option<f64>,
    pub x_lo: f64,
    pub x_hi: f64,
    /// Random mixed initial values drawn by `explore`.
    pub samples: usize,
}

impl RunConfig {
    pub fn resolve(o: Overrides) -> RunConfig {
        RunConfig {
            nu_min: o.nu_min.unwrap_or(-1.0),
            nu_max: o.nu_max.unwrap_or(20.0),
            nu_step: o.nu_step.unwrap_or(0.25),
            x_min: o.x_min.unwrap_or(1e-3),
            x_max: o.x_max.unwrap_or(1e3),
            x_points: o.x_points.unwrap_or(121),
            nu: o.nu,
            x: o.x,
            tol: o.tol.unwrap_or(DEFAULT_TOL),
            out: o.out,
            seed: o.seed.unwrap_or(0),
            a: o.a.unwrap_or(0.0),
            x0: o.x0.unwrap_or(1.0),
            y0: o.y0,
            x_lo: o.x_lo.unwrap_or(0.05),
            x_hi: o.x_hi.unwrap_or(50.0),
            samples: o.samples.unwrap_or(0),
        }
    }

    /// Every setting as overrides, so that the config survives a trip
    /// through a config file.
    pub fn to_overrides(&self) -> Overrides {
        Overrides {
            nu_min: Some(self.nu_min),
            nu_max: Some(self.nu_max),
            nu_step: Some(self.nu_step),
            x_min: Some(self.x_min),
            x_max: Some(self.x_max),
            x_points: Some(self.x_points),
            nu: self.nu,
            x: self.x,
            tol: Some(self.tol),
            out: self.out.clone(),
            seed: Some(self.seed),
            a: Some(self.a),
            x0: Some(self.x0),
            y0: self.y0,
            x_lo: Some(self.x_lo),
            x_hi: Some(self.x_hi),
            samples: Some(self.samples),
        }
    }

    pub fn grid(&self) -> Result<Grid, String> {
        if self.nu_step.is_nan() || self.nu_step <= 0.0 {
            return Err(format!("nu-step must be positive, got {}", self.nu_step));
        }
        if !(self.x_min > 0.0 && self.x_max.is_finite()) {
            return Err(format!("x range must be positive and finite, got [{}, {}]", self.x_min, self.x_max));
        }
        let nu_values = match self.nu {
            Some(nu) => vec![nu],
            None => linear_steps(self.nu_min, self.nu_max, self.nu_step),
        };
        let x_values = match self.x {
            Some(x) => vec![x],
            None if self.x_max < self.x_min => Vec::new(),
            None if self.x_max == self.x_min => vec![self.x_min; self.x_points.min(1)],
            None => log_space(self.x_min, self.x_max, self.x_points),
        };
        Grid::new(nu_values, x_values, "none").map_err(|e| e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_reproduce_the_default_grid() {
        let cfg = RunConfig::resolve(Overrides::default());
        assert_eq!(cfg.grid().unwrap(), Grid::default_grid());
        assert_eq!(cfg.tol, DEFAULT_TOL);
    }

    #[test]
    fn flags_beat_file_beat_defaults() {
        let file = Overrides::parse("nu-min = 2\nnu_max=3\n# comment\n\ntol=1e-9").unwrap();
        let flags = Overrides { nu_max: Some(4.0), ..Overrides::default() };
        let cfg = RunConfig::resolve(flags.over(file));
        assert_eq!((cfg.nu_min, cfg.nu_max, cfg.tol), (2.0, 4.0, 1e-9));
        assert_eq!(cfg.nu_step, 0.25);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(Overrides::parse("speed=3").unwrap_err().contains("unknown key"));
        assert!(Overrides::parse("x_points=-1").is_err());
        assert!(Overrides::parse("just text").is_err());
    }

    #[test]
    fn config_survives_a_file_round_trip() {
        let flags = Overrides {
            nu: Some(0.5),
            x_points: Some(7),
            y0: Some(-0.1),
            tol: Some(1e-13),
            out: Some(PathBuf::from("a b/c.csv")),
            seed: Some(42),
            ..Overrides::default()
        };
        let cfg = RunConfig::resolve(flags);
        let again = RunConfig::resolve(Overrides::parse(&cfg.to_overrides().to_text()).unwrap());
        assert_eq!(again, cfg);
    }

    #[test]
    fn single_points_and_empty_ranges() {
        let single = RunConfig::resolve(Overrides { nu: Some(0.0), x: Some(1.0), ..Overrides::default() });
        assert_eq!(single.grid().unwrap().len(), 1);
        let empty = RunConfig::resolve(Overrides { nu_min: Some(1.0), nu_max: Some(0.0), ..Overrides::default() });
        assert!(empty.grid().unwrap().is_empty());
        let bad = RunConfig::resolve(Overrides { nu_step: Some(0.0), ..Overrides::default() });
        assert!(bad.grid().is_err());
    }
}
