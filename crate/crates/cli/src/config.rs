//! Run configuration: flags, an optional flat `key = value` file, and the
//! merge between them (flags win).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use qdilog_core::suites::{self, SuiteConfig};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Everything a `verify` run depends on. Two equal configs give the same reports.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub taus: Vec<Complex64>,
    pub suites: Vec<&'static str>,
    pub grid: (usize, f64),
    /// Global override first, then per-suite overrides.
    pub tolerance: Option<f64>,
    pub suite_tolerances: BTreeMap<String, f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let s = SuiteConfig::default();
        Self {
            taus: vec![Complex64::new(1.0, 0.0)],
            suites: suites::SUITES.to_vec(),
            grid: s.grid,
            tolerance: None,
            suite_tolerances: BTreeMap::new(),
            out: None,
            format: Format::Json,
            seed: s.seed,
        }
    }
}

impl RunConfig {
    pub fn suite_config(&self) -> SuiteConfig {
        SuiteConfig {
            grid: self.grid,
            seed: self.seed,
            ..SuiteConfig::default()
        }
    }

    pub fn tolerance_for(&self, suite: &str) -> Option<f64> {
        self.suite_tolerances.get(suite).copied().or(self.tolerance)
    }
}

/// Raw settings, as strings, from either source.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub tau: Option<String>,
    pub suite: Option<String>,
    pub grid: Option<String>,
    pub tol: Option<String>,
    pub out: Option<String>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
}

impl Settings {
    /// Fields set in `self` replace those of `base`.
    pub fn over(self, base: Settings) -> Settings {
        Settings {
            tau: self.tau.or(base.tau),
            suite: self.suite.or(base.suite),
            grid: self.grid.or(base.grid),
            tol: self.tol.or(base.tol),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
            seed: self.seed.or(base.seed),
        }
    }

    pub fn resolve(self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(t) = &self.tau {
            cfg.taus = parse_list(t, parse_complex)?;
        }
        if let Some(s) = &self.suite {
            let names: Vec<String> = s
                .split(',')
                .map(|x| x.trim().to_string())
                .filter(|x| !x.is_empty())
                .collect();
            cfg.suites = suites::expand(&names).ok_or_else(|| {
                let bad: Vec<&str> = names
                    .iter()
                    .map(String::as_str)
                    .filter(|n| !suites::is_suite(n))
                    .collect();
                CliError::Usage(format!(
                    "unknown suite {}; known: all, {}",
                    bad.join(", "),
                    suites::SUITES.join(", ")
                ))
            })?;
            if cfg.suites.is_empty() {
                return Err(CliError::Usage("no suite given".into()));
            }
        }
        if let Some(g) = &self.grid {
            cfg.grid = parse_grid(g)?;
        }
        if let Some(t) = &self.tol {
            parse_tolerances(t, &mut cfg)?;
        }
        cfg.out = self.out.map(PathBuf::from);
        if let Some(f) = self.format {
            cfg.format = f;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        Ok(cfg)
    }
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<Settings, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> Result<Settings, CliError> {
    let mut s = Settings::default();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected key = value", n + 1))
        })?;
        let v = v.trim().to_string();
        match k.trim() {
            "tau" => s.tau = Some(v),
            "suite" => s.suite = Some(v),
            "grid" => s.grid = Some(v),
            "tol" => s.tol = Some(v),
            "out" => s.out = Some(v),
            "format" => {
                s.format = Some(match v.as_str() {
                    "json" => Format::Json,
                    "csv" => Format::Csv,
                    _ => {
                        return Err(CliError::Usage(format!(
                            "config line {}: format must be json or csv",
                            n + 1
                        )))
                    }
                })
            }
            "seed" => {
                s.seed = Some(v.parse().map_err(|_| {
                    CliError::Usage(format!("config line {}: bad seed {v:?}", n + 1))
                })?)
            }
            other => {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key {other:?}",
                    n + 1
                )))
            }
        }
    }
    Ok(s)
}

fn parse_list<T>(s: &str, f: fn(&str) -> Result<T, CliError>) -> Result<Vec<T>, CliError> {
    let v: Vec<T> = s
        .split(',')
        .filter(|x| !x.trim().is_empty())
        .map(f)
        .collect::<Result<_, _>>()?;
    if v.is_empty() {
        return Err(CliError::Usage(format!("empty list {s:?}")));
    }
    Ok(v)
}

/// `a`, `a+bi`, `a-bi`, `bi`, `i`, `-i`.
pub fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Usage(format!("cannot parse {s:?} as a complex number"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(Complex64::from).map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent or the leading sign
    let bytes = body.as_bytes();
    let cut = (1..bytes.len())
        .rev()
        .find(|&j| (bytes[j] == b'+' || bytes[j] == b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    let imag = |x: &str| match x {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => x.parse::<f64>().map_err(|_| bad()),
    };
    match cut {
        Some(j) => Ok(Complex64::new(
            body[..j].parse().map_err(|_| bad())?,
            imag(&body[j..])?,
        )),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

/// `NxL`, e.g. `2048x24`.
pub fn parse_grid(s: &str) -> Result<(usize, f64), CliError> {
    let bad = |why: &str| CliError::Usage(format!("grid {s:?}: {why}"));
    let (n, l) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| bad("expected NxL"))?;
    let n: usize = n.trim().parse().map_err(|_| bad("N is not an integer"))?;
    let l: f64 = l.trim().parse().map_err(|_| bad("L is not a number"))?;
    if !n.is_power_of_two() || n < 16 {
        return Err(bad("N must be a power of two, at least 16"));
    }
    if !(l.is_finite() && l > 0.0) {
        return Err(bad("L must be positive"));
    }
    Ok((n, l))
}

/// `1e-6` for every suite, or `suite=1e-6,suite=...`, or both.
fn parse_tolerances(s: &str, cfg: &mut RunConfig) -> Result<(), CliError> {
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (suite, value) = match item.split_once('=') {
            Some((k, v)) => (Some(k.trim()), v.trim()),
            None => (None, item),
        };
        let t: f64 = value
            .parse()
            .map_err(|_| CliError::Usage(format!("tolerance {value:?} is not a number")))?;
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Usage(format!("tolerance {t} must be positive")));
        }
        match suite {
            None => cfg.tolerance = Some(t),
            Some(k) if suites::SUITES.contains(&k) => {
                cfg.suite_tolerances.insert(k.to_string(), t);
            }
            Some(k) => return Err(CliError::Usage(format!("unknown suite {k:?} in --tol"))),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let c = |s| parse_complex(s).unwrap();
        assert_eq!(c("1"), Complex64::new(1.0, 0.0));
        assert_eq!(c("0.5+0.25i"), Complex64::new(0.5, 0.25));
        assert_eq!(c("-1-2i"), Complex64::new(-1.0, -2.0));
        assert_eq!(c("2i"), Complex64::new(0.0, 2.0));
        assert_eq!(c("-i"), Complex64::new(0.0, -1.0));
        assert_eq!(c("1e-3+1e-3i"), Complex64::new(1e-3, 1e-3));
        assert_eq!(c("1-i"), Complex64::new(1.0, -1.0));
        assert!(parse_complex("1+").is_err());
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn grids_and_tolerances() {
        assert_eq!(parse_grid("2048x24").unwrap(), (2048, 24.0));
        assert!(parse_grid("1000x24").is_err());
        assert!(parse_grid("2048").is_err());
        let mut cfg = RunConfig::default();
        parse_tolerances("1e-5,classical=1e-11", &mut cfg).unwrap();
        assert_eq!(cfg.tolerance_for("pentagon"), Some(1e-5));
        assert_eq!(cfg.tolerance_for("classical"), Some(1e-11));
        assert!(parse_tolerances("nope=1", &mut cfg).is_err());
        assert!(parse_tolerances("-1", &mut cfg).is_err());
    }

    #[test]
    fn flags_win_over_the_file() {
        let file = parse_config_text("# run\ntau = 0.5, 2\nsuite = classical\nseed = 9\n").unwrap();
        let flags = Settings {
            seed: Some(3),
            ..Settings::default()
        };
        let cfg = flags.over(file).resolve().unwrap();
        assert_eq!(cfg.seed, 3);
        assert_eq!(cfg.suites, vec!["classical"]);
        assert_eq!(cfg.taus.len(), 2);
        assert!(parse_config_text("colour = red").is_err());
    }

    #[test]
    fn unknown_suite_is_a_usage_error() {
        let s = Settings {
            suite: Some("pentagon,nope".into()),
            ..Settings::default()
        };
        assert!(matches!(s.resolve(), Err(CliError::Usage(_))));
    }
}
