//! `verify`: every (suite, τ) pair, assembled in request order.

use std::fmt::Write as _;
use std::io::Write as _;

use num_complex::Complex64;
use qdilog_core::suites;
use qdilog_core::{ModularParameter, VerificationReport};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::CliError;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub schema: u32,
}

/// A (suite, τ) pair that produced no reports, with the reason.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Skipped {
    pub suite: String,
    pub tau_re: f64,
    pub tau_im: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunOutput {
    pub schema: u32,
    pub reports: Vec<VerificationReport>,
    pub skipped: Vec<Skipped>,
    pub summary: Summary,
    /// `(suite, τ, checks, passed)` per requested pair, for the table.
    #[serde(skip)]
    pub groups: Vec<(String, Complex64, usize, usize)>,
}

impl RunOutput {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

fn skip_reason(suite: &str, tau: Complex64) -> &'static str {
    if suite == "integral-identities" && tau.im != 0.0 {
        "integral identities are checked for real tau only"
    } else {
        "suite produced no checks"
    }
}

/// Runs every pair concurrently; the output order is suite-major, then τ in
/// the order given, independent of scheduling.
pub fn execute(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let params: Vec<ModularParameter> = cfg
        .taus
        .iter()
        .map(|&t| ModularParameter::new(t).map_err(|e| CliError::Usage(format!("tau = {t}: {e}"))))
        .collect::<Result<_, _>>()?;
    let sc = cfg.suite_config();
    let pairs: Vec<(&str, &ModularParameter)> = cfg
        .suites
        .iter()
        .flat_map(|s| params.iter().map(move |p| (*s, p)))
        .collect();
    let results: Vec<(&str, Complex64, Vec<VerificationReport>)> = pairs
        .par_iter()
        .map(|&(s, p)| {
            let mut reports = suites::run_suite(s, p, &sc).expect("suite names are validated");
            if let Some(t) = cfg.tolerance_for(s) {
                reports = reports
                    .into_iter()
                    .map(|r| r.override_tolerance(t))
                    .collect();
            }
            (s, p.tau, reports)
        })
        .collect();

    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    let mut groups = Vec::new();
    for (s, tau, r) in results {
        groups.push((
            s.to_string(),
            tau,
            r.len(),
            r.iter().filter(|x| x.passed).count(),
        ));
        if r.is_empty() {
            skipped.push(Skipped {
                suite: s.to_string(),
                tau_re: tau.re,
                tau_im: tau.im,
                reason: skip_reason(s, tau).to_string(),
            });
        }
        reports.extend(r);
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    let summary = Summary {
        total: reports.len(),
        passed,
        failed: reports.len() - passed,
        schema: SCHEMA,
    };
    Ok(RunOutput {
        schema: SCHEMA,
        reports,
        skipped,
        summary,
        groups,
    })
}

pub fn to_json(out: &RunOutput) -> String {
    let mut s = serde_json::to_string_pretty(out).expect("reports serialise");
    s.push('\n');
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn joined<V: std::fmt::Display>(m: &std::collections::BTreeMap<String, V>) -> String {
    m.iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

/// One row per report; params and provenance as `key=value;...`.
pub fn to_csv(out: &RunOutput) -> String {
    let mut s = String::from(
        "suite,identity,tau_re,tau_im,residual,tolerance,passed,wall_time,params,provenance\n",
    );
    for r in &out.reports {
        let tau = |k: &str| r.params.get(k).map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},{},{},{:e},{:e},{},{},{},{}",
            csv_field(&r.suite),
            csv_field(&r.identity),
            tau("tau_re"),
            tau("tau_im"),
            r.residual,
            r.tolerance,
            r.passed,
            r.wall_time,
            csv_field(&joined(&r.params)),
            csv_field(&joined(&r.provenance)),
        );
    }
    s
}

pub fn render(out: &RunOutput, format: Format) -> String {
    match format {
        Format::Json => to_json(out),
        Format::Csv => to_csv(out),
    }
}

/// Counts per suite and τ, then one line per failed check.
pub fn summary_table(out: &RunOutput) -> String {
    let mut s = format!(
        "{:<20} {:<18} {:>6} {:>6} {:>6}\n",
        "suite", "tau", "checks", "passed", "failed"
    );
    for (suite, tau, n, p) in &out.groups {
        let label = format_tau(*tau);
        if *n == 0 {
            let _ = writeln!(
                s,
                "{suite:<20} {label:<18} skipped: {}",
                skip_reason(suite, *tau)
            );
            continue;
        }
        let _ = writeln!(s, "{suite:<20} {label:<18} {n:>6} {p:>6} {:>6}", n - p);
    }
    let failures: Vec<&VerificationReport> = out.reports.iter().filter(|r| !r.passed).collect();
    if !failures.is_empty() {
        s.push_str("\nfailed checks:\n");
        for r in failures {
            let why = r
                .provenance
                .get("error")
                .map(|e| format!(" ({e})"))
                .unwrap_or_default();
            let _ = writeln!(
                s,
                "  [{}] {}  residual {:.3e} > {:.1e}{why}",
                r.suite, r.identity, r.residual, r.tolerance
            );
        }
    }
    let _ = writeln!(
        s,
        "\ntotal {}  passed {}  failed {}",
        out.summary.total, out.summary.passed, out.summary.failed
    );
    s
}

fn format_tau(t: Complex64) -> String {
    if t.im != 0.0 {
        format!("{:.6}{:+.6}i", t.re, t.im)
    } else {
        format!("{}", t.re)
    }
}

/// Written once, after every report is in.
pub fn write_output(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    let mut f = std::fs::File::create(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    f.write_all(text.as_bytes())
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
