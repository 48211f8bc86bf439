//! Named groups of checks. Every check appears in exactly one suite,
//! `all` is the concatenation in registry order.

use std::time::Instant;

use num_complex::Complex64;

use crate::gamma::{
    cross_representation_check, origin_check, property_suite, residue_check, SampleSpec,
};
use crate::grid::{self, Grid};
use crate::oscillatory::{
    ftd_check, mir_check, pentagon_kernel_reduction, pentagon_kernel_steps, shc_check,
    tail_agreement_check, IdentityKind, OscillatorySpec,
};
use crate::params::ModularParameter;
use crate::report::{max_residual, VerificationReport};
use crate::sample::Lcg;
use crate::weyl::{
    compact_pentagon_check, schutzenberger_check, volkov_formal_check, y_system_formal_check,
};
use crate::ysystem::{
    five_term_check, quasiclassical_gamma_check, stationary_phase_check, y_orbit, FiveTermForm,
};

pub const SUITES: [&str; 6] = [
    "gamma-properties",
    "formal-algebra",
    "integral-identities",
    "pentagon",
    "operator-grid",
    "classical",
];

/// q values of the formal-algebra suite; they do not depend on τ.
pub const FORMAL_Q: [Complex64; 2] = [Complex64::new(0.3, 0.0), Complex64::new(0.3, 0.2)];
pub const FORMAL_ORDER: usize = 6;
pub const QUASICLASSICAL_TAUS: [f64; 3] = [0.2, 0.1, 0.05];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    /// `(N, L)` at τ = 1; L is scaled with τ as in [`Grid::for_tau`].
    pub grid: (usize, f64),
    pub seed: u64,
    pub integral_samples: usize,
    pub orbit_samples: usize,
    pub five_term_samples: usize,
    pub stationary_samples: usize,
    pub cross_samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            grid: (2048, 24.0),
            seed: 1,
            integral_samples: 10,
            orbit_samples: 1000,
            five_term_samples: 100,
            stationary_samples: 20,
            cross_samples: 20,
        }
    }
}

pub fn is_suite(name: &str) -> bool {
    name == "all" || SUITES.contains(&name)
}

/// Expands `all` and removes repeats, keeping the registry order.
pub fn expand(names: &[String]) -> Option<Vec<&'static str>> {
    if names.iter().any(|n| !is_suite(n)) {
        return None;
    }
    let all = names.iter().any(|n| n == "all");
    Some(
        SUITES
            .iter()
            .copied()
            .filter(|s| all || names.iter().any(|n| n == s))
            .collect(),
    )
}

/// Each suite draws from its own generator, seeded from the run seed and the
/// suite's position, so adding a suite to a run does not move another's samples.
fn rng_for(suite: &str, seed: u64) -> Lcg {
    let k = SUITES.iter().position(|s| *s == suite).unwrap_or(0) as u64;
    let mut g = Lcg::new(seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(k + 1)));
    g.next_u64();
    g
}

/// `None` for an unknown suite name.
pub fn run_suite(
    name: &str,
    params: &ModularParameter,
    cfg: &SuiteConfig,
) -> Option<Vec<VerificationReport>> {
    let out = match name {
        "gamma-properties" => gamma_properties(params, cfg),
        "formal-algebra" => formal_algebra(),
        "integral-identities" => integral_identities(params, cfg),
        "pentagon" => pentagon(params, cfg),
        "operator-grid" => operator_grid(params, cfg),
        "classical" => classical(cfg),
        _ => return None,
    };
    // checks shared between modules carry their own module name; a run reports
    // under the suite that ran them
    Some(
        out.into_iter()
            .map(|mut r| {
                r.suite = name.to_string();
                r
            })
            .collect(),
    )
}

fn gamma_properties(params: &ModularParameter, cfg: &SuiteConfig) -> Vec<VerificationReport> {
    let mut out = property_suite(params, &SampleSpec::default());
    out.push(origin_check(params));
    out.push(residue_check(params));
    // the product form needs |q| < 1
    if params.tau.im > 0.0 {
        out.push(cross_representation_check(
            params,
            cfg.cross_samples,
            cfg.seed,
        ));
    }
    out
}

fn formal_algebra() -> Vec<VerificationReport> {
    let mut out = Vec::new();
    for q in FORMAL_Q {
        out.push(schutzenberger_check(q, FORMAL_ORDER));
        out.push(compact_pentagon_check(q, FORMAL_ORDER));
        out.push(volkov_formal_check(q, FORMAL_ORDER));
        out.push(y_system_formal_check(q));
    }
    out
}

/// Sample points for the integral identities: x with |x| in [0.2, 2], and
/// (x, y) with x in [-1, 1], y in (0.05, 0.95)·|ω″|.
pub fn integral_points(
    params: &ModularParameter,
    cfg: &SuiteConfig,
) -> (Vec<f64>, Vec<(f64, f64)>) {
    let mut g = rng_for("integral-identities", cfg.seed);
    let xs = (0..cfg.integral_samples)
        .map(|_| {
            let m = g.range(0.2, 2.0);
            if g.uniform() < 0.5 {
                -m
            } else {
                m
            }
        })
        .collect();
    let w = params.omega_dprime.norm();
    let xy = (0..cfg.integral_samples)
        .map(|_| (g.range(-1.0, 1.0), w * g.range(0.05, 0.95)))
        .collect();
    (xs, xy)
}

/// Empty for non-real τ: the identities are stated on the real line.
fn integral_identities(params: &ModularParameter, cfg: &SuiteConfig) -> Vec<VerificationReport> {
    use rayon::prelude::*;
    if !params.is_real() {
        return Vec::new();
    }
    let spec = OscillatorySpec::default();
    let (xs, xy) = integral_points(params, cfg);
    let mut out: Vec<VerificationReport> = xs
        .par_iter()
        .map(|&x| ftd_check(x, params, &spec))
        .collect();
    out.extend(
        xs.par_iter()
            .map(|&x| shc_check(x, params, &spec))
            .collect::<Vec<_>>(),
    );
    out.extend(
        xy.par_iter()
            .map(|&(x, y)| mir_check(x, y, params, &spec))
            .collect::<Vec<_>>(),
    );
    let (x0, (x1, y1)) = (xs[0], xy[0]);
    for (kind, x, y) in [
        (IdentityKind::Ftd, x0, 0.0),
        (IdentityKind::Shc, x0, 0.0),
        (IdentityKind::Mir, x1, y1),
    ] {
        out.push(tail_agreement_check(kind, x, y, params, &spec, 0.0));
    }
    out.extend(pentagon_kernel_steps(0.8, 0.3, params, &spec));
    out.push(pentagon_kernel_reduction(0.8, 0.3, params, &spec));
    out
}

fn grid_for(params: &ModularParameter, cfg: &SuiteConfig) -> Result<Grid, VerificationReport> {
    Grid::for_tau(params, cfg.grid.0, cfg.grid.1).map_err(|e| {
        VerificationReport::new(grid::SUITE, "grid setup", f64::NAN, 0.0)
            .tau(params.tau)
            .note("error", e)
    })
}

fn pentagon(params: &ModularParameter, cfg: &SuiteConfig) -> Vec<VerificationReport> {
    let g = match grid_for(params, cfg) {
        Ok(g) => g,
        Err(r) => return vec![r],
    };
    let ts = grid::default_test_set();
    let mut out = vec![grid::s5_identity_check(params, &g, &ts)];
    out.extend(grid::volkov_operator_reports(params, &g, &ts));
    out
}

fn operator_grid(params: &ModularParameter, cfg: &SuiteConfig) -> Vec<VerificationReport> {
    let g = match grid_for(params, cfg) {
        Ok(g) => g,
        Err(r) => return vec![r],
    };
    let ts = grid::default_test_set();
    let mut out = grid::fourier_checks(params, &g, &ts);
    for i in 1..=5 {
        out.push(grid::conjugation_check(params, &g, i, &ts));
    }
    out.extend(grid::intertwining_checks(params, &g, &ts));
    out.extend(grid::y_system_grid_checks(params, &g, &ts));
    out.extend(grid::refinement_check(params, &g, &ts));
    out
}

/// One report for a batch of sampled reports: largest residual, passes when
/// every member passes.
fn batch(
    identity: &str,
    tolerance: f64,
    reports: Vec<VerificationReport>,
    started: Instant,
) -> VerificationReport {
    let failures = reports.iter().filter(|r| !r.passed).count();
    let mut r = VerificationReport::new(
        "classical",
        identity,
        max_residual(reports.iter().map(|r| r.residual)),
        tolerance,
    )
    .param("samples", reports.len() as f64)
    .param("failures", failures as f64);
    if let Some(bad) = reports.iter().find(|r| !r.passed) {
        r = r.note(
            "first_failure",
            format!("{:?} {:?}", bad.params, bad.provenance),
        );
    }
    r.passed = failures == 0 && !reports.is_empty();
    r.pass_rule("every sample passes").timed(started)
}

fn classical(cfg: &SuiteConfig) -> Vec<VerificationReport> {
    let mut g = rng_for("classical", cfg.seed);
    let mut out = Vec::new();

    let started = Instant::now();
    let orbit: Vec<VerificationReport> = (0..cfg.orbit_samples)
        .map(|_| {
            let (u, v) = (g.log_uniform(1e-2, 1e2), g.log_uniform(1e-2, 1e2));
            let base = VerificationReport::new("classical", "period five", f64::NAN, 1e-12)
                .param("u", u)
                .param("v", v);
            match y_orbit(u, v) {
                Ok(o) => base.with_residual(o.period_defect()),
                Err(e) => base.note("error", e),
            }
        })
        .collect();
    out.push(batch(
        "Y-system recurrence has period five",
        1e-12,
        orbit,
        started,
    ));

    for form in [FiveTermForm::L, FiveTermForm::R, FiveTermForm::Y] {
        let started = Instant::now();
        let reports = (0..cfg.five_term_samples)
            .map(|_| match form {
                FiveTermForm::L => five_term_check(form, g.open_unit(), g.open_unit()),
                _ => five_term_check(form, g.log_uniform(1e-2, 1e2), g.log_uniform(1e-2, 1e2)),
            })
            .collect();
        out.push(batch(form.label(), 1e-12, reports, started));
    }

    let started = Instant::now();
    let reports = (0..cfg.stationary_samples)
        .map(|_| stationary_phase_check(g.range(-3.0, 3.0), g.range(-3.0, 3.0)))
        .collect();
    out.push(batch(
        "stationary phase action sum = -pi^2/2",
        1e-10,
        reports,
        started,
    ));

    for z in [0.0, 0.5, 1.0] {
        out.push(quasiclassical_gamma_check(z, &QUASICLASSICAL_TAUS));
    }
    out
}
