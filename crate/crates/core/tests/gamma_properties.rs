use std::f64::consts::PI;

use num_complex::Complex64;
use qdilog_core::{
    property_suite, residue_fit, theta, theta_product, GammaEvaluator, ModularParameter, SampleSpec,
};

#[test]
fn property_suite_passes_on_three_tau() {
    for tau in [0.5, 1.0, 2.0] {
        let p = ModularParameter::real(tau).unwrap();
        for r in property_suite(&p, &SampleSpec::default()) {
            assert!(
                r.passed,
                "tau {tau}: {} residual {:e} {:?}",
                r.identity, r.residual, r.provenance
            );
        }
    }
}

#[test]
fn residues_at_tau_one_and_two() {
    for tau in [1.0, 2.0, 0.5] {
        let p = ModularParameter::real(tau).unwrap();
        let fit = residue_fit(&p).unwrap();
        assert!(fit.c1_rel_error < 1e-6, "tau {tau}: {fit:?}");
        assert!(fit.c2_rel_error < 1e-6, "tau {tau}: {fit:?}");
        assert!(fit.product_rel_error < 1e-8, "tau {tau}: {fit:?}");
    }
}

#[test]
fn product_form_agrees_with_integral() {
    let p = ModularParameter::new(Complex64::from_polar(1.0, PI / 6.0)).unwrap();
    for u in [
        Complex64::from(0.3),
        Complex64::new(1.5, 0.7),
        Complex64::new(0.02, -0.01),
        Complex64::new(-0.4, 0.6),
    ] {
        let a = theta_product(u, &p).unwrap().value;
        let b = theta(u, &p).unwrap().value;
        assert!(
            (a - b).norm() < 1e-8 * b.norm().max(1.0),
            "u {u}: {a} vs {b}"
        );
    }
}

#[test]
fn theta_shift_relation_at_tau_point_eight() {
    let p = ModularParameter::real(0.8).unwrap();
    let ev = GammaEvaluator::new(p);
    let u = Complex64::from(0.5);
    let lhs = ev.theta(p.q * u).unwrap().value / ev.theta(u / p.q).unwrap().value;
    assert!((lhs - 1.0 / (1.0 + u)).norm() < 1e-11);
}
