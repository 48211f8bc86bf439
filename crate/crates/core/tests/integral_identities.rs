use qdilog_core::oscillatory::{
    ftd_check, ftd_values, mir_check, pentagon_kernel_reduction, pentagon_kernel_steps, shc_check,
    tail_agreement_check, IdentityKind, OscillatorySpec, TailMethod,
};
use qdilog_core::ModularParameter;

fn both() -> [OscillatorySpec; 2] {
    let s = OscillatorySpec::default();
    [
        s.with_method(TailMethod::AsymptoticSubtraction),
        s.with_method(TailMethod::ContourTilt),
    ]
}

#[test]
fn fourier_duality_at_unit_tau() {
    let p = ModularParameter::real(1.0).unwrap();
    for spec in both() {
        for x in [0.7, -0.7] {
            let r = ftd_check(x, &p, &spec);
            assert!(r.passed && r.residual < 1e-6, "{r:?}");
        }
    }
}

#[test]
fn shifted_contour_at_half() {
    let p = ModularParameter::real(1.0).unwrap();
    for spec in both() {
        let r = shc_check(0.5, &p, &spec);
        assert!(r.passed, "{r:?}");
    }
}

#[test]
fn main_relation_examples() {
    let p = ModularParameter::real(1.0).unwrap();
    let spec = OscillatorySpec::default();
    for (x, y) in [(0.3, 0.2), (0.0, 0.2)] {
        let r = mir_check(x, y, &p, &spec);
        assert!(r.passed && r.residual < 1e-5, "{r:?}");
    }
    for tau in [0.5, 2.0] {
        let r = mir_check(0.3, 0.2, &ModularParameter::real(tau).unwrap(), &spec);
        assert!(r.passed, "{r:?}");
    }
}

#[test]
fn main_relation_near_window_edges() {
    let p = ModularParameter::real(1.0).unwrap();
    let w = p.omega_dprime.norm();
    for f in [0.05, 0.95] {
        let r = mir_check(0.3, f * w, &p, &OscillatorySpec::default());
        assert!(
            r.residual.is_finite() && r.params["lhs_re"].is_finite(),
            "{r:?}"
        );
    }
}

#[test]
fn tail_methods_agree() {
    let p = ModularParameter::real(1.0).unwrap();
    let spec = OscillatorySpec::default();
    for (kind, x, y) in [
        (IdentityKind::Ftd, 0.7, 0.0),
        (IdentityKind::Shc, -1.1, 0.0),
        (IdentityKind::Mir, 0.3, 0.2),
    ] {
        let r = tail_agreement_check(kind, x, y, &p, &spec, 0.0);
        assert!(r.passed, "{r:?}");
    }
}

#[test]
fn duality_is_continuous_in_x() {
    let p = ModularParameter::real(1.0).unwrap();
    let spec = OscillatorySpec::default();
    let a = ftd_values(0.9, &p, &spec).unwrap();
    let b = ftd_values(0.9 + 1e-3, &p, &spec).unwrap();
    assert!(a.relative_residual() < 1e-9 && b.relative_residual() < 1e-9);
    let step = (a.lhs.value - b.lhs.value).norm();
    assert!(step > 0.0 && step < 1e-2);
}

#[test]
fn kernel_reduction_at_acceptance_point() {
    let p = ModularParameter::real(1.0).unwrap();
    let spec = OscillatorySpec::default();
    let steps = pentagon_kernel_steps(0.8, 0.3, &p, &spec);
    assert_eq!(steps.len(), 5);
    for s in &steps {
        assert!(s.passed, "{s:?}");
    }
    // the main-term Lorentzian is a small-a form; at a = 0.5 it is off by an order of magnitude
    let last = &steps[4];
    assert!((last.params["ratio"] - 2.0).abs() < 0.01);
    assert!(last.params["magnitude_over_lorentzian"] > 5.0);
    assert!(pentagon_kernel_reduction(0.8, 0.3, &p, &spec).passed);
}
