use num_complex::Complex64;
use proptest::prelude::*;
use qdilog_core::grid::{Grid, GridOperators, Operator, TestVector};
use qdilog_core::ysystem::y_closed_forms;
use qdilog_core::{
    five_term_residual, rogers_L, weyl_mul, y_orbit, Contour, FiveTermForm, GammaEvaluator, Lcg,
    ModularParameter, WeylElement,
};
use std::f64::consts::PI;

const DEG: u32 = 12;

fn q_strategy() -> impl Strategy<Value = Complex64> {
    (0.3f64..1.2, 0.0f64..(2.0 * PI)).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

/// Up to four monomials `c Uᵃ Vᵇ` with |a|, |b| <= 2.
fn element(q: Complex64) -> impl Strategy<Value = WeylElement> {
    prop::collection::vec((-2i32..=2, -2i32..=2, -1.0f64..1.0, -1.0f64..1.0), 1..=4).prop_map(
        move |terms| {
            terms
                .into_iter()
                .map(|(a, b, re, im)| WeylElement::monomial(a, b, Complex64::new(re, im), q, DEG))
                .reduce(|x, y| x.add(&y).unwrap())
                .unwrap()
        },
    )
}

fn three_elements() -> impl Strategy<Value = (WeylElement, WeylElement, WeylElement)> {
    q_strategy().prop_flat_map(|q| (element(q), element(q), element(q)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weyl_product_is_associative((x, y, z) in three_elements()) {
        let left = weyl_mul(&weyl_mul(&x, &y).unwrap(), &z).unwrap();
        let right = weyl_mul(&x, &weyl_mul(&y, &z).unwrap()).unwrap();
        prop_assert!(left.discrepancy(&right, DEG) < 1e-12);
    }

    #[test]
    fn weyl_pair_commutes_up_to_q_squared(q in q_strategy(), a in -3i32..=3, b in -3i32..=3) {
        // Uᵃ Vᵇ = q^{2ab} Vᵇ Uᵃ
        let one = Complex64::new(1.0, 0.0);
        let ua = WeylElement::monomial(a, 0, one, q, DEG);
        let vb = WeylElement::monomial(0, b, one, q, DEG);
        let uv = ua.mul(&vb).unwrap();
        let vu = vb.mul(&ua).unwrap().scale(q.powi(2 * a * b));
        prop_assert!(uv.discrepancy(&vu, DEG) < 1e-12);
    }

    #[test]
    fn y_orbit_has_period_five(lu in -4.0f64..4.0, lv in -4.0f64..4.0) {
        let (u, v) = (lu.exp(), lv.exp());
        let o = y_orbit(u, v).unwrap();
        prop_assert!(o.period_defect() < 1e-12);
        let closed = y_closed_forms(u, v);
        for k in 0..3 {
            prop_assert!((o.x[k + 2] - closed[k]).abs() <= 1e-12 * closed[k]);
        }
    }

    #[test]
    fn five_term_identities(x in 0.01f64..0.99, y in 0.01f64..0.99, lu in -3.0f64..3.0, lv in -3.0f64..3.0) {
        prop_assert!(five_term_residual(FiveTermForm::L, x, y).unwrap().abs() < 1e-12);
        let (u, v) = (lu.exp(), lv.exp());
        prop_assert!(five_term_residual(FiveTermForm::R, u, v).unwrap().abs() < 1e-12);
        prop_assert!(five_term_residual(FiveTermForm::Y, u, v).unwrap().abs() < 1e-12);
    }

    #[test]
    fn rogers_reflection(x in 0.001f64..0.999) {
        let s = rogers_L(x).unwrap() + rogers_L(1.0 - x).unwrap();
        prop_assert!((s - PI * PI / 6.0).abs() < 1e-13);
    }

    #[test]
    fn lcg_is_reproducible(seed in any::<u64>()) {
        let mut a = Lcg::new(seed);
        let mut b = Lcg::new(seed);
        for _ in 0..32 {
            let (x, y) = (a.uniform(), b.uniform());
            prop_assert_eq!(x.to_bits(), y.to_bits());
            prop_assert!((0.0..1.0).contains(&x));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn gamma_is_unimodular_on_the_real_line(x in -5.0f64..5.0, tau in prop::sample::select(vec![0.5, 1.0, 2.0])) {
        let ev = GammaEvaluator::for_tau(Complex64::new(tau, 0.0)).unwrap();
        let g = qdilog_core::gamma(Complex64::new(x, 0.0), &ev).unwrap();
        prop_assert!((g.value.norm() - 1.0).abs() < 1e-8, "{:?}", g);
    }

    #[test]
    fn gamma_inversion_by_direct_integrals(x in 0.05f64..4.0) {
        // both factors from the indented real-axis contour, no inversion shortcut
        let p = ModularParameter::real(1.0).unwrap();
        let ev = GammaEvaluator::new(p).with_contour(Contour::Indented { radius: 0.5 });
        let z = Complex64::new(x, 0.0);
        let a = ev.gamma(z).unwrap().value;
        let b = ev.gamma(-z).unwrap().value;
        let expected = (Complex64::i() * (p.beta + PI * z * z)).exp();
        prop_assert!((a * b - expected).norm() < 1e-8);
    }

    #[test]
    fn grid_fourier_is_unitary_and_of_order_four(c in -2.0f64..2.0, nu in -1.0f64..1.0) {
        let p = ModularParameter::real(1.0).unwrap();
        let g = Grid::new(512, 16.0).unwrap();
        let ops = GridOperators::new(&p, g).unwrap();
        let v = TestVector::gaussian(c, nu);
        let f = v.sample(g);
        let ff = ops.apply_to(&Operator::F, &v).unwrap();
        prop_assert!((ff.norm() - f.norm()).abs() < 1e-10 * f.norm());
        let f4 = ops.apply_to(&Operator::pow(Operator::F, 4), &v).unwrap();
        prop_assert!(f4.relative_distance(&f).unwrap() < 1e-10);
    }
}
