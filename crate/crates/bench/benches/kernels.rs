use criterion::{black_box, criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use qdilog_bench::{evaluator, real_points};
use qdilog_core::grid::{Grid, GridOperators, Operator, TestVector};
use qdilog_core::{weyl_mul, ModularParameter, WeylElement};

fn gamma_evaluation(c: &mut Criterion) {
    let ev = evaluator(1.0);
    let points = real_points(21);
    c.bench_function("gamma at 21 real points, tau = 1", |b| {
        b.iter(|| {
            for z in &points {
                black_box(ev.gamma(*z).unwrap());
            }
        })
    });
    let z = Complex64::new(0.3, -0.2);
    c.bench_function("gamma at one complex point, tau = 1", |b| {
        b.iter(|| ev.gamma(black_box(z)).unwrap())
    });
}

fn grid_evolution(c: &mut Criterion) {
    let p = ModularParameter::real(1.0).unwrap();
    let mut group = c.benchmark_group("S on the grid");
    group.sample_size(20);
    for n in [1024usize, 2048] {
        let g = Grid::for_tau(&p, n, 24.0).unwrap();
        let ops = GridOperators::new(&p, g).unwrap();
        let f = TestVector::gaussian(0.0, 0.0).sample(g);
        group.bench_function(format!("N = {n}"), |b| {
            b.iter(|| ops.apply(&Operator::S, black_box(&f)).unwrap())
        });
    }
    group.finish();
}

fn weyl_product(c: &mut Criterion) {
    let q = Complex64::new(0.3, 0.2);
    let one = Complex64::new(1.0, 0.0);
    let deg = 6;
    let x = WeylElement::monomial(1, 0, one, q, deg)
        .add(&WeylElement::monomial(0, 1, one, q, deg))
        .unwrap()
        .add_scalar(one);
    let y = x.mul(&x).unwrap();
    c.bench_function("Weyl product, degree 6", |b| {
        b.iter(|| weyl_mul(black_box(&y), black_box(&x)).unwrap())
    });
}

criterion_group!(benches, gamma_evaluation, grid_evolution, weyl_product);
criterion_main!(benches);
