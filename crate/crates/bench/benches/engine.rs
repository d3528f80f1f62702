//! Criterion benchmarks for the hot paths: jet arithmetic, curvature
//! assembly, and soliton residual evaluation.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use solitonlab_core::soliton::{declared_potential, fit_lambda, soliton_residual_point};
use solitonlab_core::{parse_expression, zoo, Geometry, Jet};

fn bench_jets(c: &mut Criterion) {
    let coords: Vec<String> = vec!["x".into(), "y".into(), "z".into()];
    let e = parse_expression("exp(0.5*x)*sin(y*z)/(2+cos(x))+sqrt(4+z^2)", &coords).unwrap();
    let p = [0.3, -0.4, 0.7];
    c.bench_function("jet/expression-order3", |b| {
        b.iter(|| e.eval(black_box(&p), 3, 1e-12).unwrap())
    });
    let a = e.eval(&p, 3, 1e-12).unwrap();
    let d = parse_expression("x^2+cos(y)*z", &coords)
        .unwrap()
        .eval(&p, 3, 1e-12)
        .unwrap();
    c.bench_function("jet/mul-order3", |b| b.iter(|| black_box(&a).mul(&d)));
    c.bench_function("jet/exp-order3", |b| b.iter(|| black_box(&a).exp()));
    let _ = Jet::constant(3, 3, 1.0);
}

fn bench_curvature(c: &mut Criterion) {
    let m3 = zoo::example_3_6(1.0).unwrap().spec;
    let p3 = [0.2, 0.5, 0.9];
    c.bench_function("geometry/at-dim3", |b| {
        b.iter(|| Geometry::at(black_box(&m3), &p3).unwrap())
    });
    let m5 = zoo::hyperbolic(2).unwrap().spec;
    let p5 = [0.5, 0.1, -0.2, 0.3, -0.4];
    c.bench_function("geometry/at-dim5", |b| {
        b.iter(|| Geometry::at(black_box(&m5), &p5).unwrap())
    });
    let geo = Geometry::at(&m3, &p3).unwrap();
    c.bench_function("geometry/riemann-04-full-dim3", |b| {
        b.iter(|| black_box(&geo).riemann_04_full())
    });
}

fn bench_soliton(c: &mut Criterion) {
    let m = zoo::example_4_5().spec;
    let p = [0.3, -0.2, 0.7];
    let geo = Geometry::at(&m, &p).unwrap();
    let v = geo
        .vector_field(m.potential_vector.as_ref().unwrap())
        .unwrap();
    c.bench_function("soliton/residual-point", |b| {
        b.iter(|| soliton_residual_point(black_box(&geo), &v, 4.0).unwrap())
    });
    let pot = declared_potential(&m).unwrap();
    c.bench_function("soliton/fit-lambda-20pts", |b| {
        b.iter(|| fit_lambda(black_box(&m), &pot, 42, 20).unwrap())
    });
}

criterion_group!(benches, bench_jets, bench_curvature, bench_soliton);
criterion_main!(benches);
