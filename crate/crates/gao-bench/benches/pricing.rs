use criterion::{black_box, criterion_group, criterion_main, Criterion};

use gao_core::affine::{cir_riccati, wishart_riccati, Model};
use gao_core::bounds::{fourier_geometric_call, gao_lower_bound, DampingSpec};
use gao_core::measure::{build_setup, MeasureConvention};
use gao_core::montecarlo::{mc_gao_price, Estimator, McConfig};
use gao_core::numerics::{matrix_exp, Matrix, QuadratureRule};
use gao_core::reference;

fn bench_riccati(c: &mut Criterion) {
    let model = reference::mcir_model(0.0).unwrap();
    let factor = model.factors[0];
    c.bench_function("cir_riccati_closed_form", |b| {
        b.iter(|| cir_riccati(black_box(15.0), black_box(1.0), &factor).unwrap())
    });

    let wishart = reference::wishart_example1(0.0).unwrap();
    let loading = wishart.discount_loading();
    c.bench_function("wishart_riccati_linearization", |b| {
        b.iter(|| wishart_riccati(black_box(15.0), &loading, &wishart).unwrap())
    });
}

fn bench_matrix_exp(c: &mut Criterion) {
    let m = Matrix::from_rows(&[
        vec![-0.5, 0.4, 0.0072, 0.0],
        vec![0.007, -0.008, 0.0, 0.0072],
        vec![1.0, 0.0, 0.5, -0.007],
        vec![0.0, 1.0, -0.4, 0.008],
    ])
    .scaled(15.0);
    c.bench_function("matrix_exp_4x4", |b| b.iter(|| matrix_exp(black_box(&m)).unwrap()));
}

fn bench_bounds(c: &mut Criterion) {
    let setup = reference::table2_setup(0.0, MeasureConvention::Reference).unwrap();
    c.bench_function("gao_lower_bound_mcir", |b| {
        b.iter(|| gao_lower_bound(black_box(&setup)).unwrap())
    });
    let damping = DampingSpec::default();
    let rule = QuadratureRule::default();
    c.bench_function("fourier_call_mcir", |b| {
        b.iter(|| fourier_geometric_call(black_box(&setup), &damping, &rule).unwrap())
    });

    let wsetup = reference::wishart_setup(1, 0.0, MeasureConvention::Reference).unwrap();
    c.bench_function("fourier_call_wishart", |b| {
        b.iter(|| fourier_geometric_call(black_box(&wsetup), &damping, &rule).unwrap())
    });
}

fn bench_setup_construction(c: &mut Criterion) {
    let model = Model::Wishart(reference::wishart_example1(0.0).unwrap());
    let contract = reference::contract();
    c.bench_function("build_setup_wishart_forward", |b| {
        b.iter(|| build_setup(&model, &contract, MeasureConvention::Forward).unwrap())
    });
}

fn bench_monte_carlo(c: &mut Criterion) {
    let setup = reference::table2_setup(0.0, MeasureConvention::Reference).unwrap();
    let cfg = McConfig::new(10_000, 42, Estimator::DirectTerminal, 200).unwrap();
    c.bench_function("mc_direct_terminal_10k_mcir", |b| {
        b.iter(|| mc_gao_price(black_box(&setup), &cfg).unwrap())
    });

    let wsetup = reference::wishart_setup(1, 0.0, MeasureConvention::Forward).unwrap();
    let path_cfg = McConfig::new(1_000, 42, Estimator::RnPath, 200).unwrap();
    c.bench_function("mc_rn_path_1k_wishart", |b| {
        b.iter(|| mc_gao_price(black_box(&wsetup), &path_cfg).unwrap())
    });
}

criterion_group!(
    benches,
    bench_riccati,
    bench_matrix_exp,
    bench_bounds,
    bench_setup_construction,
    bench_monte_carlo
);
criterion_main!(benches);
