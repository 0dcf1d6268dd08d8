use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use wietsim_core::channel::CorrelatedField;
use wietsim_core::eh::{circuit_eh, CircuitEh, DiodeSeries};
use wietsim_core::numerics::linalg::{hermitian_eigen, CMatrix};
use wietsim_core::numerics::special::{bessel_j0, lambert_w0};
use wietsim_core::resalloc::{solve, Objective, SolveOptions, SwiptProblem};
use wietsim_core::eh::{EhModel, LinearEh};
use wietsim_core::waveform::{build_tx, harvest_eval, ChirpSpec, WaveformKind};
use wietsim_core::channel::mmse_estimate;
use wietsim_core::RngStream;

fn special_functions(c: &mut Criterion) {
    c.bench_function("lambert_w0", |b| {
        b.iter(|| lambert_w0(black_box(3.7)).unwrap())
    });
    c.bench_function("bessel_j0", |b| {
        b.iter(|| bessel_j0(black_box(17.3)).unwrap())
    });
    let model = CircuitEh { alpha: 30.0, bcoef: 60.0, i_s: 5e-6, r_l: 1e4, b_v: 6.0 };
    c.bench_function("circuit_eh", |b| b.iter(|| circuit_eh(black_box(2e-4), &model)));
}

fn hermitian_eigen_10(c: &mut Criterion) {
    let mut stream = RngStream::new(1, 0);
    let raw = CMatrix::from_fn(10, 10, |_, _| stream.complex_gaussian());
    let mut h = CMatrix::zeros(10, 10);
    for i in 0..10 {
        for j in 0..10 {
            h[(i, j)] = 0.5 * (raw[(i, j)] + raw[(j, i)].conj());
        }
    }
    c.bench_function("hermitian_eigen_10x10", |b| {
        b.iter(|| hermitian_eigen(black_box(&h)).unwrap())
    });
}

fn chirp_harvest_trial(c: &mut Criterion) {
    let spec = ChirpSpec::new(16, 2, 200e3);
    let diode = DiodeSeries::new(0.6e-3, 1.0, 25e-3, 1.0);
    let mut stream = RngStream::new(2, 0);
    let truth: Vec<Vec<_>> = (0..16)
        .map(|_| stream.complex_gaussian_vec(12))
        .collect();
    let est = mmse_estimate(&truth, 1.0, 1e-4, 16.0, 1e-20, &mut stream);
    let design = build_tx(&est, &spec, 1.0).unwrap();
    c.bench_function("chirp_harvest_symbol", |b| {
        b.iter(|| {
            harvest_eval(
                black_box(&design),
                &truth,
                &spec,
                WaveformKind::Chirp,
                &diode,
                1,
                &mut stream,
            )
            .unwrap()
        })
    });
}

fn correlated_field_sample(c: &mut Criterion) {
    let field = CorrelatedField::new(101, 5e-4, 1e-2).unwrap();
    let mut stream = RngStream::new(3, 0);
    c.bench_function("correlated_field_101", |b| b.iter(|| field.sample(&mut stream)));
}

fn swipt_solve(c: &mut Criterion) {
    let mut stream = RngStream::new(4, 0);
    let channels: Vec<Vec<_>> = (0..3)
        .map(|_| {
            stream
                .complex_gaussian_vec(10)
                .into_iter()
                .map(|z| z * 0.1)
                .collect()
        })
        .collect();
    let problem = SwiptProblem {
        channels,
        weights: vec![1.0 / 3.0; 3],
        p_max: 2.0,
        r_req: vec![0.5; 3],
        p_req: vec![1e-6; 3],
        u_wet_req: 1e-4,
        p_c: 1.0,
        zeta: 1.0,
        eh: vec![EhModel::Linear(LinearEh { eta: 1.0 }); 3],
        noise: vec![1e-3; 3],
    };
    let opts = SolveOptions { restarts: 3, max_iters: 120, ..Default::default() };
    c.bench_function("swipt_solve_wit_eff", |b| {
        b.iter(|| solve(black_box(&problem), Objective::WitEff, &opts).unwrap())
    });
}

criterion_group!(
    benches,
    special_functions,
    hermitian_eigen_10,
    chirp_harvest_trial,
    correlated_field_sample,
    swipt_solve
);
criterion_main!(benches);
