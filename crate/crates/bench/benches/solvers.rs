use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wigner_clt::chebyshev::psi;
use wigner_clt::ensembles::{sample, EnsembleSpec};
use wigner_clt::predict::cov_kernel_quadrature;
use wigner_clt::{Beta, ModelParams, TestFunction};

fn eigensolve(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectrum");
    for beta in [Beta::Real, Beta::Complex, Beta::Quaternion] {
        for n in [32, 128] {
            let m = sample(&EnsembleSpec::gaussian(beta, n, 1)).unwrap();
            group.bench_with_input(BenchmarkId::new(format!("beta{beta}"), n), &m, |b, m| {
                b.iter(|| m.spectrum().unwrap())
            });
        }
    }
    group.finish();
}

fn sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample");
    for beta in [Beta::Real, Beta::Complex, Beta::Quaternion] {
        let spec = EnsembleSpec::gaussian(beta, 128, 1);
        group.bench_function(format!("beta{beta}/128"), |b| b.iter(|| sample(black_box(&spec)).unwrap()));
    }
    group.finish();
}

fn chebyshev(c: &mut Criterion) {
    let f = TestFunction::exp(0.5).unwrap();
    for l in [64, 1024] {
        c.bench_function(&format!("psi/exp/{l}"), |b| b.iter(|| psi(black_box(&f), l).unwrap()));
    }
}

fn kernel(c: &mut Criterion) {
    let p = ModelParams::gaussian(Beta::Quaternion);
    let (f, g) = (TestFunction::monomial(2), TestFunction::exp(0.5).unwrap());
    c.bench_function("kernel_quadrature/x2_exp", |b| {
        b.iter(|| cov_kernel_quadrature(black_box(&f), black_box(&g), &p).unwrap())
    });
}

criterion_group!(benches, eigensolve, sampling, chebyshev, kernel);
criterion_main!(benches);
