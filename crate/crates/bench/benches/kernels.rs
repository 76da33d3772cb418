use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use slab_core::linalg::schatten_norm;
use slab_core::measures::{greedy_atomic_decompose, toeplitz_window, DiscreteMeasure};
use slab_core::multiplier::{mult_lower_rank1, mult_upper_hadamard};
use slab_core::symbols::{dyadic_block, dyadic_range, hankel_matrix, lp_norm, phi_witness, DEFAULT_OVERSAMPLE};
use slab_core::{AnalyticSymbol, ComplexMatrix, PExponent, SmoothCutoffSpec, TrigPolynomial, C64};

/// Deterministic dense matrix with no special structure.
fn matrix(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |r, c| {
        let t = (r * 31 + c * 17) as f64;
        C64::new((0.37 * t).sin(), (0.91 * t + 0.2).cos())
    })
    .unwrap()
}

fn symbol(degree: usize) -> AnalyticSymbol {
    AnalyticSymbol::new((0..=degree).map(|k| C64::from_polar(1.0 / (1.0 + k as f64), 0.7 * k as f64)).collect()).unwrap()
}

fn schatten(c: &mut Criterion) {
    let mut g = c.benchmark_group("schatten_norm");
    for n in [3usize, 16, 64, 128] {
        let a = matrix(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| b.iter(|| schatten_norm(black_box(a), 0.5).unwrap()));
    }
    g.finish();
}

fn multiplier(c: &mut Criterion) {
    let p = PExponent::new(0.5).unwrap();
    let mut g = c.benchmark_group("mult_lower_rank1");
    g.sample_size(10);
    for n in [3usize, 6, 8] {
        let a = matrix(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| mult_lower_rank1(black_box(a), p, 4, 7).unwrap())
        });
    }
    g.finish();

    let h = hankel_matrix(&phi_witness(4, 2).unwrap(), 64, 64).unwrap();
    c.bench_function("mult_upper_hadamard/hankel64", |b| b.iter(|| mult_upper_hadamard(black_box(&h), p).unwrap()));
}

fn symbols(c: &mut Criterion) {
    let mut g = c.benchmark_group("lp_norm");
    for degree in [64usize, 1024, 16384] {
        let psi = symbol(degree);
        g.bench_with_input(BenchmarkId::from_parameter(degree), &psi, |b, psi| {
            b.iter(|| lp_norm(black_box(psi), 0.5, DEFAULT_OVERSAMPLE).unwrap())
        });
    }
    g.finish();

    let psi = symbol(4096);
    c.bench_function("dyadic_blocks/4096", |b| {
        b.iter(|| {
            dyadic_range(&psi)
                .into_iter()
                .map(|n| dyadic_block(black_box(&psi), n, &SmoothCutoffSpec::VPartition).unwrap())
                .collect::<Vec<_>>()
        })
    });
}

fn measures(c: &mut Criterion) {
    let mu = DiscreteMeasure::new(vec![(0.3, C64::new(1.0, 0.0)), (2.1, C64::new(0.0, 0.5)), (4.0, C64::new(-0.3, 0.2))]).unwrap();
    c.bench_function("toeplitz_window/256", |b| b.iter(|| toeplitz_window(black_box(&mu), 256).unwrap()));

    let f = TrigPolynomial::from_fn(-40, 40, |k| C64::from_polar((-(k as f64).abs() / 10.0).exp(), 0.3 * k as f64)).unwrap();
    let mut g = c.benchmark_group("greedy_atomic_decompose");
    g.sample_size(10);
    g.bench_function("deg40", |b| b.iter(|| greedy_atomic_decompose(black_box(&f), 0.5, 6, 1e-6)));
    g.finish();
}

criterion_group!(benches, schatten, multiplier, symbols, measures);
criterion_main!(benches);
