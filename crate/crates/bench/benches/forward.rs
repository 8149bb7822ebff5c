use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use overfit_forge::*;

fn sin_data(n: usize) -> TrainingSet {
    sample_function(|x| (std::f64::consts::PI * x[0]).sin(), GridSpec::new(1, n).unwrap(), 1000).unwrap()
}

fn forward(c: &mut Criterion) {
    let mut g = c.benchmark_group("forward");
    for n in [6usize, 50, 500] {
        let net = classifier_1d(&ClassifierParams::one_d(n, 0.9)).unwrap();
        g.bench_with_input(BenchmarkId::new("relu_classifier_1d", n), &net, |bch, net| {
            bch.iter(|| net.forward_unchecked(black_box(&[0.37])))
        });
    }
    for n in [4usize, 16] {
        let net = classifier_nd(&ClassifierParams::nd(2, n, 1.5)).unwrap();
        g.bench_with_input(BenchmarkId::new("relu_classifier_2d", n), &net, |bch, net| {
            bch.iter(|| net.forward_unchecked(black_box(&[0.37, 0.61])))
        });
    }
    let data = sin_data(9);
    let sig = approximator_1d_sigmoid(&data, &SigmoidSpikeParams::new(50.0, 150.0, 0.2)).unwrap();
    g.bench_function("sigmoid_approx_1d", |bch| bch.iter(|| sig.forward_unchecked(black_box(&[0.37]))));
    for m in [10usize, 100] {
        let base = classifier_1d(&ClassifierParams::one_d(6, 0.9)).unwrap();
        let net = extend(&base, &ExtensionParams::relu_exact(m)).unwrap();
        g.bench_with_input(BenchmarkId::new("relu_exact_extended", m), &net, |bch, net| {
            bch.iter(|| net.forward_unchecked(black_box(&[0.37])))
        });
    }
    g.finish();
}

fn construct(c: &mut Criterion) {
    let mut g = c.benchmark_group("construct");
    g.bench_function("relu_classifier_2d_n50", |bch| {
        bch.iter(|| classifier_nd(&ClassifierParams::nd(2, black_box(50), 1.5)).unwrap())
    });
    let data = sin_data(64);
    g.bench_function("relu_approx_1d_n64", |bch| bch.iter(|| approximator_1d(black_box(&data), 0.5).unwrap()));
    g.finish();
}

criterion_group!(benches, forward, construct);
criterion_main!(benches);
