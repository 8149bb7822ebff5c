use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use overfit_forge::*;

fn support(c: &mut Criterion) {
    let mut g = c.benchmark_group("support");
    g.sample_size(10);
    let one = classifier_1d(&ClassifierParams::one_d(11, 0.9)).unwrap();
    g.bench_function("grid_1d_1e-5", |bch| {
        bch.iter(|| support_measure(&one, SupportMethod::Grid { resolution: 1e-5 }, 0.0, 1 << 24).unwrap())
    });
    let two = classifier_nd(&ClassifierParams::nd(2, 4, 1.5)).unwrap();
    g.bench_function("monte_carlo_2d_1e5", |bch| {
        bch.iter(|| {
            support_measure(&two, SupportMethod::MonteCarlo { samples: 100_000, seed: black_box(1) }, 0.0, 1 << 24)
                .unwrap()
        })
    });
    g.finish();
}

criterion_group!(benches, support);
criterion_main!(benches);
