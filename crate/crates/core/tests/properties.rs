mod common;

use common::{max_gap, oracle, points};
use overfit_forge::*;
use proptest::prelude::*;

fn sin_data(n: usize) -> TrainingSet {
    sample_function(|x| (std::f64::consts::PI * x[0]).sin(), GridSpec::new(1, n).unwrap(), 1000).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn classifier_reaches_zero_loss(n in 2usize..24, b in 0.0f64..0.995) {
        let net = classifier_1d(&ClassifierParams::one_d(n, b)).unwrap();
        let data = halfspace_set(GridSpec::new(1, n).unwrap(), 1000).unwrap();
        let r = check_global_optimum(&net, &data, LossKind::Mse, Tolerances::default()).unwrap();
        prop_assert!(r.pass, "{:?}", r);
    }

    #[test]
    fn approximator_interpolates(ys in prop::collection::vec(-5.0f64..5.0, 2..16), b in 0.0f64..0.99) {
        let n = ys.len();
        let pts = grid_1d(n).unwrap().into_iter().map(|x| vec![x]).collect();
        let data = TrainingSet::new(1, pts, ys.clone(), Some(GridSpec::new(1, n).unwrap().meta())).unwrap();
        let net = approximator_1d(&data, b).unwrap();
        let r = check_global_optimum(&net, &data, LossKind::Mae, Tolerances::default()).unwrap();
        prop_assert!(r.pass, "{:?}", r);
        let xs = points(1, 200, n as u64);
        prop_assert!(max_gap(&xs, |x| net.forward_unchecked(x), |x| oracle::approximator(x, n, &ys, b)) <= 1e-12);
    }

    #[test]
    fn prelu_matches_relu(alpha in -2.0f64..0.95, n in 2usize..10, b in 1.0f64..1.95) {
        let p = ClassifierParams::nd(2, n, b);
        let relu = classifier_nd(&p).unwrap();
        let prelu = classifier_nd_prelu(&p, alpha, None).unwrap();
        prop_assert_eq!(prelu.hidden_widths(), vec![2 * (2 * n + 1), 4]);
        let xs = points(2, 300, n as u64);
        prop_assert!(max_gap(&xs, |x| relu.forward_unchecked(x), |x| prelu.forward_unchecked(x)) <= 1e-9);
    }

    #[test]
    fn relu_exact_composes(m1 in 1usize..5, m2 in 1usize..5, b in 0.0f64..0.99) {
        let net = approximator_1d(&sin_data(7), b).unwrap();
        let twice = extend(&extend(&net, &ExtensionParams::relu_exact(m1)).unwrap(), &ExtensionParams::relu_exact(m2)).unwrap();
        let once = extend(&net, &ExtensionParams::relu_exact(m1 + m2)).unwrap();
        prop_assert_eq!(twice.hidden_count(), once.hidden_count());
        prop_assert!(measure_extension_error(&once, &twice, 500, 1).unwrap().max <= 1e-9);
    }

    #[test]
    fn padding_is_inert(widths in prop::collection::vec(1usize..6, 1..5), eps in 0.001f64..0.5) {
        let net = approximator_1d(&sin_data(5), 0.3).unwrap();
        let layers = widths.len();
        let narrow = extend(&net, &ExtensionParams::sigmoid(layers, eps)).unwrap();
        let wide = extend(&net, &ExtensionParams::sigmoid(layers, eps).with_widths(widths)).unwrap();
        let xs = points(1, 200, 3);
        prop_assert!(max_gap(&xs, |x| narrow.forward_unchecked(x), |x| wide.forward_unchecked(x)) == 0.0);
    }

    #[test]
    fn json_round_trip_is_bit_exact(n in 2usize..8, b in 0.0f64..0.99, alpha in -1.0f64..0.9) {
        let net = approximator_1d_prelu(&sin_data(n), b, alpha, None).unwrap();
        let back = Mlp::from_json(&net.to_json().unwrap()).unwrap();
        prop_assert_eq!(&back, &net);
        for x in points(1, 100, 5) {
            prop_assert_eq!(back.forward_unchecked(&x).to_bits(), net.forward_unchecked(&x).to_bits());
        }
    }

    #[test]
    fn spike_bounded_and_peaked(t in -1.0f64..1.0, k in 1.0f64..500.0) {
        let v = sigmoid_spike(t, k);
        prop_assert!(v > 0.0 || t.abs() * k > 30.0);
        prop_assert!(v <= 1.0 + 1e-15);
        if t.abs() >= 1e-6 {
            prop_assert!(v < 1.0);
        }
    }

    #[test]
    fn support_reports_are_deterministic(seed in 0u64..1000) {
        let net = classifier_nd(&ClassifierParams::nd(2, 4, 1.5)).unwrap();
        let method = SupportMethod::MonteCarlo { samples: 20_000, seed };
        let a = support_measure(&net, method, 0.0, 1 << 20).unwrap();
        let b = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap()
            .install(|| support_measure(&net, method, 0.0, 1 << 20).unwrap());
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn support_within_bound(d in 2usize..4, n in 2usize..6, frac in 0.05f64..1.0) {
        let b = d as f64 - frac;
        let net = classifier_nd(&ClassifierParams::nd(d, n, b)).unwrap();
        let r = support_measure(&net, SupportMethod::MonteCarlo { samples: 40_000, seed: 2 }, 0.0, 1 << 20)
            .unwrap()
            .with_bound(support_bound_analytic(n, d, b).unwrap());
        prop_assert!(r.pass, "{:?}", r);
    }
}
