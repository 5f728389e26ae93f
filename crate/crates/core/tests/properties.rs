use bandrecon::reconstruct::{grid, shannon_partial_sum, time_regularized, LocalOperator};
use bandrecon::sampling::SampleSet;
use bandrecon::specfun::{bessel_i0, sinc};
use bandrecon::{
    BandlimitedTestFunction, FrequencyWindow, FrequencyWindowKind, Method, NoiseModel, Reconstructor, SamplingConfig,
    TimeWindow, TimeWindowKind,
};
use proptest::prelude::*;

fn kind_strategy() -> impl Strategy<Value = FrequencyWindowKind> {
    prop::sample::select(FrequencyWindowKind::ALL.to_vec())
}

fn time_kind() -> impl Strategy<Value = TimeWindowKind> {
    prop::sample::select(vec![TimeWindowKind::SinhType, TimeWindowKind::ContinuousKaiserBessel])
}

proptest! {
    #[test]
    fn sinc_even_and_bounded(x in -1e6f64..1e6) {
        prop_assert_eq!(sinc(x), sinc(-x));
        prop_assert!(sinc(x).abs() <= 1.0);
    }

    #[test]
    fn i0_even_and_at_least_one(x in -700f64..700.0) {
        let v = bessel_i0(x).unwrap();
        prop_assert_eq!(v, bessel_i0(-x).unwrap());
        prop_assert!(v >= 1.0);
    }

    #[test]
    fn hat_is_one_on_band_and_zero_outside(kind in kind_strategy(), lambda in 0.05f64..3.0, v in -2000f64..2000.0) {
        let cfg = SamplingConfig::new(64, lambda).unwrap();
        let w = FrequencyWindow::new(kind, cfg).unwrap();
        let h = w.hat(v);
        prop_assert!((0.0..=1.0).contains(&h));
        prop_assert_eq!(h, w.hat(-v));
        if v.abs() <= 32.0 {
            prop_assert_eq!(h, 1.0);
        }
        if v.abs() >= 0.5 * cfg.rate() {
            prop_assert_eq!(h, 0.0);
        }
    }

    #[test]
    fn time_window_even_monotone(kind in time_kind(), m in 2u32..12, lambda in 0.1f64..3.0, a in 0f64..1.0, b in 0f64..1.0) {
        let cfg = SamplingConfig::new(128, lambda).unwrap();
        let w = TimeWindow::new(kind, m, cfg).unwrap();
        let r = w.support_radius();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert_eq!(w.eval(lo * r), w.eval(-lo * r));
        prop_assert!(w.eval(lo * r) >= w.eval(hi * r));
        prop_assert!(w.eval(hi * r) >= 0.0);
        prop_assert_eq!(w.eval(r * (1.0 + 1e-9) + 1e-12), 0.0);
    }

    #[test]
    fn shannon_sum_is_linear(seed in any::<u64>(), c in -3f64..3.0, t in -1f64..1.0) {
        let radius = 20;
        let x = NoiseModel::bounded_uniform(1.0, seed).unwrap().perturbation(-radius, 41);
        let y = NoiseModel::bounded_uniform(1.0, seed ^ 1).unwrap().perturbation(-radius, 41);
        let z: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + c * b).collect();
        let set = |v: Vec<f64>| SampleSet::new(16.0, -radius, v).unwrap();
        let sx = shannon_partial_sum(&set(x), radius, t).unwrap();
        let sy = shannon_partial_sum(&set(y), radius, t).unwrap();
        let sz = shannon_partial_sum(&set(z), radius, t).unwrap();
        prop_assert!((sz - sx - c * sy).abs() <= 1e-12 * (1.0 + sx.abs() + c.abs() * sy.abs()) * 41.0);
    }

    #[test]
    fn bounded_noise_stays_in_range(seed in any::<u64>(), eps in 0f64..1.0, k_min in -1000i64..1000, len in 0usize..300) {
        let e = NoiseModel::bounded_uniform(eps, seed).unwrap().perturbation(k_min, len);
        prop_assert_eq!(e.len(), len);
        prop_assert!(e.iter().all(|x| x.abs() <= eps));
    }

    #[test]
    fn time_reconstruction_interpolates(kind in time_kind(), m in 2u32..9, lambda in 0.25f64..2.0, n in -60i64..60) {
        let cfg = SamplingConfig::new(32, lambda).unwrap();
        let f = BandlimitedTestFunction::shifted_pair(32).unwrap();
        let samples = f.sample(cfg.rate(), -200, 200).unwrap();
        let w = TimeWindow::new(kind, m, cfg).unwrap();
        let node = n as f64 / cfg.rate();
        let v = time_regularized(&samples, &w, node).unwrap();
        prop_assert!((v - samples.get(n).unwrap()).abs() <= 1e-15 * (1.0 + v.abs()));
    }

    #[test]
    fn local_operator_matches_pointwise(kind in time_kind(), m in 2u32..8, seed in any::<u64>()) {
        let cfg = SamplingConfig::new(16, 1.0).unwrap();
        let w = TimeWindow::new(kind, m, cfg).unwrap();
        let points = grid(-1.0, 1.0, 37).unwrap();
        let noise = NoiseModel::bounded_uniform(1.0, seed).unwrap().perturbation(-50, 101);
        let set = SampleSet::new(cfg.rate(), -50, noise).unwrap();
        let op = LocalOperator::new(&w, cfg.rate(), &points);
        let fast = op.apply(&set).unwrap();
        let rec = Reconstructor::new(Method::TimeReg { window: w }, set).unwrap();
        for (p, v) in points.iter().zip(fast) {
            prop_assert!((rec.eval(*p).unwrap() - v).abs() <= 1e-13);
        }
    }
}
