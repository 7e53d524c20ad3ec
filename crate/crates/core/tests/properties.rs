use proptest::prelude::*;
use spectral_privacy::channel::FilterPlan;
use spectral_privacy::waterfill::DEFAULT_TOL;
use spectral_privacy::*;

/// Autocovariance of a random FIR filter: always a valid spectrum.
fn valid_lags() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 1..10).prop_filter_map("nonzero", |h| {
        let lags: Vec<f64> = (0..h.len())
            .map(|m| h.iter().zip(&h[m..]).map(|(a, b)| a * b).sum())
            .collect();
        (lags[0] > 1e-3).then_some(lags)
    })
}

fn psd(lags: &[f64], grid: usize) -> SpectralDensity {
    psd_from_autocorrelation(&AutocorrelationSequence::new(lags.to_vec()).unwrap(), grid).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn inverse_transform_recovers_lags(lags in valid_lags(), extra in 0usize..3) {
        let grid = 4 * lags.len() * (1 << extra) + 64;
        let s = psd(&lags, grid);
        prop_assert!(s.min() >= 0.0);
        prop_assert!((s.variance() - lags[0]).abs() <= 1e-9);
        for m in 0..=grid / 4 {
            let c = lags.get(m).copied().unwrap_or(0.0);
            prop_assert!((s.autocovariance(m) - c).abs() <= 1e-9);
        }
    }

    #[test]
    fn distortion_and_rate_are_monotone(lags in valid_lags(), a in 1e-3f64..3.0, b in 1e-3f64..3.0) {
        let s = psd(&lags, 512);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(distortion_of_level(&s, lo) <= distortion_of_level(&s, hi));
        prop_assert!(rate_of_level(&s, lo) >= rate_of_level(&s, hi));
        prop_assert!(distortion_of_level(&s, s.max()) - s.variance() <= 1e-12);
        prop_assert_eq!(rate_of_level(&s, s.max()), 0.0);
    }

    #[test]
    fn curve_is_monotone_and_bounded(lags in valid_lags(), alpha in -5.0f64..5.0) {
        let s = psd(&lags, 512);
        let c0 = s.variance();
        let grid: Vec<f64> = (1..20).map(|i| c0 * i as f64 / 20.0).collect();
        let model = InferenceModel::Linear { alpha };
        let pts = tradeoff_curve(&s, &model, &grid).unwrap();
        for w in pts.windows(2) {
            prop_assert!(w[1].rate <= w[0].rate + 1e-12);
            prop_assert!(w[1].leakage <= w[0].leakage + 1e-12);
        }
        for p in &pts {
            prop_assert!(p.phi > 0.0 && p.rate >= 0.0);
            prop_assert!(p.leakage >= 0.0 && p.leakage <= p.rate + 1e-9);
        }
        let second = pts.windows(3).map(|w| w[2].rate - 2.0 * w[1].rate + w[0].rate);
        for d2 in second {
            prop_assert!(d2 >= -1e-6);
        }
    }

    #[test]
    fn low_regime_matches_entropy_power(lags in valid_lags(), frac in 0.05f64..0.95) {
        let s = psd(&lags, 1024);
        prop_assume!(s.min() > 1e-2);
        let d = frac * s.min();
        let phi = solve_water_level(&s, d, DEFAULT_TOL).unwrap();
        prop_assert!((phi - d).abs() <= 1e-9);
        let expected = 0.5 * (s.entropy_power() / d).log2();
        prop_assert!((rate_of_level(&s, phi) - expected).abs() <= 1e-6);
    }

    #[test]
    fn plan_matches_test_channel(lags in valid_lags(), frac in 0.01f64..0.99) {
        let s = psd(&lags, 1024);
        let phi = solve_water_level(&s, frac * s.variance(), DEFAULT_TOL).unwrap();
        let plan = plan_filter(&s, phi, 256).unwrap();
        for (k, (&g, &v)) in plan.gains.iter().zip(&plan.noise_vars).enumerate() {
            let power = s.interpolate(2.0 * std::f64::consts::PI * k as f64 / 256.0);
            prop_assert!((0.0..1.0).contains(&g));
            prop_assert!((v - g * phi).abs() <= 1e-15);
            // per-bin expected error (1-a)^2 S + a phi is min(S, phi)
            let err = (1.0 - g).powi(2) * power + g * phi;
            prop_assert!((err - power.min(phi)).abs() <= 1e-9 * (1.0 + power));
            if power <= phi {
                prop_assert_eq!(g, 0.0);
            }
        }
    }

    #[test]
    fn identity_plan_reconstructs(x in prop::collection::vec(-100.0f64..100.0, 64..700)) {
        let plan = FilterPlan::from_parts(0.0, vec![1.0; 33], vec![0.0; 33]).unwrap();
        let out = sanitize(&x, &plan, 0).unwrap();
        let rms = (x.iter().zip(&out.samples).map(|(a, b)| (a - b).powi(2)).sum::<f64>()
            / x.len() as f64).sqrt();
        prop_assert!(rms <= 1e-9);
    }

    #[test]
    fn psd_json_round_trip(lags in valid_lags()) {
        let s = psd(&lags, 64);
        let back: SpectralDensity = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        prop_assert_eq!(back, s);
    }
}

#[test]
fn curve_points_are_order_independent() {
    let s = psd(&[1.0, 0.3, 0.4], 4096);
    let grid: Vec<f64> = (1..40).map(|i| i as f64 / 40.0).collect();
    let model = InferenceModel::Linear { alpha: 2.0 };
    let all = tradeoff_curve(&s, &model, &grid).unwrap();
    for (d, p) in grid.iter().zip(&all) {
        let single = tradeoff_curve(&s, &model, &[*d]).unwrap()[0];
        assert_eq!(single.phi.to_bits(), p.phi.to_bits());
        assert_eq!(single.rate.to_bits(), p.rate.to_bits());
        assert_eq!(single.leakage.to_bits(), p.leakage.to_bits());
    }
}
