use proptest::prelude::*;
use tsbound::codes::{random_ensemble_spectrum, spectrum_from_json, spectrum_to_json, DistanceSpectrum, GrowthRate, SpectrumKind};
use tsbound::exponents::{tsb_exponent, verify_kstar_zero, TripleChernoff};
use tsbound::numerics::{log_sum_exp, IncGamma};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gamma_halves_sum_to_one(a in 0.05f64..400.0, x in 0.0f64..600.0) {
        let (lp, lq) = IncGamma::new(a).unwrap().logs(x);
        prop_assert!((lp.exp() + lq.exp() - 1.0).abs() < 1e-12, "a {} x {}: {} {}", a, x, lp, lq);
        prop_assert!(lp <= 0.0 && lq <= 0.0);
    }

    #[test]
    fn log_sum_exp_is_shift_equivariant(xs in prop::collection::vec(-700.0f64..700.0, 1..20), shift in -300.0f64..300.0) {
        let base = log_sum_exp(&xs);
        let moved: Vec<f64> = xs.iter().map(|x| x + shift).collect();
        prop_assert!((log_sum_exp(&moved) - base - shift).abs() < 1e-10 * (1.0 + base.abs()));
        let top = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(base >= top && base <= top + (xs.len() as f64).ln() + 1e-12);
    }

    #[test]
    fn spectrum_json_round_trips(n in 3usize..200, rate in 0.01f64..0.99, holes in prop::collection::vec(any::<bool>(), 200)) {
        let base = random_ensemble_spectrum(n, rate).unwrap();
        let log_a: Vec<f64> = base.log_a().iter().enumerate()
            .map(|(h, &v)| if h > 0 && holes[h] { f64::NEG_INFINITY } else { v })
            .collect();
        prop_assume!(log_a[1..].iter().any(|v| v.is_finite()));
        let spec = DistanceSpectrum::from_log_counts(SpectrumKind::Ensemble, n, Some(rate), log_a).unwrap();
        let back = spectrum_from_json(&spectrum_to_json(&spec)).unwrap();
        prop_assert_eq!(back.log_a(), spec.log_a());
        prop_assert_eq!(back.rate(), spec.rate());
        prop_assert_eq!(back.d_min(), spec.d_min());
    }

    #[test]
    fn hunter_tilt_k_is_zero_at_optimum(
        n in 6usize..400,
        wf in 0.01f64..0.99,
        hf in 0.01f64..0.99,
        c in 0.05f64..6.0,
        ln_eta in -4.0f64..4.0,
        tf in 0.0f64..0.999,
    ) {
        let (w, h) = (((wf * n as f64) as usize).clamp(1, n - 1), ((hf * n as f64) as usize).clamp(1, n - 1));
        let eta = ln_eta.exp();
        let tc = TripleChernoff::new(c, eta, w, h, n, 0.0).unwrap();
        let t = -tf * 0.5 / eta;
        let (_, k, g) = tc.maximize_sk(t);
        prop_assert!(k <= 1e-9, "w {} h {} t {}: k* = {}", w, h, t, k);
        let (_, g0) = tc.maximize_s(t);
        prop_assert!((g - g0).abs() <= 1e-12 * (1.0 + g0.abs()));
    }

    #[test]
    fn tsb_exponent_grows_with_snr(rate in 0.05f64..0.95, c in 0.05f64..5.0, step in 0.01f64..1.0) {
        let g = GrowthRate::RandomEnsemble { rate };
        let lo = tsb_exponent(&g, c).unwrap().exponent;
        let hi = tsb_exponent(&g, c + step).unwrap().exponent;
        prop_assert!(hi >= lo - 1e-12, "R {} c {}: {} > {}", rate, c, lo, hi);
        prop_assert!(lo >= 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kstar_search_agrees_with_closed_form(
        n in 6usize..120,
        wf in 0.05f64..0.95,
        hf in 0.05f64..0.95,
        c in 0.1f64..4.0,
        ln_eta in -2.0f64..2.0,
        tf in 0.0f64..0.95,
    ) {
        let (w, h) = (((wf * n as f64) as usize).clamp(1, n - 1), ((hf * n as f64) as usize).clamp(1, n - 1));
        let eta = ln_eta.exp();
        let tc = TripleChernoff::new(c, eta, w, h, n, 0.0).unwrap();
        let rep = verify_kstar_zero(&tc, -tf * 0.5 / eta).unwrap();
        prop_assert!(rep.k <= 1e-6, "{:?}", rep);
        prop_assert!((rep.max_g - rep.closed_form_g).abs() <= 1e-9 * (1.0 + rep.closed_form_g.abs()), "{:?}", rep);
    }
}
