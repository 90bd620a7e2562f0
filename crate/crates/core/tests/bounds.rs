use tsbound::bounds::{
    ahp, ahp_at_layer, itsb, itsb_with_rho, psi, tsb_bit, tsb_block, BoundConfig, ChannelPoint,
};
use tsbound::codes::{enumerate_spectrum, DistanceSpectrum, GeneratorMatrix, Iowef};
use tsbound::numerics::q_function;

fn hamming() -> (DistanceSpectrum, Iowef) {
    enumerate_spectrum(&GeneratorMatrix::hamming74()).unwrap()
}

fn golay() -> (DistanceSpectrum, Iowef) {
    enumerate_spectrum(&GeneratorMatrix::golay23()).unwrap()
}

fn at_db(db: f64, rate: f64) -> ChannelPoint {
    ChannelPoint::from_eb_n0_db(db, rate).unwrap()
}

#[test]
fn repetition_code_bound_is_exact_pairwise_error() {
    let (spec, _) = enumerate_spectrum(&GeneratorMatrix::repetition(3).unwrap()).unwrap();
    let ch = ChannelPoint::new(1.0, 1.0 / 3.0).unwrap();
    let exact = q_function(6f64.sqrt());
    let b = tsb_block(&spec, &ch).unwrap();
    assert!(b.value >= exact * (1.0 - 1e-9), "{} < {exact}", b.value);
    assert!(b.value <= exact * (1.0 + 1e-6), "{} far above {exact}", b.value);
    assert!(b.cone_radius.is_infinite());
}

#[test]
fn hamming_bound_is_tiny_at_high_snr() {
    let (spec, _) = hamming();
    let b = tsb_block(&spec, &at_db(12.0, 4.0 / 7.0)).unwrap();
    assert!(b.value < 1e-6 && b.value > 0.0, "{}", b.value);
}

#[test]
fn cone_radius_does_not_depend_on_noise() {
    let (spec, _) = golay();
    let radii: Vec<f64> = [0.0, 3.0, 7.0].iter().map(|&db| tsb_block(&spec, &at_db(db, 12.0 / 23.0)).unwrap().cone_radius).collect();
    assert!(radii.iter().all(|&r| r == radii[0]), "{radii:?}");
    assert!((radii[0] / 23f64.sqrt() - 1.1706).abs() < 1e-4);
}

#[test]
fn bounds_decrease_with_snr() {
    for (spec, rate) in [(hamming().0, 4.0 / 7.0), (golay().0, 12.0 / 23.0)] {
        let mut last = (f64::INFINITY, f64::INFINITY);
        for db in [0.0, 1.5, 3.0, 4.5, 6.0, 7.5] {
            let ch = at_db(db, rate);
            let now = (tsb_block(&spec, &ch).unwrap().value, ahp(&spec, &ch).unwrap().value);
            assert!(now.0 < last.0 && now.1 < last.1, "{db} dB: {now:?} vs {last:?}");
            last = now;
        }
    }
}

#[test]
fn itsb_moves_with_the_assumed_correlation() {
    // a larger correlation removes more of each Hunter term
    let (spec, _) = golay();
    let ch = at_db(2.0, 12.0 / 23.0);
    let cfg = BoundConfig::default();
    let base = itsb(&spec, &ch).unwrap();
    let zero = itsb_with_rho(&spec, &ch, &cfg, &|_| 0.0).unwrap();
    let anti = itsb_with_rho(&spec, &ch, &cfg, &|_| -0.99).unwrap();
    let slack = base.error_estimate + 1e-12 * base.value;
    assert!(zero.value <= base.value + slack, "{} > {}", zero.value, base.value);
    assert!(anti.value >= base.value - slack, "{} < {}", anti.value, base.value);
}

#[test]
fn extension_at_full_length_is_tsb() {
    for (spec, rate) in [(hamming().0, 4.0 / 7.0), (golay().0, 12.0 / 23.0)] {
        let ch = at_db(3.0, rate);
        let t = tsb_block(&spec, &ch).unwrap();
        let a = ahp_at_layer(&spec, &ch, spec.n(), &BoundConfig::default()).unwrap();
        assert!((a.value - t.value).abs() <= 1e-10 * t.value, "{} vs {}", a.value, t.value);
    }
}

#[test]
fn optimal_layer_beats_every_fixed_layer() {
    let (spec, _) = hamming();
    let ch = at_db(2.0, 4.0 / 7.0);
    let cfg = BoundConfig::default();
    let best = ahp(&spec, &ch).unwrap();
    let w_star = best.ahp_layer.unwrap();
    for w in 1..spec.n() {
        let v = ahp_at_layer(&spec, &ch, w, &cfg).unwrap().value;
        assert!(best.value <= v * (1.0 + 1e-12), "w {w}: {v} < {}", best.value);
        if w < w_star {
            assert!(v > best.value, "tie at w {w} should have been chosen");
        }
    }
}

#[test]
fn psi_is_below_hunter_bounds() {
    let (spec, _) = golay();
    for db in [0.0, 4.0] {
        let ch = at_db(db, 12.0 / 23.0);
        let p = psi(&spec, &ch).unwrap().value;
        assert!(p <= ahp(&spec, &ch).unwrap().value);
        assert!(p <= itsb(&spec, &ch).unwrap().value);
    }
}

#[test]
fn bit_bound_equals_block_bound_when_every_word_flips_all_bits() {
    // k = 1: every nonzero codeword carries message weight k
    let (spec, io) = enumerate_spectrum(&GeneratorMatrix::repetition(5).unwrap()).unwrap();
    let ch = ChannelPoint::new(0.7, 0.2).unwrap();
    let bit = tsb_bit(&io, &ch).unwrap();
    let block = tsb_block(&spec, &ch).unwrap();
    assert!((bit.value - block.value).abs() <= 1e-14 * block.value);
}

#[test]
fn bit_bound_below_block_bound() {
    for ((spec, io), rate) in [(hamming(), 4.0 / 7.0), (golay(), 12.0 / 23.0)] {
        for db in [1.0, 5.0] {
            let ch = at_db(db, rate);
            assert!(tsb_bit(&io, &ch).unwrap().value <= tsb_block(&spec, &ch).unwrap().value);
        }
    }
}

#[test]
fn rejects_short_codes() {
    let spec = DistanceSpectrum::from_counts(&[1, 0, 1], Some(0.5)).unwrap();
    assert!(tsb_block(&spec, &ChannelPoint::new(1.0, 0.5).unwrap()).is_err());
}
