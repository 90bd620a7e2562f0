//! The common exponent of the TSB family and the union-bound exponent,
//! as minima over the normalised weight `delta` of closed-form objectives in
//! the growth rate `r(delta)`.

use super::ExponentResult;
use crate::codes::GrowthRate;
use crate::error::{domain, Result};
use crate::numerics::{brent_min, Tolerance};

const DELTA_GRID: usize = 4001;
const DELTA_MIN: f64 = 1e-9;
const DELTA_TOL: Tolerance = Tolerance { abs_tol: 1e-13, rel_tol: 1e-12, max_iter: 300 };

/// Objective of the TSB exponent at one `delta`, with the optimising
/// `gamma` and `c0`:
///
/// ```text
/// f(delta) = ln(1 - gamma + gamma e^{-2r}) / 2 + gamma D c / (1 + gamma D),  D = delta / (1 - delta)
/// c0       = (1 - e^{-2r}) (1 - delta) / (2 delta)
/// gamma    = clamp_[0,1]( (1 - delta)/delta [sqrt(c/c0 + (1 + c)^2 - 1) - (1 + c)] )   (r > 0)
/// gamma    = 1                                                                     (r <= 0)
/// ```
///
/// `gamma` maximises the concave-in-`gamma` objective over `[0, 1]`.  At
/// `delta = 1` the value is the limit `c - min(r(1), 0)`; `r = -inf` gives
/// `+inf`.
pub fn tsb_exponent_at(rate_fn: &GrowthRate, c: f64, delta: f64) -> Result<(f64, f64, f64)> {
    if !(c > 0.0) {
        return domain(format!("c must be positive, got {c}"));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return domain(format!("delta must lie in (0, 1], got {delta}"));
    }
    let r = rate_fn.eval(delta);
    if r.is_nan() {
        return domain(format!("growth rate undefined at delta = {delta}"));
    }
    Ok(objective(r, c, delta))
}

fn objective(r: f64, c: f64, delta: f64) -> (f64, f64, f64) {
    if r == f64::NEG_INFINITY {
        return (f64::INFINITY, 1.0, f64::NAN);
    }
    if delta >= 1.0 {
        return if r > 0.0 { (c, 0.0, 0.0) } else { (c - r, 1.0, f64::NAN) };
    }
    let dd = delta / (1.0 - delta);
    let (gamma, c0) = if r > 0.0 {
        let x = -(-2.0 * r).exp_m1();
        let c0 = x * (1.0 - delta) / (2.0 * delta);
        let g = (1.0 - delta) / delta * ((c / c0 + (1.0 + c).powi(2) - 1.0).sqrt() - (1.0 + c));
        (g.clamp(0.0, 1.0), c0)
    } else {
        (1.0, f64::NAN)
    };
    // 1 - gamma + gamma e^{-2r} = 1 + gamma (e^{-2r} - 1)
    let first = 0.5 * (gamma * (-2.0 * r).exp_m1()).ln_1p();
    (first + gamma * dd * c / (1.0 + gamma * dd), gamma, c0)
}

fn minimise_over_delta<F: Fn(f64) -> f64>(rate_fn: &GrowthRate, f: F) -> f64 {
    match rate_fn {
        GrowthRate::Tabulated(s) => {
            let n = s.n();
            let mut best = (f64::INFINITY, 1.0);
            for h in 1..=n {
                let d = h as f64 / n as f64;
                let v = f(d);
                if v < best.0 {
                    best = (v, d);
                }
            }
            best.1
        }
        _ => {
            let step = (1.0 - DELTA_MIN) / (DELTA_GRID - 1) as f64;
            let at = |i: usize| if i == DELTA_GRID - 1 { 1.0 } else { DELTA_MIN + step * i as f64 };
            let mut best = (f64::INFINITY, 0);
            for i in 0..DELTA_GRID {
                let v = f(at(i));
                if v < best.0 {
                    best = (v, i);
                }
            }
            let (lo, hi) = (at(best.1.saturating_sub(1)), at((best.1 + 1).min(DELTA_GRID - 1)));
            let (d, v) = brent_min(&f, lo, hi, &DELTA_TOL);
            if v < best.0 {
                d
            } else {
                at(best.1)
            }
        }
    }
}

fn check(c: f64) -> Result<()> {
    if !(c > 0.0 && c.is_finite()) {
        return domain(format!("c must be positive and finite, got {c}"));
    }
    Ok(())
}

/// `E(c) = min_{0 < delta <= 1} f(delta)` with `f` from [`tsb_exponent_at`],
/// minimised over the whole interval (a 4001-point grid refined by Brent, or
/// every `delta = h/n` for a tabulated growth rate).
pub fn tsb_exponent(rate_fn: &GrowthRate, c: f64) -> Result<ExponentResult> {
    check(c)?;
    let eval = |d: f64| {
        let r = rate_fn.eval(d);
        if r.is_nan() {
            f64::INFINITY
        } else {
            objective(r, c, d).0
        }
    };
    let d = minimise_over_delta(rate_fn, eval);
    let (e, gamma, c0) = tsb_exponent_at(rate_fn, c, d)?;
    if !e.is_finite() {
        return domain("growth rate is -inf or undefined on the whole delta interval");
    }
    Ok(ExponentResult { exponent: e, delta_star: d, gamma_star: gamma, c0_star: c0, vacuous: e <= 0.0 })
}

/// Union-bound exponent `min_{0 < delta <= 1} {delta c - r(delta)}`, the
/// exponent of `sum_h A_h exp(-h c)`.  Negative values (vacuous) are
/// reported as they are, with the flag set.
pub fn union_exponent(rate_fn: &GrowthRate, c: f64) -> Result<ExponentResult> {
    check(c)?;
    let eval = |d: f64| {
        let r = rate_fn.eval(d);
        if r.is_nan() {
            f64::INFINITY
        } else {
            d * c - r
        }
    };
    let d = minimise_over_delta(rate_fn, eval);
    let e = eval(d);
    if !e.is_finite() {
        return domain("growth rate is -inf or undefined on the whole delta interval");
    }
    Ok(ExponentResult { exponent: e, delta_star: d, gamma_star: 1.0, c0_star: f64::NAN, vacuous: e <= 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    #[test]
    fn matches_prototype_values() {
        let half = GrowthRate::RandomEnsemble { rate: 0.5 };
        for (c, want) in [(0.8, 0.01688), (1.5, 0.14516), (3.0, 0.298)] {
            let e = tsb_exponent(&half, c).unwrap().exponent;
            assert!((e - want).abs() < 1e-3 + 1e-5, "c = {c}: {e}");
        }
    }

    #[test]
    fn zero_growth_gives_pairwise_exponent() {
        let zero = GrowthRate::Custom(Arc::new(|_| 0.0));
        let e = tsb_exponent(&zero, 0.7).unwrap();
        // r = 0: gamma = 1, f = D c / (1 + D) = delta c, minimised at delta -> 0
        assert!(e.exponent < 1e-8);
        let u = union_exponent(&zero, 0.7).unwrap();
        assert!(u.exponent < 1e-8);
    }

    #[test]
    fn endpoint_limit() {
        let g = GrowthRate::Custom(Arc::new(|_| 0.2));
        assert_eq!(tsb_exponent_at(&g, 1.0, 1.0).unwrap().0, 1.0);
        let g = GrowthRate::Custom(Arc::new(|_| -0.2));
        assert!((tsb_exponent_at(&g, 1.0, 1.0).unwrap().0 - 1.2).abs() < 1e-15);
    }

    #[test]
    fn union_never_above_tsb() {
        for rate in [0.3, 0.5, 0.9] {
            let g = GrowthRate::RandomEnsemble { rate };
            for c in [0.5, 1.0, 2.0, 4.0] {
                let u = union_exponent(&g, c).unwrap().exponent;
                let t = tsb_exponent(&g, c).unwrap().exponent;
                assert!(u <= t + 1e-9, "R = {rate}, c = {c}: {u} > {t}");
            }
        }
    }
}
