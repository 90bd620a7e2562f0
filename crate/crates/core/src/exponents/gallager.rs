//! Gallager's random-coding exponent for equiprobable BPSK on the AWGN
//! channel, `E_r(R) = max_{0 <= rho <= 1} [E0(rho) - rho R ln 2]` in nats.

use std::f64::consts::{LN_2, PI};

use crate::error::{domain, Result};
use crate::numerics::{brent_min, integrate_points, Tolerance};

const SPAN_SIGMAS: f64 = 12.0;
const QUAD_TOL: Tolerance = Tolerance { abs_tol: 1e-300, rel_tol: 1e-13, max_iter: 400 };
const RHO_TOL: Tolerance = Tolerance { abs_tol: 1e-12, rel_tol: 1e-12, max_iter: 200 };

/// `E0(rho) = -ln int (p(y|+1)^{1/(1+rho)} / 2 + p(y|-1)^{1/(1+rho)} / 2)^{1+rho} dy`
/// with `sigma^2 = 1/(2c)`, integrated over `[-1 - 12 sigma, 1 + 12 sigma]`.
pub fn gallager_e0(rho: f64, c: f64) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return domain(format!("c must be positive and finite, got {c}"));
    }
    if !(0.0..=1.0).contains(&rho) {
        return domain(format!("rho must lie in [0, 1], got {rho}"));
    }
    let s2 = 0.5 / c;
    let sigma = s2.sqrt();
    let norm = 1.0 / (2.0 * PI * s2).sqrt();
    let e = 1.0 + rho;
    let f = |y: f64| {
        let a = -(y - 1.0).powi(2) / (2.0 * s2 * e);
        let b = -(y + 1.0).powi(2) / (2.0 * s2 * e);
        let m = a.max(b);
        let mix = 0.5 * ((a - m).exp() + (b - m).exp());
        norm * (e * (m + mix.ln())).exp()
    };
    let span = 1.0 + SPAN_SIGMAS * sigma;
    let r = integrate_points(f, -span, span, &[-1.0, 0.0, 1.0], &QUAD_TOL);
    Ok(-r.value.ln())
}

/// Random-coding exponent at rate `R` (bits per symbol) and `c = Es/N0`.
/// Zero when `R` is at or above the mutual information of the channel.
pub fn gallager_rce(rate: f64, c: f64) -> Result<f64> {
    if !(rate > 0.0 && rate < 1.0) {
        return domain(format!("rate must lie in (0, 1), got {rate}"));
    }
    gallager_e0(0.0, c)?;
    let obj = |rho: f64| -(gallager_e0(rho, c).unwrap_or(f64::NAN) - rho * rate * LN_2);
    let (_, v) = brent_min(obj, 0.0, 1.0, &RHO_TOL);
    let at_one = obj(1.0);
    Ok((-v).max(-at_one).max(0.0))
}
