use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::codes::DistanceSpectrum;
use crate::error::{domain, Error, Result};
use crate::geometry::{alpha_theta, AlphaTheta, ConeGeometry};
use crate::numerics::{find_root, ln_sin_power_integral_sc, ln_wallis, log_sum_exp, Tolerance};

/// `ln(sqrt(pi) Gamma((n-2)/2) / Gamma((n-1)/2))`.
fn ln_rhs(n: usize) -> f64 {
    let n = n as f64;
    0.5 * PI.ln() + ln_gamma((n - 2.0) / 2.0) - ln_gamma((n - 1.0) / 2.0)
}

/// `ln LHS(r) - ln RHS` of the cone-radius optimality condition
///
/// `sum_{h: sqrt(h) < alpha_h} A_h int_0^{theta_h} sin^{n-3} = sqrt(pi) Gamma((n-2)/2) / Gamma((n-1)/2)`.
///
/// Equals `-inf` when no weight reaches inside the cone.
pub fn cone_equation(spec: &DistanceSpectrum, r: f64) -> Result<f64> {
    let n = spec.n();
    let geo = ConeGeometry::new(n, r)?;
    let m = (n - 3) as u32;
    let mut terms = Vec::new();
    for h in spec.interior_support() {
        if let AlphaTheta::Included { sin2, cos2, .. } = alpha_theta(h, &geo)? {
            terms.push(spec.ln_count(h) + ln_sin_power_integral_sc(m, sin2, cos2));
        }
    }
    Ok(log_sum_exp(&terms) - ln_rhs(n))
}

/// Optimal cone radius `r*` at the transmitted point.
///
/// The left side grows from zero (below the smallest inclusion radius
/// `sqrt(h n / (n - h))`) to `(sum A_h) * RHS / 2`, so a root exists iff the
/// interior spectrum mass exceeds two; otherwise [`Error::NoSolution`].  The
/// equation involves no noise parameter, so `r*` depends on the spectrum only.
pub fn solve_cone_radius(spec: &DistanceSpectrum) -> Result<f64> {
    let n = spec.n();
    if n < 3 {
        return domain(format!("the cone-radius equation needs n >= 3, got {n}"));
    }
    let support: Vec<usize> = spec.interior_support().collect();
    if support.is_empty() {
        return Err(Error::NoSolution("spectrum has no weight strictly between 0 and n".into()));
    }
    let ln_mass = log_sum_exp(&support.iter().map(|&h| spec.ln_count(h)).collect::<Vec<_>>());
    let ln_limit = ln_mass + ln_wallis((n - 3) as u32) - ln_rhs(n);
    if ln_limit <= 1e-12 {
        return Err(Error::NoSolution(format!(
            "interior spectrum mass {:.6} does not exceed 2; the cone-radius equation has no root",
            ln_mass.exp()
        )));
    }
    let nf = n as f64;
    let lo = support.iter().map(|&h| (h as f64 * nf / (nf - h as f64)).sqrt()).fold(f64::INFINITY, f64::min);
    let f = |r: f64| cone_equation(spec, r).unwrap_or(f64::NAN);
    let mut hi = 2.0 * lo;
    while f(hi) <= 0.0 {
        hi *= 2.0;
        if hi > 1e12 * lo {
            return Err(Error::NoSolution("cone-radius bracket search failed".into()));
        }
    }
    let tol = Tolerance { abs_tol: 1e-14, rel_tol: 1e-15, max_iter: 500 };
    find_root(f, lo, hi, &tol)
}

/// `r*` when the optimality condition has a root, `+inf` otherwise (the
/// bound then decreases in `r` throughout and the cone degenerates to the
/// half-space `z1 <= sqrt(n)`).
pub fn cone_radius_or_unbounded(spec: &DistanceSpectrum) -> Result<f64> {
    if spec.n() < 3 {
        return domain(format!("bounds need n >= 3, got {}", spec.n()));
    }
    match solve_cone_radius(spec) {
        Ok(r) => Ok(r),
        Err(Error::NoSolution(_)) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}
