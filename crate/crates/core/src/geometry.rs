//! Cone and correlation geometry.
//!
//! With unit symbol energy the transmitted point lies on the first axis at
//! distance `sqrt(n)` from the origin.  The cone has its apex at the origin
//! and radius `r` at the transmitted point; at height `z1` (noise along the
//! first axis) its cross-section has radius `r_z1 = (sqrt(n) - z1) r / sqrt(n)`.
//! The pairwise error boundary of a weight-`h` codeword cuts that
//! cross-section along the line `z2 = beta_h(z1) = (sqrt(n) - z1) Delta_h`,
//! `Delta_h = sqrt(h / (n - h))`.

use crate::error::{domain, Result};

fn check_interior(h: usize, n: usize) -> Result<()> {
    if h == 0 || h >= n {
        return domain(format!("weight {h} must satisfy 0 < h < n = {n}"));
    }
    Ok(())
}

/// Cone of radius `r` at the transmitted point.  `r = inf` is the degenerate
/// half-space "cone" used when no finite radius is optimal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeGeometry {
    n: usize,
    r: f64,
}

impl ConeGeometry {
    pub fn new(n: usize, r: f64) -> Result<Self> {
        if n < 3 {
            return domain(format!("block length must be at least 3, got {n}"));
        }
        if !(r > 0.0) {
            return domain(format!("cone radius must be positive, got {r}"));
        }
        Ok(ConeGeometry { n, r })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn is_bounded(&self) -> bool {
        self.r.is_finite()
    }

    /// `tan^2` of the cone half-angle, `r^2 / n`.
    pub fn eta(&self) -> f64 {
        self.r * self.r / self.n as f64
    }

    /// Cross-section radius at height `z1`.
    pub fn radius_at(&self, z1: f64) -> f64 {
        let u = (self.n as f64).sqrt() - z1;
        if self.r.is_infinite() {
            return if u > 0.0 { f64::INFINITY } else { 0.0 };
        }
        u * self.r / (self.n as f64).sqrt()
    }

    /// Whether weight `h` can ever produce an error inside the cone:
    /// `Delta_h < r / sqrt(n)`, equivalently `sqrt(h) < alpha_h`.
    pub fn includes(&self, h: usize) -> bool {
        h > 0 && h < self.n && delta_slope(h, self.n).map(|d| d < self.r / (self.n as f64).sqrt()).unwrap_or(false)
    }
}

/// `Delta_h = sqrt(h / (n - h))`.
pub fn delta_slope(h: usize, n: usize) -> Result<f64> {
    check_interior(h, n)?;
    Ok((h as f64 / (n - h) as f64).sqrt())
}

/// Distance from the cone axis to the pairwise boundary of a weight-`h`
/// codeword at height `z1`.
pub fn beta_h(z1: f64, h: usize, geo: &ConeGeometry) -> Result<f64> {
    Ok(((geo.n as f64).sqrt() - z1) * delta_slope(h, geo.n)?)
}

/// `alpha_h` and the half-angle `theta_h` that enter the cone-radius equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaTheta {
    /// `sqrt(h) < alpha_h`: `theta_h = arccos(sqrt(h) / alpha_h)`, with
    /// `sin^2` and `cos^2` of the angle kept for accurate downstream use.
    Included { alpha: f64, theta: f64, sin2: f64, cos2: f64 },
    /// `sqrt(h) >= alpha_h`: the weight never reaches inside the cone.
    Excluded { alpha: f64 },
}

/// `alpha_h = r sqrt(1 - h/n)`, `theta_h = arccos(sqrt(h) / alpha_h)`.
pub fn alpha_theta(h: usize, geo: &ConeGeometry) -> Result<AlphaTheta> {
    check_interior(h, geo.n)?;
    let n = geo.n as f64;
    let h = h as f64;
    let alpha2 = geo.r * geo.r * (n - h) / n;
    let alpha = alpha2.sqrt();
    if alpha2 <= h {
        return Ok(AlphaTheta::Excluded { alpha });
    }
    if alpha2.is_infinite() {
        return Ok(AlphaTheta::Included { alpha, theta: std::f64::consts::FRAC_PI_2, sin2: 1.0, cos2: 0.0 });
    }
    let cos2 = h / alpha2;
    let sin2 = (alpha2 - h) / alpha2;
    Ok(AlphaTheta::Included { alpha, theta: sin2.sqrt().atan2(cos2.sqrt()), sin2, cos2 })
}

/// Upper end of the admissible correlation interval between the error
/// events of two codewords of weights `di`, `dj`:
/// `min(di,dj) (n - max(di,dj)) / sqrt(di dj (n - di)(n - dj))`.
fn rho_upper(di: usize, dj: usize, n: usize) -> f64 {
    let (lo, hi) = (di.min(dj) as f64, di.max(dj) as f64);
    let (di, dj, n) = (di as f64, dj as f64, n as f64);
    lo * (n - hi) / (di * dj * (n - di) * (n - dj)).sqrt()
}

fn rho_lower(di: usize, dj: usize, n: usize) -> f64 {
    let (di, dj, n) = (di as f64, dj as f64, n as f64);
    let x = (di * dj / ((n - di) * (n - dj))).sqrt();
    -x.min(1.0 / x)
}

/// Admissible interval `(lower, upper)` of the correlation coefficient.
pub fn rho_bounds(di: usize, dj: usize, n: usize) -> Result<(f64, f64)> {
    check_interior(di, n)?;
    check_interior(dj, n)?;
    Ok((rho_lower(di, dj, n), rho_upper(di, dj, n)))
}

/// Smallest admissible correlation between a weight-`h` event and a
/// minimum-distance event, the value the ITSB pairs with each weight.
pub fn rho_min_h(h: usize, d_min: usize, n: usize) -> Result<f64> {
    check_interior(h, n)?;
    check_interior(d_min, n)?;
    Ok(rho_lower(h, d_min, n))
}

/// Largest admissible correlation between events of distinct weights `w`, `h`.
pub fn rho_max_wh(w: usize, h: usize, n: usize) -> Result<f64> {
    check_interior(w, n)?;
    check_interior(h, n)?;
    if w == h {
        return domain("rho_max_wh needs w != h; use rho_ww");
    }
    Ok(rho_upper(w, h, n))
}

/// Largest correlation available between two distinct weight-`w` words:
/// `1 - n / (w (n - w))`.  Can be negative.
pub fn rho_ww(w: usize, n: usize) -> Result<f64> {
    check_interior(w, n)?;
    Ok(1.0 - n as f64 / (w as f64 * (n - w) as f64))
}

/// The line `z3 = (beta_ref - rho z2) / sqrt(1 - rho^2)` bounding the
/// second event of a Hunter pair in the `(z2, z3)` plane.
pub fn l_line(z2: f64, beta_ref: f64, rho: f64) -> Result<f64> {
    if !(rho.abs() < 1.0) {
        return domain(format!("l_line is singular at |rho| = 1 (rho = {rho})"));
    }
    Ok((beta_ref - rho * z2) / (1.0 - rho * rho).sqrt())
}

/// `zeta_{w,h} = sqrt(w (n - h) / (h (n - w))) = Delta_w / Delta_h`.
pub fn zeta_wh(w: usize, h: usize, n: usize) -> Result<f64> {
    check_interior(w, n)?;
    check_interior(h, n)?;
    let (w, h, n) = (w as f64, h as f64, n as f64);
    Ok((w * (n - h) / (h * (n - w))).sqrt())
}
