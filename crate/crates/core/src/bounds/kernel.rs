use std::cell::Cell;
use std::f64::consts::PI;

use super::{BoundConfig, ChannelPoint};
use crate::error::{domain, Error, Result};
use crate::geometry::{beta_h, ConeGeometry};
use crate::numerics::{integrate_points, integrate_vec, q_function, IncGamma, Integral, Tolerance};

/// One conditional probability evaluated at each `z1`.  Slopes are the
/// `Delta` values: at distance `u = sqrt(n) - z1` below the apex a boundary
/// of slope `Delta` sits at `u * Delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Term {
    /// `P(beta <= z2, |(z2, ..., zn)|^2 <= r_z1^2)`.
    Pair { h: usize, slope: f64 },
    /// As `Pair`, intersected with the complement of a second pairwise
    /// event whose boundary has slope `ref_slope` and correlation `rho`.
    Triple { h: usize, slope: f64, ref_slope: f64, rho: f64 },
    /// `P(|(z2, ..., zn)|^2 >= r_z1^2)`.
    Cap,
}

impl Term {
    pub(crate) fn describe(&self) -> String {
        match self {
            Term::Pair { h, .. } => format!("pairwise term of weight {h}"),
            Term::Triple { h, rho, .. } => format!("Hunter term of weight {h} (rho = {rho})"),
            Term::Cap => "cone-exit term".into(),
        }
    }
}

/// Conditional probabilities inside a cone of radius `r` for block length
/// `n` at a given noise level.
pub(crate) struct Kernel {
    sqrt_n: f64,
    sigma: f64,
    sigma2: f64,
    r_scale: f64,
    g_pair: IncGamma,
    g_triple: IncGamma,
    g_cap: IncGamma,
    inner: Tolerance,
    inner_ok: Cell<bool>,
}

impl Kernel {
    pub(crate) fn new(n: usize, r: f64, ch: &ChannelPoint, inner: Tolerance) -> Result<Self> {
        if n < 3 {
            return domain(format!("bounds need n >= 3, got {n}"));
        }
        if !(r > 0.0) {
            return domain(format!("cone radius must be positive, got {r}"));
        }
        let nf = n as f64;
        Ok(Kernel {
            sqrt_n: nf.sqrt(),
            sigma: ch.sigma(),
            sigma2: ch.sigma2(),
            r_scale: r / nf.sqrt(),
            g_pair: IncGamma::new((nf - 2.0) / 2.0)?,
            g_triple: IncGamma::new((nf - 3.0) / 2.0)?,
            g_cap: IncGamma::new((nf - 1.0) / 2.0)?,
            inner,
            inner_ok: Cell::new(true),
        })
    }

    fn note(&self, r: Integral) -> f64 {
        if !r.converged {
            self.inner_ok.set(false);
        }
        r.value
    }

    fn gauss(&self, z: f64) -> f64 {
        (-0.5 * z * z / self.sigma2).exp() / (self.sigma * (2.0 * PI).sqrt())
    }

    /// `P(beta <= z2, z2^2 + V <= ru^2)` with `V` chi-square of `n - 2`
    /// degrees of freedom.
    pub(crate) fn pair(&self, beta: f64, ru: f64) -> f64 {
        if beta >= ru {
            return 0.0;
        }
        if ru.is_infinite() {
            return q_function(beta / self.sigma);
        }
        let s2 = 2.0 * self.sigma2;
        let r = integrate_points(
            |z| self.gauss(z) * self.g_pair.p((ru - z) * (ru + z) / s2),
            beta,
            ru,
            &[],
            &self.inner,
        );
        self.note(r)
    }

    /// `P(beta <= z2, rho z2 + sqrt(1 - rho^2) z3 <= beta_ref,
    /// z2^2 + z3^2 + W <= ru^2)` with `W` chi-square of `n - 3` degrees of
    /// freedom, evaluated in polar coordinates of the `(z2, z3)` plane.
    ///
    /// At radius `s` the admissible angles are `|psi| <= a = acos(beta / s)`
    /// minus the arc of half-width `b = acos(beta_ref / s)` around
    /// `psi0 = acos(rho)`; the radial density is Rayleigh.
    pub(crate) fn triple(&self, beta: f64, beta_ref: f64, rho: f64, ru: f64) -> f64 {
        if beta >= ru {
            return 0.0;
        }
        let rho = rho.clamp(-1.0, 1.0);
        let psi0 = rho.acos();
        let sr = (1.0 - rho * rho).sqrt();
        let frac = |s: f64| {
            let a = (beta / s).min(1.0).acos();
            if s <= beta_ref {
                return a / PI;
            }
            let b = (beta_ref / s).acos();
            let overlap = (a.min(psi0 + b) - (-a).max(psi0 - b)).max(0.0);
            (2.0 * a - overlap) / (2.0 * PI)
        };
        let mut cuts = vec![beta_ref];
        if sr > 0.0 {
            cuts.push(beta.hypot((beta_ref - rho * beta) / sr));
        }
        let s2 = 2.0 * self.sigma2;
        let upper = if ru.is_finite() { ru } else { beta + 40.0 * self.sigma };
        let bounded = ru.is_finite();
        let r = integrate_points(
            |s| {
                let radial = s / self.sigma2 * (-s * s / s2).exp();
                let mass = if bounded { self.g_triple.p((ru - s) * (ru + s) / s2) } else { 1.0 };
                radial * mass * frac(s)
            },
            beta,
            upper,
            &cuts,
            &self.inner,
        );
        self.note(r)
    }

    pub(crate) fn cap(&self, ru: f64) -> f64 {
        if ru.is_infinite() {
            return 0.0;
        }
        self.g_cap.q(ru * ru / (2.0 * self.sigma2))
    }

    pub(crate) fn eval(&self, term: &Term, u: f64) -> f64 {
        let ru = if self.r_scale.is_infinite() { f64::INFINITY } else { u * self.r_scale };
        match *term {
            Term::Pair { slope, .. } => self.pair(u * slope, ru),
            Term::Triple { slope, ref_slope, rho, .. } => self.triple(u * slope, u * ref_slope, rho, ru),
            Term::Cap => self.cap(ru),
        }
    }

    /// `int phi_sigma(z1) term(z1) dz1` over `[-tail * sigma, sqrt(n)]` for
    /// every term on shared nodes.  Fails naming the first term whose outer
    /// or inner quadrature missed its tolerance.
    pub(crate) fn integrate(&self, terms: &[Term], cfg: &BoundConfig) -> Result<Vec<Integral>> {
        self.inner_ok.set(true);
        let top = self.sqrt_n + cfg.tail_sigmas * self.sigma;
        let res = integrate_vec(
            |u, out: &mut [f64]| {
                let w = self.gauss(self.sqrt_n - u);
                if w == 0.0 {
                    out.iter_mut().for_each(|o| *o = 0.0);
                    return;
                }
                for (o, t) in out.iter_mut().zip(terms) {
                    *o = w * self.eval(t, u);
                }
            },
            terms.len(),
            0.0,
            top,
            &[],
            &cfg.outer,
        );
        if let Some((t, r)) = terms.iter().zip(&res).find(|(_, r)| !r.converged) {
            return Err(Error::Quadrature { term: t.describe(), estimate: r.value, error: r.error });
        }
        if !self.inner_ok.get() {
            return Err(Error::Quadrature {
                term: "a conditional probability (inner quadrature)".into(),
                estimate: f64::NAN,
                error: f64::NAN,
            });
        }
        Ok(res)
    }

    /// Probability mass dropped by starting the outer integral at `-tail * sigma`.
    pub(crate) fn truncation(&self, cfg: &BoundConfig) -> f64 {
        q_function(cfg.tail_sigmas)
    }
}

/// `ln` of the conditional pairwise probability of weight `h` at height
/// `z1`: `P(beta_h(z1) <= z2, z2^2 + V <= r_z1^2 | z1)`.
pub fn pairwise_term(geo: &ConeGeometry, ch: &ChannelPoint, z1: f64, h: usize) -> Result<f64> {
    let k = Kernel::new(geo.n(), geo.r(), ch, BoundConfig::default().inner)?;
    let u = (geo.n() as f64).sqrt() - z1;
    if u <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let v = k.pair(beta_h(z1, h, geo)?, geo.radius_at(z1));
    if !k.inner_ok.get() {
        return Err(Error::Quadrature { term: format!("pairwise term of weight {h}"), estimate: v, error: f64::NAN });
    }
    Ok(v.ln())
}

/// `ln` of the conditional Hunter-pair probability at height `z1`:
/// `P(beta_h <= z2, z3 <= l(z2), z2^2 + z3^2 + W <= r_z1^2 | z1)` with
/// `l(z2) = (beta_ref - rho z2) / sqrt(1 - rho^2)` (the half-plane
/// `rho z2 + sqrt(1 - rho^2) z3 <= beta_ref`, which also covers `|rho| = 1`).
pub fn triple_term(geo: &ConeGeometry, ch: &ChannelPoint, z1: f64, h: usize, beta_ref: f64, rho: f64) -> Result<f64> {
    if !(rho.abs() <= 1.0) {
        return domain(format!("correlation must lie in [-1, 1], got {rho}"));
    }
    if !(beta_ref >= 0.0) {
        return domain(format!("reference boundary must be nonnegative, got {beta_ref}"));
    }
    let k = Kernel::new(geo.n(), geo.r(), ch, BoundConfig::default().inner)?;
    let u = (geo.n() as f64).sqrt() - z1;
    if u <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let v = k.triple(beta_h(z1, h, geo)?, beta_ref, rho, geo.radius_at(z1));
    if !k.inner_ok.get() {
        return Err(Error::Quadrature { term: format!("Hunter term of weight {h}"), estimate: v, error: f64::NAN });
    }
    Ok(v.ln())
}
