//! Chernoff forms of the TSB and of `psi`.
//!
//! The noise is normalised to unit variance (`nu = z / sigma`), the cone
//! radius is written `r = sqrt(2 n c eta)` with `eta = tan^2 theta > 0`, and
//! every probability is bounded by `E[exp(...)]` with tilts `p`, `q`, `t`,
//! `s`, `k`.  All bounds are returned as natural logarithms.

use serde::Serialize;

use crate::codes::DistanceSpectrum;
use crate::error::{domain, Error, Result};
use crate::geometry::{rho_max_wh, rho_ww};
use crate::numerics::{brent_min, log_sum_exp, minimize_1d_grid, Tolerance};

// Tolerances are on the argument; the objectives are smooth at their minima,
// so the value error is quadratic in these.
const TILT_TOL: Tolerance = Tolerance { abs_tol: 1e-11, rel_tol: 1e-9, max_iter: 300 };
const ETA_TOL: Tolerance = Tolerance { abs_tol: 1e-8, rel_tol: 1e-8, max_iter: 200 };
const LN_ETA_RANGE: (f64, f64) = (-6.0, 6.0);
const ETA_GRID: usize = 49;
/// Half-width in `ln eta` of the refinement window used by [`chernoff_psi`].
const PSI_ETA_WINDOW: f64 = 1.0;
const PSI_ETA_GRID: usize = 7;
/// Half-width, relative to `1/(2 eta)`, of the tilt window tried first.
const TILT_WINDOW: f64 = 0.05;
/// Keeps the tilt strictly inside its open end.
const EDGE: f64 = 1e-12;

/// One set of tilts of a Chernoff bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChernoffParams {
    pub t: f64,
    pub s: f64,
    pub k: f64,
    pub eta: f64,
}

/// `E1(c, p, eta) = 2 p eta c / (1 + 2 p eta) + ln(1 - 2p) / 2`, the
/// exponent of the cone-exit term; `0 <= p < 1/2`.
pub fn e1(c: f64, p: f64, eta: f64) -> Result<f64> {
    if !(c > 0.0 && eta > 0.0 && (0.0..0.5).contains(&p)) {
        return domain(format!("e1 needs c > 0, eta > 0, 0 <= p < 1/2 (c = {c}, p = {p}, eta = {eta})"));
    }
    Ok(e1_raw(c, p, eta))
}

fn e1_raw(c: f64, p: f64, eta: f64) -> f64 {
    2.0 * p * eta * c / (1.0 + 2.0 * p * eta) + 0.5 * (-2.0 * p).ln_1p()
}

/// `E2(c, q, delta, eta) = c (2 q eta + (1 - 2q) D) / (1 + 2 q eta + (1 - 2q) D)
/// + ln(1 - 2q) / 2` with `D = delta / (1 - delta)`, the exponent of the
/// pairwise term of relative weight `delta` inside the cone;
/// `-1/(2 eta) <= q <= 0`, `0 < delta <= 1` (at `delta = 1` the fraction is 1).
pub fn e2(c: f64, q: f64, delta: f64, eta: f64) -> Result<f64> {
    if !(c > 0.0 && eta > 0.0 && q <= 0.0 && q >= -0.5 / eta && delta > 0.0 && delta <= 1.0) {
        return domain(format!(
            "e2 needs c > 0, eta > 0, -1/(2 eta) <= q <= 0, 0 < delta <= 1 (c = {c}, q = {q}, delta = {delta}, eta = {eta})"
        ));
    }
    Ok(e2_raw(c, q, delta, eta))
}

fn e2_raw(c: f64, q: f64, delta: f64, eta: f64) -> f64 {
    let tail = 0.5 * (-2.0 * q).ln_1p();
    if delta >= 1.0 {
        return c + tail;
    }
    let y = (1.0 - 2.0 * q) * delta / (1.0 - delta);
    c * (2.0 * q * eta + y) / (1.0 + 2.0 * q * eta + y) + tail
}

fn prefactor(t: f64, eta: f64) -> f64 {
    0.5 * ((-2.0 * t).ln_1p() - (2.0 * t * eta).ln_1p())
}

/// Chernoff bound on the cone-exit probability `P(sum_{i>=2} nu_i^2 >= r_nu1^2)`,
/// minimised over `p`.
pub fn cap_log_bound(n: usize, c: f64, eta: f64) -> f64 {
    let nf = n as f64;
    brent_min(|p| prefactor(p, eta) - nf * e1_raw(c, p, eta), 0.0, 0.5 * (1.0 - EDGE), &TILT_TOL).1
}

/// Chernoff bound on the weight-`h` pairwise term inside the cone, minimised
/// over `q`.  Weight `n` lies on the cone axis; its term is the apex bound
/// `Q(sqrt(2nc)) <= exp(-nc)`.
pub fn pair_log_bound(n: usize, h: usize, c: f64, eta: f64) -> f64 {
    pair_with_tilt(n, h, c, eta).1
}

/// `(q*, bound)`; `q* = 0` for weight `n`.
fn pair_with_tilt(n: usize, h: usize, c: f64, eta: f64) -> (f64, f64) {
    if h >= n {
        return (0.0, -(n as f64) * c);
    }
    let (nf, delta) = (n as f64, h as f64 / n as f64);
    let lo = -0.5 / eta * (1.0 - EDGE);
    brent_min(|q| prefactor(q, eta) - nf * e2_raw(c, q, delta, eta), lo, 0.0, &TILT_TOL)
}

/// Which side of the reference layer `w` the weight `h` lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TripleCase {
    Equal,
    Above,
    Below,
}

/// Exponent `g(t, k, s)` of the Chernoff bound on the Hunter-pair term
/// `A_h P(sum nu^2 <= r^2, nu2 >= beta_h, nu3 >= -l_{w,h})`:
///
/// ```text
/// g = [4 t eta n c + 2 sqrt(2nc) Delta_h xi - Delta_h^2 xi^2] / (2 (1 + 2 t eta))
///     - tau^2 / (2 (1 - 2t)) - k^2 / (2 (1 - 2t)) + (n/2) ln(1 - 2t) - ln A_h
/// xi  = s - k zeta / sqrt(1 - rho^2),   tau = s - k rho / sqrt(1 - rho^2)
/// ```
///
/// with `zeta = Delta_w / Delta_h` and `rho = rho_ww` (`h = w`) or
/// `rho_max(w, h)` otherwise.  The bound is
/// `sqrt((1 - 2t) / (1 + 2 t eta)) exp(-g)` for `-1/(2 eta) < t <= 0`,
/// `k, s >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleChernoff {
    c: f64,
    eta: f64,
    n: usize,
    w: usize,
    h: usize,
    delta_h: f64,
    zeta: f64,
    rho: f64,
    ln_a: f64,
    a: f64,
    slopes: Option<(f64, f64)>,
}

impl TripleChernoff {
    /// `0 < w, h < n`; `ln_a = ln A_h`.
    pub fn new(c: f64, eta: f64, w: usize, h: usize, n: usize, ln_a: f64) -> Result<Self> {
        if !(c > 0.0 && eta > 0.0) {
            return domain(format!("need c > 0 and eta > 0 (c = {c}, eta = {eta})"));
        }
        if w == 0 || h == 0 || w >= n || h >= n {
            return domain(format!("weights must satisfy 0 < w, h < n = {n} (w = {w}, h = {h})"));
        }
        if ln_a.is_nan() || ln_a == f64::INFINITY {
            return domain(format!("ln A_h must be finite or -inf, got {ln_a}"));
        }
        let (wf, hf, nf) = (w as f64, h as f64, n as f64);
        let rho = if w == h { rho_ww(w, n)? } else { rho_max_wh(w, h, n)? };
        let zeta = (wf * (nf - hf) / (hf * (nf - wf))).sqrt();
        let sr2 = 1.0 - rho * rho;
        let slopes = if sr2 <= 1e-15 { None } else { Some((zeta / sr2.sqrt(), rho / sr2.sqrt())) };
        Ok(TripleChernoff {
            c,
            eta,
            n,
            w,
            h,
            delta_h: (hf / (nf - hf)).sqrt(),
            zeta,
            rho,
            ln_a,
            a: (2.0 * nf * c).sqrt(),
            slopes,
        })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn case(&self) -> TripleCase {
        match self.h.cmp(&self.w) {
            std::cmp::Ordering::Equal => TripleCase::Equal,
            std::cmp::Ordering::Greater => TripleCase::Above,
            std::cmp::Ordering::Less => TripleCase::Below,
        }
    }

    /// Admissible tilt interval `(-1/(2 eta), 0]`, shrunk by a relative `1e-12`.
    pub fn t_range(&self) -> (f64, f64) {
        (-0.5 / self.eta * (1.0 - EDGE), 0.0)
    }

    fn a(&self) -> f64 {
        self.a
    }

    /// `(zeta, rho) / sqrt(1 - rho^2)`; `None` when `|rho| = 1`.
    fn k_slopes(&self) -> Option<(f64, f64)> {
        self.slopes
    }

    fn check(&self, t: f64, k: f64, s: f64) -> Result<()> {
        if !(t <= 0.0 && t > -0.5 / self.eta && k >= 0.0 && s >= 0.0) {
            return domain(format!("g needs -1/(2 eta) < t <= 0, k >= 0, s >= 0 (t = {t}, k = {k}, s = {s})"));
        }
        if k > 0.0 && self.k_slopes().is_none() {
            return domain("k must be 0 when |rho| = 1");
        }
        Ok(())
    }

    fn base(&self, t: f64) -> (f64, f64, f64) {
        let p = 1.0 / (1.0 + 2.0 * t * self.eta);
        let m = 1.0 / (1.0 - 2.0 * t);
        let nf = self.n as f64;
        let c0 = 2.0 * t * self.eta * nf * self.c * p + 0.5 * nf * (-2.0 * t).ln_1p() - self.ln_a;
        (p, m, c0)
    }

    fn g_raw(&self, t: f64, k: f64, s: f64) -> f64 {
        let (p, m, c0) = self.base(t);
        let (ka, kb) = if k > 0.0 { self.k_slopes().unwrap_or((0.0, 0.0)) } else { (0.0, 0.0) };
        let xi = s - k * ka;
        let tau = s - k * kb;
        let d = self.delta_h;
        c0 + self.a() * d * p * xi - 0.5 * d * d * p * xi * xi - 0.5 * m * (tau * tau + k * k)
    }

    pub fn g(&self, t: f64, k: f64, s: f64) -> Result<f64> {
        self.check(t, k, s)?;
        Ok(self.g_raw(t, k, s))
    }

    /// Maximiser of `g` over `s` with `k = 0`: `(s*, g*)`.
    pub fn maximize_s(&self, t: f64) -> (f64, f64) {
        let (p, m, _) = self.base(t);
        let d = self.delta_h;
        let s = self.a() * d * p / (d * d * p + m);
        (s, self.g_raw(t, 0.0, s))
    }

    /// Maximiser of the concave quadratic `g` over `k, s >= 0` by enumerating
    /// the KKT candidates (interior, `k = 0`, `s = 0`, origin): `(s*, k*, g*)`.
    pub fn maximize_sk(&self, t: f64) -> (f64, f64, f64) {
        let (s0, g0) = self.maximize_s(t);
        let mut best = (s0, 0.0, g0);
        let Some((ka, kb)) = self.k_slopes() else {
            return best;
        };
        let (p, m, _) = self.base(t);
        let d = self.delta_h;
        let lin = self.a() * d * p;
        let (ls, lk) = (lin, -ka * lin);
        let hss = -(d * d * p + m);
        let hsk = ka * d * d * p + kb * m;
        let hkk = -(ka * ka * d * d * p + kb * kb * m + m);
        let mut consider = |s: f64, k: f64| {
            let v = self.g_raw(t, k, s);
            if v > best.2 {
                best = (s, k, v);
            }
        };
        consider(0.0, 0.0);
        consider(0.0, (lk / -hkk).max(0.0));
        let det = hss * hkk - hsk * hsk;
        if det > 0.0 {
            let s = -(hkk * ls - hsk * lk) / det;
            let k = -(-hsk * ls + hss * lk) / det;
            if s >= 0.0 && k >= 0.0 {
                consider(s, k);
            }
        }
        best
    }

    /// `ln[sqrt((1 - 2t) / (1 + 2 t eta)) exp(-max_{k,s} g)]` at tilt `t`.
    pub fn log_bound(&self, t: f64) -> f64 {
        prefactor(t, self.eta) - self.maximize_sk(t).2
    }

    /// As [`log_bound`](Self::log_bound) with `k` forced to 0.
    pub fn log_bound_k0(&self, t: f64) -> f64 {
        prefactor(t, self.eta) - self.maximize_s(t).1
    }

    /// Bound minimised over `t`, with the optimal tilts.
    pub fn optimize(&self) -> (ChernoffParams, f64) {
        let (lo, hi) = self.t_range();
        self.finish(brent_min(|t| self.log_bound(t), lo, hi, &TILT_TOL))
    }

    /// As [`optimize`](Self::optimize), searching a window around `hint`
    /// first.  The bound is convex in `t`, so a minimiser strictly inside the
    /// window is global; otherwise the whole interval is searched.
    pub fn optimize_near(&self, hint: f64) -> (ChernoffParams, f64) {
        let (lo, hi) = self.t_range();
        let half = TILT_WINDOW * 0.5 / self.eta;
        let (a, b) = ((hint - half).max(lo), (hint + half).min(hi));
        let (t, v) = brent_min(|t| self.log_bound(t), a, b, &TILT_TOL);
        let margin = 1e-3 * half;
        if (t - a > margin || a == lo) && (b - t > margin || b == hi) {
            return self.finish((t, v));
        }
        self.optimize()
    }

    fn finish(&self, (t, v): (f64, f64)) -> (ChernoffParams, f64) {
        let (s, k, _) = self.maximize_sk(t);
        (ChernoffParams { t, s, k, eta: self.eta }, v)
    }

    /// `alpha` linking `k = -(xi - tau) alpha` in the `h = w` and `h < w`
    /// cases: `sqrt((1 + rho) / (1 - rho))` and `sqrt(1 - rho^2) / (zeta - rho)`.
    /// `None` for `h > w`, where `rho = zeta` and `k` decouples.
    pub fn alpha(&self) -> Option<f64> {
        match self.case() {
            TripleCase::Equal => Some(((1.0 + self.rho) / (1.0 - self.rho)).sqrt()),
            TripleCase::Below => Some((1.0 - self.rho * self.rho).sqrt() / (self.zeta - self.rho)),
            TripleCase::Above => None,
        }
    }

    fn alpha_or_nan(&self) -> f64 {
        self.alpha().unwrap_or(f64::NAN)
    }

    /// `g` in the variables `(xi, tau)` (with `k` eliminated through `alpha`),
    /// without the spectrum term `-ln A_h`.
    pub fn g1(&self, t: f64, xi: f64, tau: f64) -> f64 {
        let (p, m, c0) = self.base(t);
        let al = self.alpha_or_nan();
        let d = self.delta_h;
        c0 + self.ln_a + self.a() * d * p * xi - 0.5 * d * d * p * xi * xi - 0.5 * m * tau * tau
            - 0.5 * m * (xi - tau).powi(2) * al * al
    }

    /// `g1` at `tau = tau*(xi)`.
    pub fn g2(&self, t: f64, xi: f64) -> f64 {
        let (p, m, c0) = self.base(t);
        let d = self.delta_h;
        c0 + self.ln_a + self.a() * d * p * xi - 0.5 * d * d * p * xi * xi - 0.5 * m * self.epsilon() * xi * xi
    }

    /// `epsilon = alpha^2 / (1 + alpha^2)`.
    pub fn epsilon(&self) -> f64 {
        let al2 = self.alpha_or_nan().powi(2);
        if al2.is_infinite() {
            1.0
        } else {
            al2 / (1.0 + al2)
        }
    }

    /// Stationary point of `g1` in `tau`: `alpha^2 xi / (1 + alpha^2)`.
    pub fn tau_star(&self, xi: f64) -> f64 {
        self.epsilon() * xi
    }

    /// Stationary point of `g2` in `xi`:
    /// `sqrt(2nc) Delta (1 - 2t) / (Delta^2 (1 - 2t) + epsilon (1 + 2 t eta))`.
    pub fn xi_star(&self, t: f64) -> f64 {
        let d = self.delta_h;
        self.a() * d * (1.0 - 2.0 * t) / (d * d * (1.0 - 2.0 * t) + self.epsilon() * (1.0 + 2.0 * t * self.eta))
    }
}

/// Outcome of [`verify_kstar_zero`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KStarReport {
    pub case: TripleCase,
    /// Numeric maximiser over `k, s >= 0`.
    pub k: f64,
    pub s: f64,
    pub max_g: f64,
    /// `g` at the closed-form maximiser `k = 0`, `s = xi*` (with `epsilon = 1`).
    pub closed_form_g: f64,
    /// `k = -(xi* - tau*) alpha` at the unconstrained closed-form stationary
    /// point; nonpositive whenever `k* = 0` is forced.  `NaN` for `h > w`.
    pub unconstrained_k: f64,
    /// Evaluations of `g` used by the numeric search.
    pub evaluations: usize,
}

/// Maximises `g(t, k, s)` over `k, s >= 0` at fixed `t` from values of `g`
/// alone, without the closed-form solution: projected Newton steps started
/// at `(s, k) = (1, 1)`, with gradient and Hessian taken by central
/// differences (exact up to rounding, `g` being quadratic in `(s, k)`) and a
/// backtracking search along the projected path.
pub fn verify_kstar_zero(tc: &TripleChernoff, t: f64) -> Result<KStarReport> {
    tc.check(t, 0.0, 0.0)?;
    let (_, g_closed) = tc.maximize_s(t);
    let free_k = tc.k_slopes().is_some();
    let evaluations = std::cell::Cell::new(0usize);
    let g = |x: [f64; 2]| {
        evaluations.set(evaluations.get() + 1);
        tc.g_raw(t, x[1], x[0])
    };
    let dims = if free_k { 2 } else { 1 };
    let mut x = [1.0, if free_k { 1.0 } else { 0.0 }];
    let mut gx = g(x);
    for _ in 0..100 {
        let (grad, hess) = finite_differences(&g, x, dims);
        // a coordinate stays at its bound while the gradient pushes outward
        let free: Vec<usize> = (0..dims).filter(|&i| x[i] > 0.0 || grad[i] > 0.0).collect();
        let mut step = [0.0; 2];
        match free.as_slice() {
            [i] => step[*i] = -grad[*i] / hess[*i][*i],
            [i, j] => {
                let det = hess[*i][*i] * hess[*j][*j] - hess[*i][*j] * hess[*j][*i];
                step[*i] = -(hess[*j][*j] * grad[*i] - hess[*i][*j] * grad[*j]) / det;
                step[*j] = -(hess[*i][*i] * grad[*j] - hess[*j][*i] * grad[*i]) / det;
            }
            _ => break,
        }
        let mut alpha = 1.0;
        let mut moved = false;
        while alpha > 1e-12 {
            let y = [(x[0] + alpha * step[0]).max(0.0), (x[1] + alpha * step[1]).max(0.0)];
            let gy = g(y);
            if gy >= gx {
                moved = y != x;
                x = y;
                gx = gy;
                break;
            }
            alpha *= 0.5;
        }
        if !moved {
            break;
        }
    }
    let unconstrained_k = match tc.alpha() {
        Some(al) => {
            let xi = tc.xi_star(t);
            -(xi - tc.tau_star(xi)) * al
        }
        None => f64::NAN,
    };
    Ok(KStarReport {
        case: tc.case(),
        k: x[1],
        s: x[0],
        max_g: gx,
        closed_form_g: g_closed,
        unconstrained_k,
        evaluations: evaluations.get(),
    })
}

fn finite_differences<F: Fn([f64; 2]) -> f64>(g: &F, x: [f64; 2], dims: usize) -> ([f64; 2], [[f64; 2]; 2]) {
    let h = [1e-2 * (1.0 + x[0].abs()), 1e-2 * (1.0 + x[1].abs())];
    let at = |di: f64, dj: f64| g([x[0] + di, x[1] + dj]);
    let mut grad = [0.0; 2];
    let mut hess = [[0.0; 2]; 2];
    let g0 = at(0.0, 0.0);
    for i in 0..dims {
        let e = |s: f64| if i == 0 { at(s * h[0], 0.0) } else { at(0.0, s * h[1]) };
        let (p, m) = (e(1.0), e(-1.0));
        grad[i] = (p - m) / (2.0 * h[i]);
        hess[i][i] = (p - 2.0 * g0 + m) / (h[i] * h[i]);
    }
    if dims == 2 {
        let mixed = (at(h[0], h[1]) - at(h[0], -h[1]) - at(-h[0], h[1]) + at(-h[0], -h[1])) / (4.0 * h[0] * h[1]);
        hess[0][1] = mixed;
        hess[1][0] = mixed;
    }
    (grad, hess)
}

/// A Chernoff bound minimised over `eta` (and over the layer `w` for `psi`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChernoffBound {
    pub log_value: f64,
    pub eta: f64,
    pub layer: Option<usize>,
}

fn check_spec(spec: &DistanceSpectrum, c: f64) -> Result<()> {
    if !(c > 0.0 && c.is_finite()) {
        return domain(format!("c must be positive and finite, got {c}"));
    }
    if spec.n() < 3 {
        return domain(format!("Chernoff bounds need n >= 3, got {}", spec.n()));
    }
    Ok(())
}

fn support(spec: &DistanceSpectrum) -> Vec<usize> {
    (1..=spec.n()).filter(|&h| spec.ln_count(h) > f64::NEG_INFINITY).collect()
}

/// Chernoff TSB at a fixed `eta`:
/// `ln[cap(eta) + sum_h A_h pair_h(eta)]`, each term minimised over its own tilt.
pub fn chernoff_tsb_at(spec: &DistanceSpectrum, c: f64, eta: f64) -> Result<f64> {
    check_spec(spec, c)?;
    if !(eta > 0.0) {
        return domain(format!("eta must be positive, got {eta}"));
    }
    Ok(tsb_objective(spec, &support(spec), c, eta))
}

fn tsb_objective(spec: &DistanceSpectrum, sup: &[usize], c: f64, eta: f64) -> f64 {
    let n = spec.n();
    let mut logs = Vec::with_capacity(sup.len() + 1);
    logs.push(cap_log_bound(n, c, eta));
    logs.extend(sup.iter().map(|&h| spec.ln_count(h) + pair_log_bound(n, h, c, eta)));
    log_sum_exp(&logs)
}

/// Chernoff TSB minimised over `ln eta in [-6, 6]` (49-point grid, then Brent).
pub fn chernoff_tsb(spec: &DistanceSpectrum, c: f64) -> Result<ChernoffBound> {
    check_spec(spec, c)?;
    let sup = support(spec);
    let (le, v) = minimize_1d_grid(|le| tsb_objective(spec, &sup, c, le.exp()), LN_ETA_RANGE.0, LN_ETA_RANGE.1, ETA_GRID, &ETA_TOL);
    finite(ChernoffBound { log_value: v, eta: le.exp(), layer: None })
}

fn finite(b: ChernoffBound) -> Result<ChernoffBound> {
    if b.log_value.is_nan() {
        return Err(Error::NonConvergence { estimate: b.log_value, error: f64::NAN });
    }
    Ok(b)
}

/// Chernoff `psi` at a fixed `eta`, minimised over the layer `w in 1..n-1`:
/// `ln[cap + pair_w + sum_h U(w, h)]` where `U(w, h)` is the bound on the
/// Hunter-pair term of weight `h` against layer `w`, optimised over
/// `(t, k, s)`.  Weight `n` contributes its apex bound.  Returns
/// `(log value, w*)`; ties go to the smallest `w`.
pub fn chernoff_psi_at(spec: &DistanceSpectrum, c: f64, eta: f64) -> Result<(f64, usize)> {
    check_spec(spec, c)?;
    if !(eta > 0.0) {
        return domain(format!("eta must be positive, got {eta}"));
    }
    psi_objective(spec, &support(spec), c, eta)
}

fn psi_objective(spec: &DistanceSpectrum, sup: &[usize], c: f64, eta: f64) -> Result<(f64, usize)> {
    let n = spec.n();
    let cap = cap_log_bound(n, c, eta);
    let pairs: Vec<(f64, f64)> = (0..=n).map(|h| if h == 0 { (0.0, 0.0) } else { pair_with_tilt(n, h, c, eta) }).collect();
    let mut best = (f64::INFINITY, 1);
    let mut logs = Vec::with_capacity(sup.len() + 2);
    for w in 1..n {
        logs.clear();
        logs.push(cap);
        logs.push(pairs[w].1);
        for &h in sup {
            let ln_a = spec.ln_count(h);
            if h == n {
                logs.push(ln_a + pairs[n].1);
                continue;
            }
            // the pairwise optimum is a good starting window for the tilt
            logs.push(TripleChernoff::new(c, eta, w, h, n, ln_a)?.optimize_near(pairs[h].0).1);
        }
        let v = log_sum_exp(&logs);
        if v < best.0 {
            best = (v, w);
        }
    }
    Ok(best)
}

/// Chernoff `psi` minimised over `eta` and `w`.  `ln eta` is searched on a
/// 7-point grid over `+-1` around the optimum of [`chernoff_tsb`] (clipped
/// to `[-6, 6]`) and refined by Brent; any `eta` gives a valid bound.
pub fn chernoff_psi(spec: &DistanceSpectrum, c: f64) -> Result<ChernoffBound> {
    let tsb = chernoff_tsb(spec, c)?;
    let sup = support(spec);
    let centre = tsb.eta.ln();
    let lo = (centre - PSI_ETA_WINDOW).max(LN_ETA_RANGE.0);
    let hi = (centre + PSI_ETA_WINDOW).min(LN_ETA_RANGE.1);
    let mut failure = None;
    let (le, v) = minimize_1d_grid(
        |le| match psi_objective(spec, &sup, c, le.exp()) {
            Ok((v, _)) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        hi,
        PSI_ETA_GRID,
        &ETA_TOL,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let (_, w) = psi_objective(spec, &sup, c, le.exp())?;
    finite(ChernoffBound { log_value: v, eta: le.exp(), layer: Some(w) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::random_ensemble_spectrum;

    #[test]
    fn e1_e2_trivial_points() {
        assert_eq!(e1(1.0, 0.0, 0.5).unwrap(), 0.0);
        let d: f64 = 0.3;
        let want = 1.5 * (d / (1.0 - d)) / (1.0 + d / (1.0 - d));
        assert!((e2(1.5, 0.0, d, 2.0).unwrap() - want).abs() < 1e-15);
        assert!((e2(1.5, 0.0, d, 2.0).unwrap() - 1.5 * d).abs() < 1e-15);
        assert!(e1(1.0, 0.5, 1.0).is_err());
        assert!(e2(1.0, 0.1, 0.3, 1.0).is_err());
        assert!(e2(1.0, -0.6, 0.3, 1.0).is_err());
        assert!(e2(1.0, -0.5, 0.3, 1.0).is_ok());
    }

    #[test]
    fn e1_slope_at_zero() {
        let (c, eta) = (0.7, 1.3);
        let h = 1e-6;
        let fd = (e1(c, h, eta).unwrap() - e1(c, 0.0, eta).unwrap()) / h;
        assert!((fd - (2.0 * eta * c - 1.0)).abs() < 1e-5);
    }

    #[test]
    fn k_zero_triple_equals_pairwise() {
        let (n, c, eta) = (40, 0.8, 0.9);
        let pair = pair_log_bound(n, 11, c, eta);
        for w in [5, 11, 20] {
            let tc = TripleChernoff::new(c, eta, w, 11, n, 0.0).unwrap();
            let (lo, hi) = tc.t_range();
            let (_, v) = brent_min(|t| tc.log_bound_k0(t), lo, hi, &TILT_TOL);
            assert!((v - pair).abs() < 1e-9 * pair.abs(), "w = {w}: {v} vs {pair}");
            let (p, full) = tc.optimize();
            assert!(p.k == 0.0);
            assert!((full - pair).abs() < 1e-9 * pair.abs());
        }
    }

    #[test]
    fn g_degenerates_at_origin() {
        let tc = TripleChernoff::new(1.0, 1.0, 4, 6, 12, 3.0_f64.ln()).unwrap();
        assert!((tc.g(0.0, 0.0, 0.0).unwrap() + 3.0_f64.ln()).abs() < 1e-15);
        assert!(tc.g(0.1, 0.0, 0.0).is_err());
        assert!(tc.g(-0.1, -1.0, 0.0).is_err());
    }

    #[test]
    fn psi_never_below_tsb() {
        let spec = random_ensemble_spectrum(24, 0.5).unwrap();
        for eta in [0.3, 1.0, 3.0] {
            let t = chernoff_tsb_at(&spec, 1.0, eta).unwrap();
            let (p, w) = chernoff_psi_at(&spec, 1.0, eta).unwrap();
            // both sides are tilt minima found to TILT_TOL
            assert!(p >= t - 1e-9 * t.abs(), "eta {eta}: {p} < {t}");
            assert!((1..24).contains(&w));
        }
    }
}
