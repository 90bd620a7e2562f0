//! Bounds built on Hunter's inequality inside the cone: the improved TSB
//! (every error event paired with a minimum-distance event), the
//! added-hyper-plane bound (the code extended by every word of one weight
//! layer `w`), and `psi`, the AHP without the extension.

use std::collections::{BTreeMap, HashMap};

use super::kernel::{Kernel, Term};
use super::{cone_radius_or_unbounded, BoundConfig, BoundResult, ChannelPoint, TailTerms};
use crate::codes::{ln_binomial, DistanceSpectrum};
use crate::error::{domain, Result};
use crate::geometry::{delta_slope, rho_max_wh, rho_min_h, rho_ww, ConeGeometry};
use crate::numerics::{ln_1m_exp, ln_add, ln_q_function, log_sum_exp, q_function, Integral};

#[derive(Default)]
struct TermSet {
    terms: Vec<Term>,
    index: HashMap<(u8, usize, u64, u64), usize>,
}

impl TermSet {
    fn add(&mut self, t: Term) -> usize {
        let key = match t {
            Term::Pair { h, .. } => (0, h, 0, 0),
            Term::Triple { h, ref_slope, rho, .. } => (1, h, ref_slope.to_bits(), rho.to_bits()),
            Term::Cap => (2, 0, 0, 0),
        };
        let terms = &mut self.terms;
        *self.index.entry(key).or_insert_with(|| {
            terms.push(t);
            terms.len() - 1
        })
    }

    /// Weight-`h` event paired with the complement of an event whose
    /// boundary has slope `ref_slope`.  `None` when weight `h` never enters
    /// the cone; a plain pairwise term when the reference boundary never does.
    fn hunter(&mut self, geo: &ConeGeometry, h: usize, ref_slope: f64, rho: f64) -> Result<Option<usize>> {
        if !geo.includes(h) {
            return Ok(None);
        }
        let slope = delta_slope(h, geo.n())?;
        let edge = geo.r() / (geo.n() as f64).sqrt();
        if ref_slope >= edge {
            return Ok(Some(self.add(Term::Pair { h, slope })));
        }
        Ok(Some(self.add(Term::Triple { h, slope, ref_slope, rho })))
    }

    fn pair(&mut self, geo: &ConeGeometry, h: usize) -> Result<Option<usize>> {
        if !geo.includes(h) {
            return Ok(None);
        }
        Ok(Some(self.add(Term::Pair { h, slope: delta_slope(h, geo.n())? })))
    }
}

/// `ln(coef) + ln(integral)` entries of one bound, keyed by weight.
#[derive(Default)]
struct Assembly {
    parts: Vec<(Option<usize>, f64, usize)>,
}

impl Assembly {
    fn push(&mut self, h: Option<usize>, ln_coef: f64, idx: Option<usize>) {
        if let Some(i) = idx {
            if ln_coef > f64::NEG_INFINITY {
                self.parts.push((h, ln_coef, i));
            }
        }
    }

    fn finish(&self, res: &[Integral], tails: &TailTerms, with_q: bool, truncation: f64) -> (f64, BTreeMap<usize, f64>, f64) {
        let mut per_weight: BTreeMap<usize, f64> = BTreeMap::new();
        let mut logs = Vec::with_capacity(self.parts.len() + 2);
        let mut err = 0.0;
        let mut coef_sum = 1.0;
        for &(h, ln_coef, i) in &self.parts {
            let v = ln_coef + res[i].value.ln();
            logs.push(v);
            err += ln_coef.exp() * res[i].error;
            coef_sum += ln_coef.exp();
            if let Some(h) = h {
                let e = per_weight.entry(h).or_insert(f64::NEG_INFINITY);
                *e = ln_add(*e, v);
            }
        }
        logs.push(tails.ln_cap);
        if with_q {
            logs.push(tails.ln_q);
        }
        (log_sum_exp(&logs), per_weight, err + truncation * coef_sum)
    }
}

struct Prepared {
    r: f64,
    geo: ConeGeometry,
    kernel: Kernel,
    set: TermSet,
    cap: usize,
}

fn prepare(spec: &DistanceSpectrum, ch: &ChannelPoint, cfg: &BoundConfig) -> Result<Prepared> {
    let n = spec.n();
    let r = cone_radius_or_unbounded(spec)?;
    let geo = ConeGeometry::new(n, r)?;
    let kernel = Kernel::new(n, r, ch, cfg.inner)?;
    let mut set = TermSet::default();
    let cap = set.add(Term::Cap);
    Ok(Prepared { r, geo, kernel, set, cap })
}

fn tails(res: &[Integral], cap: usize, n: usize, ch: &ChannelPoint, with_q: bool) -> TailTerms {
    let x = (2.0 * n as f64 * ch.c()).sqrt();
    let (q, ln_q) = if with_q { (q_function(x), ln_q_function(x)) } else { (0.0, f64::NEG_INFINITY) };
    TailTerms { cap: res[cap].value, ln_cap: res[cap].value.ln(), q, ln_q }
}

/// Improved tangential-sphere bound.
pub fn itsb(spec: &DistanceSpectrum, ch: &ChannelPoint) -> Result<BoundResult> {
    itsb_with(spec, ch, &BoundConfig::default())
}

pub fn itsb_with(spec: &DistanceSpectrum, ch: &ChannelPoint, cfg: &BoundConfig) -> Result<BoundResult> {
    let (n, d) = (spec.n(), spec.d_min());
    itsb_with_rho(spec, ch, cfg, &|h| rho_min_h(h, d, n).unwrap_or(-1.0))
}

/// Improved TSB with a caller-chosen correlation for each weight's Hunter
/// pair.  The default uses the smallest admissible correlation with a
/// minimum-distance event; any value no larger than the true correlation
/// keeps the bound valid.
///
/// Structure: `P2(d_min) + (A_dmin - 1) P3(d_min) + sum_{h > d_min} A_h P3(h)`
/// integrated over `z1`, plus the cone-exit and apex terms.  Weights below
/// the effective minimum distance (possible only for ensemble spectra) are
/// not included.
pub fn itsb_with_rho(spec: &DistanceSpectrum, ch: &ChannelPoint, cfg: &BoundConfig, rho: &dyn Fn(usize) -> f64) -> Result<BoundResult> {
    let n = spec.n();
    let d = spec.d_min();
    let mut p = prepare(spec, ch, cfg)?;
    let mut asm = Assembly::default();
    if d < n {
        let ref_slope = delta_slope(d, n)?;
        let pair = p.set.pair(&p.geo, d)?;
        asm.push(Some(d), 0.0, pair);
        let ln_ad = spec.ln_count(d);
        let ln_rest = if ln_ad > 0.0 { ln_ad + ln_1m_exp(-ln_ad) } else { f64::NEG_INFINITY };
        let t = p.set.hunter(&p.geo, d, ref_slope, rho(d))?;
        asm.push(Some(d), ln_rest, t);
        for h in spec.interior_support().filter(|&h| h > d) {
            let t = p.set.hunter(&p.geo, h, ref_slope, rho(h))?;
            asm.push(Some(h), spec.ln_count(h), t);
        }
    }
    let res = p.kernel.integrate(&p.set.terms, cfg)?;
    let tails = tails(&res, p.cap, n, ch, true);
    let (lv, per_weight, err) = asm.finish(&res, &tails, true, p.kernel.truncation(cfg));
    Ok(BoundResult::new(lv, per_weight, p.r, None, tails, err))
}

/// Terms of one layer `w`: `P2(w)`, the extension term `C(n, w) P3(w; rho_ww)`
/// and `A_h P3(h; rho_{w,h})` for every other weight.
fn layer_assembly(spec: &DistanceSpectrum, p: &mut Prepared, w: usize, with_extension: bool) -> Result<Assembly> {
    let n = spec.n();
    if w == 0 || w > n {
        return domain(format!("layer must satisfy 1 <= w <= n = {n}, got {w}"));
    }
    let mut asm = Assembly::default();
    let ref_slope = if w == n { f64::INFINITY } else { delta_slope(w, n)? };
    if w < n {
        let pair = p.set.pair(&p.geo, w)?;
        asm.push(Some(w), 0.0, pair);
        if with_extension {
            let t = p.set.hunter(&p.geo, w, ref_slope, rho_ww(w, n)?)?;
            asm.push(Some(w), ln_binomial(n, w), t);
        }
    }
    for h in spec.interior_support().filter(|&h| h != w) {
        let rho = if w == n { 1.0 } else { rho_max_wh(w, h, n)? };
        let t = p.set.hunter(&p.geo, h, ref_slope, rho)?;
        asm.push(Some(h), spec.ln_count(h), t);
    }
    Ok(asm)
}

fn layered(spec: &DistanceSpectrum, ch: &ChannelPoint, cfg: &BoundConfig, layers: &[usize], extension: bool) -> Result<BoundResult> {
    let n = spec.n();
    let mut p = prepare(spec, ch, cfg)?;
    let plans = layers.iter().map(|&w| layer_assembly(spec, &mut p, w, extension)).collect::<Result<Vec<_>>>()?;
    let res = p.kernel.integrate(&p.set.terms, cfg)?;
    let tails = tails(&res, p.cap, n, ch, extension);
    let trunc = p.kernel.truncation(cfg);
    let mut best: Option<(usize, (f64, BTreeMap<usize, f64>, f64))> = None;
    for (&w, plan) in layers.iter().zip(&plans) {
        let v = plan.finish(&res, &tails, extension, trunc);
        if best.as_ref().is_none_or(|(_, b)| v.0 < b.0) {
            best = Some((w, v));
        }
    }
    let (w, (lv, per_weight, err)) = best.expect("at least one layer");
    Ok(BoundResult::new(lv, per_weight, p.r, Some(w), tails, err))
}

fn all_layers(n: usize) -> Vec<usize> {
    (1..n).collect()
}

/// Added-hyper-plane bound: minimum over the extension layer `w` in
/// `1..n-1`; the minimiser is reported in `ahp_layer` (ties go to the
/// smallest `w`).
pub fn ahp(spec: &DistanceSpectrum, ch: &ChannelPoint) -> Result<BoundResult> {
    ahp_with(spec, ch, &BoundConfig::default())
}

pub fn ahp_with(spec: &DistanceSpectrum, ch: &ChannelPoint, cfg: &BoundConfig) -> Result<BoundResult> {
    layered(spec, ch, cfg, &all_layers(spec.n()), true)
}

/// AHP bound at a fixed layer `w` in `1..=n`.  At `w = n` the extension adds
/// at most the all-ones word and the bound coincides with the TSB.
pub fn ahp_at_layer(spec: &DistanceSpectrum, ch: &ChannelPoint, w: usize, cfg: &BoundConfig) -> Result<BoundResult> {
    layered(spec, ch, cfg, &[w], true)
}

/// `psi`: the AHP without the extension term and without the apex term,
/// minimised over `w` in `1..n-1`.  It never exceeds the ITSB or the AHP.
pub fn psi(spec: &DistanceSpectrum, ch: &ChannelPoint) -> Result<BoundResult> {
    psi_with(spec, ch, &BoundConfig::default())
}

pub fn psi_with(spec: &DistanceSpectrum, ch: &ChannelPoint, cfg: &BoundConfig) -> Result<BoundResult> {
    layered(spec, ch, cfg, &all_layers(spec.n()), false)
}

pub fn psi_at_layer(spec: &DistanceSpectrum, ch: &ChannelPoint, w: usize, cfg: &BoundConfig) -> Result<BoundResult> {
    layered(spec, ch, cfg, &[w], false)
}
