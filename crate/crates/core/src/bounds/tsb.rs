use std::collections::BTreeMap;

use super::kernel::{Kernel, Term};
use super::{cone_radius_or_unbounded, BoundConfig, BoundResult, ChannelPoint, TailTerms};
use crate::codes::{bit_weight_transform, DistanceSpectrum, Iowef};
use crate::error::Result;
use crate::geometry::{delta_slope, ConeGeometry};
use crate::numerics::{ln_q_function, log_sum_exp, q_function};

/// Tangential-sphere bound on the block error probability at the optimal
/// cone radius.
pub fn tsb_block(spec: &DistanceSpectrum, ch: &ChannelPoint) -> Result<BoundResult> {
    tsb_block_with(spec, ch, &BoundConfig::default())
}

pub fn tsb_block_with(spec: &DistanceSpectrum, ch: &ChannelPoint, cfg: &BoundConfig) -> Result<BoundResult> {
    let r = cone_radius_or_unbounded(spec)?;
    tsb_with_radius(spec, ch, r, cfg)
}

/// Tangential-sphere bound at a given cone radius (any `r > 0` gives a
/// valid bound; `r = inf` is allowed).
///
/// `int_{z1 <= sqrt(n)} phi(z1) [sum_h A_h P2(h | z1) + P(exit | z1)] dz1 + Q(sqrt(2nc))`,
/// where only weights with `sqrt(h) < alpha_h` contribute.
pub fn tsb_with_radius(spec: &DistanceSpectrum, ch: &ChannelPoint, r: f64, cfg: &BoundConfig) -> Result<BoundResult> {
    let n = spec.n();
    let geo = ConeGeometry::new(n, r)?;
    let kernel = Kernel::new(n, r, ch, cfg.inner)?;
    let weights: Vec<usize> = spec.interior_support().filter(|&h| geo.includes(h)).collect();
    let mut terms = Vec::with_capacity(weights.len() + 1);
    for &h in &weights {
        terms.push(Term::Pair { h, slope: delta_slope(h, n)? });
    }
    terms.push(Term::Cap);
    let res = kernel.integrate(&terms, cfg)?;

    let mut per_weight = BTreeMap::new();
    let mut logs = Vec::with_capacity(terms.len() + 1);
    let mut err = 0.0;
    for (i, &h) in weights.iter().enumerate() {
        let ln_a = spec.ln_count(h);
        let v = ln_a + res[i].value.ln();
        per_weight.insert(h, v);
        logs.push(v);
        err += ln_a.exp() * res[i].error;
    }
    let cap = res[weights.len()];
    let x = (2.0 * n as f64 * ch.c()).sqrt();
    let tails = TailTerms { cap: cap.value, ln_cap: cap.value.ln(), q: q_function(x), ln_q: ln_q_function(x) };
    logs.push(tails.ln_cap);
    logs.push(tails.ln_q);
    err += cap.error;
    let coef_sum: f64 = 1.0 + weights.iter().map(|&h| spec.count(h)).sum::<f64>();
    err += kernel.truncation(cfg) * coef_sum;
    Ok(BoundResult::new(log_sum_exp(&logs), per_weight, r, None, tails, err))
}

/// Tangential-sphere bound on the bit error probability: the block bound
/// with `A_h` replaced by `A'_h = sum_w (w/k) A_{w,h}`, including the cone
/// radius re-solved for `A'_h`.
pub fn tsb_bit(io: &Iowef, ch: &ChannelPoint) -> Result<BoundResult> {
    tsb_bit_with(io, ch, &BoundConfig::default())
}

pub fn tsb_bit_with(io: &Iowef, ch: &ChannelPoint, cfg: &BoundConfig) -> Result<BoundResult> {
    tsb_block_with(&bit_weight_transform(io)?, ch, cfg)
}
