use std::collections::BTreeMap;
use std::fmt;
use std::f64::consts::LN_2;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::numerics::log_sum_exp;

/// Where a spectrum came from; decides validation and the effective minimum
/// distance rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    /// Exact counts of a specific code (`A_0 = 1`).
    Code,
    /// Average counts of an ensemble; entries may be fractional.
    Ensemble,
    /// Bit-weighted counts `A'_h` derived from an input-output enumerator.
    Bit,
}

/// Distance spectrum stored as `ln A_h`, `h = 0..=n`, with `-inf` for empty
/// weights.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceSpectrum {
    kind: SpectrumKind,
    n: usize,
    rate: Option<f64>,
    log_a: Vec<f64>,
    d_min: usize,
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidSpectrum(msg.into()))
}

/// `ln C(n, h)`.
pub fn ln_binomial(n: usize, h: usize) -> f64 {
    if h > n {
        return f64::NEG_INFINITY;
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(h as f64 + 1.0) - ln_gamma((n - h) as f64 + 1.0)
}

/// Binary entropy in nats; `H(0) = H(1) = 0`.
pub fn binary_entropy(d: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.ln() };
    term(d) + term(1.0 - d)
}

impl DistanceSpectrum {
    /// Validates `ln A_h` values and derives the effective minimum distance:
    /// the least `h >= 1` with `A_h > 0` for code and bit spectra, the least
    /// `h >= 1` with `A_h >= 1` for ensembles (falling back to the least
    /// `h >= 1` with `A_h > 0` when no weight reaches one).
    pub fn from_log_counts(kind: SpectrumKind, n: usize, rate: Option<f64>, log_a: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return invalid(format!("n must be at least 2, got {n}"));
        }
        if log_a.len() != n + 1 {
            return invalid(format!("log_a has {} entries, expected n + 1 = {}", log_a.len(), n + 1));
        }
        if let Some((h, v)) = log_a.iter().enumerate().find(|(_, v)| v.is_nan() || **v == f64::INFINITY) {
            return invalid(format!("log_a[{h}] = {v} is not finite or -inf"));
        }
        if let Some(r) = rate {
            if !(r > 0.0 && r <= 1.0) {
                return invalid(format!("rate must lie in (0, 1], got {r}"));
            }
        }
        if kind == SpectrumKind::Code && log_a[0] != 0.0 {
            return invalid(format!("log_a[0] must be 0 for a code spectrum, got {}", log_a[0]));
        }
        let positive = (1..=n).find(|&h| log_a[h].is_finite());
        let d_min = match kind {
            SpectrumKind::Code | SpectrumKind::Bit => positive,
            SpectrumKind::Ensemble => (1..=n).find(|&h| log_a[h] >= 0.0).or(positive),
        };
        let Some(d_min) = d_min else {
            return invalid("spectrum has no nonzero weight with positive count");
        };
        Ok(DistanceSpectrum { kind, n, rate, log_a, d_min })
    }

    /// Code spectrum from exact integer counts.
    pub fn from_counts(counts: &[u64], rate: Option<f64>) -> Result<Self> {
        if counts.is_empty() {
            return invalid("empty count vector");
        }
        let log_a = counts.iter().map(|&c| if c == 0 { f64::NEG_INFINITY } else { (c as f64).ln() }).collect();
        Self::from_log_counts(SpectrumKind::Code, counts.len() - 1, rate, log_a)
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rate(&self) -> Option<f64> {
        self.rate
    }

    pub fn log_a(&self) -> &[f64] {
        &self.log_a
    }

    pub fn ln_count(&self, h: usize) -> f64 {
        self.log_a.get(h).copied().unwrap_or(f64::NEG_INFINITY)
    }

    pub fn count(&self, h: usize) -> f64 {
        self.ln_count(h).exp()
    }

    pub fn d_min(&self) -> usize {
        self.d_min
    }

    /// Weights `0 < h < n` with `A_h > 0`, ascending.
    pub fn interior_support(&self) -> impl Iterator<Item = usize> + '_ {
        (1..self.n).filter(|&h| self.log_a[h].is_finite())
    }

    /// `ln sum_h A_h`.
    pub fn ln_total(&self) -> f64 {
        log_sum_exp(&self.log_a)
    }
}

/// Average spectrum of the fully random binary linear ensemble:
/// `ln A_h = ln C(n, h) - n (1 - R) ln 2`.
pub fn random_ensemble_spectrum(n: usize, rate: f64) -> Result<DistanceSpectrum> {
    if !(rate > 0.0 && rate < 1.0) {
        return invalid(format!("ensemble rate must lie in (0, 1), got {rate}"));
    }
    let shift = n as f64 * (1.0 - rate) * LN_2;
    let log_a = (0..=n).map(|h| ln_binomial(n, h) - shift).collect();
    DistanceSpectrum::from_log_counts(SpectrumKind::Ensemble, n, Some(rate), log_a)
}

/// `ln A_h / n` at `h = round(delta n)`, `delta` in `(0, 1]`.
pub fn growth_rate(spec: &DistanceSpectrum, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Domain(format!("delta must lie in (0, 1], got {delta}")));
    }
    let h = (delta * spec.n as f64).round() as usize;
    Ok(spec.ln_count(h) / spec.n as f64)
}

/// Input-output weight enumerator: `ln A_{w,h}` for the nonzero entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Iowef {
    n: usize,
    k: usize,
    log_awh: BTreeMap<(usize, usize), f64>,
}

impl Iowef {
    pub fn from_counts(n: usize, k: usize, count: impl Fn(usize, usize) -> u64) -> Result<Self> {
        let mut log_awh = BTreeMap::new();
        for w in 0..=k {
            for h in 0..=n {
                let c = count(w, h);
                if c > 0 {
                    log_awh.insert((w, h), (c as f64).ln());
                }
            }
        }
        Self::from_log_entries(n, k, log_awh)
    }

    pub fn from_log_entries(n: usize, k: usize, log_awh: BTreeMap<(usize, usize), f64>) -> Result<Self> {
        if k == 0 || k > n {
            return invalid(format!("need 1 <= k <= n, got k = {k}, n = {n}"));
        }
        if let Some(((w, h), _)) = log_awh.iter().find(|((w, h), v)| *w > k || *h > n || !v.is_finite()) {
            return invalid(format!("entry ({w}, {h}) out of range or not finite"));
        }
        Ok(Iowef { n, k, log_awh })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ln_count(&self, w: usize, h: usize) -> f64 {
        self.log_awh.get(&(w, h)).copied().unwrap_or(f64::NEG_INFINITY)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.log_awh.iter().map(|(&(w, h), &v)| (w, h, v))
    }

    /// Output-weight marginal `A_h = sum_w A_{w,h}` as a code spectrum.
    pub fn marginal(&self) -> Result<DistanceSpectrum> {
        let mut per_h: Vec<Vec<f64>> = vec![Vec::new(); self.n + 1];
        for (_, h, v) in self.entries() {
            per_h[h].push(v);
        }
        let log_a = per_h.iter().map(|v| log_sum_exp(v)).collect();
        DistanceSpectrum::from_log_counts(SpectrumKind::Code, self.n, Some(self.k as f64 / self.n as f64), log_a)
    }
}

/// Bit-weighted spectrum `A'_h = sum_{w >= 1} (w / k) A_{w,h}`, which takes the
/// place of `A_h` in the bit-error version of the bounds.
pub fn bit_weight_transform(io: &Iowef) -> Result<DistanceSpectrum> {
    let ln_k = (io.k as f64).ln();
    let mut per_h: Vec<Vec<f64>> = vec![Vec::new(); io.n + 1];
    for (w, h, v) in io.entries() {
        if w >= 1 {
            per_h[h].push(v + (w as f64).ln() - ln_k);
        }
    }
    let log_a = per_h.iter().map(|v| log_sum_exp(v)).collect();
    DistanceSpectrum::from_log_counts(SpectrumKind::Bit, io.n, Some(io.k as f64 / io.n as f64), log_a)
}

/// Asymptotic spectral growth rate `r(delta)` in nats.
#[derive(Clone)]
pub enum GrowthRate {
    /// `H(delta) - (1 - R) ln 2`, the fully random ensemble of rate `R`.
    RandomEnsemble { rate: f64 },
    /// `ln A_{round(delta n)} / n` read off a finite spectrum.
    Tabulated(DistanceSpectrum),
    /// Any user-supplied function of `delta`.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for GrowthRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthRate::RandomEnsemble { rate } => write!(f, "RandomEnsemble {{ rate: {rate} }}"),
            GrowthRate::Tabulated(s) => write!(f, "Tabulated(n = {})", s.n()),
            GrowthRate::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl GrowthRate {
    pub fn eval(&self, delta: f64) -> f64 {
        match self {
            GrowthRate::RandomEnsemble { rate } => binary_entropy(delta) - (1.0 - rate) * LN_2,
            GrowthRate::Tabulated(s) => growth_rate(s, delta).unwrap_or(f64::NAN),
            GrowthRate::Custom(f) => f(delta),
        }
    }

    pub fn rate(&self) -> Option<f64> {
        match self {
            GrowthRate::RandomEnsemble { rate } => Some(*rate),
            GrowthRate::Tabulated(s) => s.rate(),
            GrowthRate::Custom(_) => None,
        }
    }

    pub fn provenance(&self) -> &'static str {
        match self {
            GrowthRate::RandomEnsemble { .. } => "ensemble-closed-form",
            GrowthRate::Tabulated(_) => "finite-code",
            GrowthRate::Custom(_) => "custom",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ensemble_basics() {
        let n = 64;
        let s = random_ensemble_spectrum(n, 0.5).unwrap();
        assert!((s.ln_count(0) + 32.0 * LN_2).abs() < 1e-12);
        for h in 0..=n {
            assert!((s.ln_count(h) - s.ln_count(n - h)).abs() < 1e-9);
        }
        assert!((s.ln_total() - 32.0 * LN_2).abs() < 1e-9 * 32.0 * LN_2);
        assert!(s.count(s.d_min()) >= 1.0);
        assert!(s.count(s.d_min() - 1) < 1.0);
    }

    #[test]
    fn code_spectrum_validation() {
        assert!(DistanceSpectrum::from_log_counts(SpectrumKind::Code, 3, None, vec![0.5, f64::NEG_INFINITY, f64::NEG_INFINITY, 0.0]).is_err());
        assert!(DistanceSpectrum::from_log_counts(SpectrumKind::Code, 3, None, vec![0.0, f64::NAN, f64::NEG_INFINITY, 0.0]).is_err());
        assert!(DistanceSpectrum::from_log_counts(SpectrumKind::Code, 3, None, vec![0.0; 3]).is_err());
    }

    #[test]
    fn growth_rate_lookup() {
        let s = DistanceSpectrum::from_counts(&[1, 0, 0, 1], Some(1.0 / 3.0)).unwrap();
        assert_eq!(growth_rate(&s, 1.0).unwrap(), 0.0);
        assert_eq!(growth_rate(&s, 0.34).unwrap(), f64::NEG_INFINITY);
        assert!(growth_rate(&s, 0.0).is_err());
    }

    #[test]
    fn single_entry_bit_transform() {
        let mut m = BTreeMap::new();
        m.insert((0, 0), 0.0);
        m.insert((3, 5), 0.0);
        let io = Iowef::from_log_entries(7, 3, m).unwrap();
        let b = bit_weight_transform(&io).unwrap();
        assert!(b.ln_count(5).abs() < 1e-15);
        assert_eq!(b.ln_count(0), f64::NEG_INFINITY);
    }
}
