//! Finite-length upper bounds on the ML decoding error probability: the
//! tangential-sphere bound (block and bit error), the improved TSB, the
//! added-hyper-plane bound, and the function `psi` that lower-bounds the
//! last two.
//!
//! Every bound is an integral over the noise component `z1` along the
//! direction of the transmitted point of per-weight conditional
//! probabilities, plus the probability of leaving the cone and the
//! probability that `z1` passes the apex.  All per-weight conditional
//! probabilities share one outer quadrature, so terms of one bound are
//! evaluated on identical nodes.

mod cone;
mod hunter;
mod kernel;
mod tsb;

use std::collections::BTreeMap;

pub use cone::{cone_equation, cone_radius_or_unbounded, solve_cone_radius};
pub use hunter::{ahp, ahp_at_layer, ahp_with, itsb, itsb_with, itsb_with_rho, psi, psi_at_layer, psi_with};
pub use kernel::{pairwise_term, triple_term};
pub use tsb::{tsb_bit, tsb_bit_with, tsb_block, tsb_block_with, tsb_with_radius};

use crate::error::{domain, Result};
use crate::numerics::Tolerance;

/// Channel state with unit symbol energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelPoint {
    c: f64,
    rate: f64,
}

impl ChannelPoint {
    /// `c = Es/N0` (linear) and code rate `R`.
    pub fn new(c: f64, rate: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return domain(format!("Es/N0 must be positive and finite, got {c}"));
        }
        if !(rate > 0.0 && rate <= 1.0) {
            return domain(format!("rate must lie in (0, 1], got {rate}"));
        }
        Ok(ChannelPoint { c, rate })
    }

    /// From `Eb/N0` in dB: `c = R 10^(dB/10)`.
    pub fn from_eb_n0_db(db: f64, rate: f64) -> Result<Self> {
        Self::new(rate * 10f64.powf(db / 10.0), rate)
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Noise variance per dimension, `1 / (2c)`.
    pub fn sigma2(&self) -> f64 {
        0.5 / self.c
    }

    pub fn sigma(&self) -> f64 {
        self.sigma2().sqrt()
    }

    pub fn eb_n0(&self) -> f64 {
        self.c / self.rate
    }

    pub fn eb_n0_db(&self) -> f64 {
        10.0 * self.eb_n0().log10()
    }
}

/// Quadrature settings for the bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConfig {
    /// Tolerance of the outer integral over `z1`, applied to every term.
    pub outer: Tolerance,
    /// Tolerance of the conditional probabilities computed at each `z1`.
    pub inner: Tolerance,
    /// The outer integral starts at `z1 = -tail_sigmas * sigma`.
    pub tail_sigmas: f64,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig {
            outer: Tolerance { abs_tol: 1e-300, rel_tol: 1e-10, max_iter: 400 },
            inner: Tolerance { abs_tol: 1e-300, rel_tol: 1e-12, max_iter: 200 },
            tail_sigmas: 10.0,
        }
    }
}

/// The two terms every bound shares: leaving the cone, and `z1` beyond the apex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailTerms {
    /// `P(z1 <= sqrt(n), |y_perp|^2 >= r_z1^2)`.
    pub cap: f64,
    pub ln_cap: f64,
    /// `Q(sqrt(2 n c))`; zero for `psi`, which omits it.
    pub q: f64,
    pub ln_q: f64,
}

/// A bound value with its ingredients.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    /// The bound; may exceed one, in which case it is vacuous but well defined.
    pub value: f64,
    pub log_value: f64,
    /// `ln` of each weight's contribution (at the chosen layer for AHP and `psi`).
    pub per_weight: BTreeMap<usize, f64>,
    /// Cone radius at the transmitted point; infinite when no finite radius is optimal.
    pub cone_radius: f64,
    /// Optimal extension layer `w*` (AHP) or minimising layer (`psi`).
    pub ahp_layer: Option<usize>,
    pub tail_terms: TailTerms,
    /// Absolute error budget: quadrature error of every term plus the
    /// truncation of the outer integral.
    pub error_estimate: f64,
}

impl BoundResult {
    pub(crate) fn new(
        log_value: f64,
        per_weight: BTreeMap<usize, f64>,
        cone_radius: f64,
        ahp_layer: Option<usize>,
        tail_terms: TailTerms,
        error_estimate: f64,
    ) -> Self {
        BoundResult { value: log_value.exp(), log_value, per_weight, cone_radius, ahp_layer, tail_terms, error_estimate }
    }
}
