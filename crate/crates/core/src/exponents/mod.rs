//! Error exponents.
//!
//! * [`chernoff`]: Chernoff versions of the TSB and of `psi` at finite `n`,
//!   and the exponent `g` of a Hunter-pair term.
//! * [`closed_form`]: the common exponent `E(c)` of the TSB family and the
//!   union-bound exponent, both from a spectral growth rate `r(delta)`.
//! * [`gallager`]: the random-coding exponent of the BPSK-AWGN channel.
//!
//! Exponents are in nats per channel symbol; `c = Es/N0`.

pub mod chernoff;
pub mod closed_form;
pub mod gallager;

pub use chernoff::{
    cap_log_bound, chernoff_psi, chernoff_psi_at, chernoff_tsb, chernoff_tsb_at, e1, e2, pair_log_bound,
    verify_kstar_zero, ChernoffBound, ChernoffParams, KStarReport, TripleCase, TripleChernoff,
};
pub use closed_form::{tsb_exponent, tsb_exponent_at, union_exponent};
pub use gallager::{gallager_e0, gallager_rce};

use serde::Serialize;

/// Minimiser of an exponent over the normalised weight `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentResult {
    /// Minimum of the objective.  May be negative for the union exponent;
    /// see `vacuous`.
    pub exponent: f64,
    pub delta_star: f64,
    /// `gamma(delta*)` (1 for the union exponent).
    pub gamma_star: f64,
    /// `c0(delta*)`; `NaN` where `r(delta*) <= 0` leaves it undefined.
    pub c0_star: f64,
    /// The objective is not positive, so the bound it comes from does not
    /// decay with `n`.
    pub vacuous: bool,
}

/// `-log_value / n`: the exponent of a bound at block length `n`.
pub fn finite_n_exponent(log_value: f64, n: usize) -> f64 {
    -log_value / n as f64
}
