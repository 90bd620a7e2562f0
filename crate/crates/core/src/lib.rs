//! Upper bounds on the maximum-likelihood decoding error probability of binary
//! linear block codes with BPSK signalling over the AWGN channel.
//!
//! The crate evaluates the tangential-sphere bound (TSB) and two refinements
//! built on Hunter's second-order Bonferroni inequality: the improved TSB
//! (ITSB), anchored at a minimum-distance codeword, and the added-hyper-plane
//! (AHP) bound, which extends the code at one weight layer so that every
//! correlation it needs is a function of the distance spectrum alone.  The
//! asymptotic side covers Chernoff versions of these bounds, the closed-form
//! error exponent they share, and the union-bound and random-coding exponents
//! used as references.  A Monte-Carlo ML decoder provides ground truth for
//! short codes.
//!
//! Conventions used everywhere: the symbol energy is normalised to one, so the
//! transmitted point sits at distance `sqrt(n)` from the origin, the noise
//! variance per dimension is `sigma^2 = 1 / (2c)` with `c = Es/N0`, and
//! `c = R * Eb/N0`.  Counts and probabilities that can underflow are carried
//! as natural logarithms.

pub mod bounds;
pub mod cli;
pub mod codes;
pub mod error;
pub mod exponents;
pub mod geometry;
pub mod mcsim;
pub mod numerics;

pub use error::{Error, Result};
