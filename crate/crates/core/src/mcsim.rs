//! Monte-Carlo maximum-likelihood decoding over BPSK-AWGN.
//!
//! Bit `0` maps to `-1`, bit `1` to `+1` (unit symbol energy), so the
//! correlation of the received word with codeword `x` is
//! `2 sum_{j in supp x} y_j - sum_j y_j` and ML decoding maximises
//! `D(x) = sum_{j in supp x} y_j`.  Every trial scans all `2^k` codewords.
//! Equal metrics are counted as errors.
//!
//! Trials are split into fixed chunks of 4096; chunk `i` draws from a
//! ChaCha8 stream seeded by `seed` with stream number `i`, so results do not
//! depend on the number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::ChannelPoint;
use crate::codes::GeneratorMatrix;
use crate::error::{domain, Error, Result};
use crate::numerics::q_function;

/// Largest dimension simulated (2^k metric evaluations per trial).
pub const MAX_K: usize = 16;
/// Codewords are held as one 64-bit mask.
pub const MAX_N: usize = 64;
/// Smallest accepted number of trials.
pub const MIN_TRIALS: u64 = 10_000;
const CHUNK: u64 = 4096;

/// Which codeword is sent in each trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transmit {
    AllZero,
    /// A uniformly random message per trial, drawn from the trial's stream.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub block_error_rate: f64,
    pub bit_error_rate: f64,
    pub trials: u64,
    pub block_errors: u64,
    /// Information-bit errors over `trials * k` bits.
    pub bit_errors: u64,
    /// `sqrt(p (1 - p) / trials)` for the block error rate.
    pub block_std_error: f64,
    /// `sqrt(p (1 - p) / trials)` for the bit error rate.
    pub bit_std_error: f64,
    pub seed: u64,
}

fn std_error(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

struct Codebook {
    n: usize,
    k: usize,
    words: Vec<u64>,
}

impl Codebook {
    fn new(g: &GeneratorMatrix) -> Result<Self> {
        let (n, k) = (g.n(), g.k());
        if k > MAX_K {
            return Err(Error::CapExceeded { k, cap: MAX_K });
        }
        if n > MAX_N {
            return domain(format!("simulation supports n <= {MAX_N}, got {n}"));
        }
        let rows: Vec<u64> = (0..k).map(|i| g.row_words(i)[0]).collect();
        let mut words = vec![0u64; 1 << k];
        for m in 1..words.len() {
            let low = m.trailing_zeros() as usize;
            words[m] = words[m & (m - 1)] ^ rows[low];
        }
        Ok(Codebook { n, k, words })
    }
}

/// `(block errors, bit errors)` of one chunk.
fn run_chunk(book: &Codebook, sigma: f64, seed: u64, chunk: u64, len: u64, tx: Transmit) -> (u64, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let noise = Normal::new(0.0, sigma).expect("sigma is positive and finite");
    let bytes = book.n.div_ceil(8);
    let mut tables = vec![[0.0f64; 256]; bytes];
    let mut y = vec![0.0f64; bytes * 8];
    let (mut block, mut bits) = (0u64, 0u64);
    for _ in 0..len {
        let m = match tx {
            Transmit::AllZero => 0usize,
            Transmit::Random => rng.random_range(0..book.words.len()),
        };
        let sent = book.words[m];
        for (j, yj) in y.iter_mut().enumerate().take(book.n) {
            let s = if sent >> j & 1 == 1 { 1.0 } else { -1.0 };
            *yj = s + noise.sample(&mut rng);
        }
        for (b, t) in tables.iter_mut().enumerate() {
            let ys = &y[8 * b..8 * b + 8];
            t[0] = 0.0;
            for v in 1..256usize {
                let low = v.trailing_zeros() as usize;
                t[v] = t[v & (v - 1)] + ys[low];
            }
        }
        let metric = |x: u64| -> f64 {
            let mut acc = 0.0;
            for (b, t) in tables.iter().enumerate() {
                acc += t[(x >> (8 * b) & 0xff) as usize];
            }
            acc
        };
        let own = metric(sent);
        let mut best = f64::NEG_INFINITY;
        let mut best_i = m;
        for (i, &x) in book.words.iter().enumerate() {
            if i == m {
                continue;
            }
            let v = metric(x);
            if v > best {
                best = v;
                best_i = i;
            }
        }
        if best >= own {
            block += 1;
            bits += u64::from((best_i ^ m).count_ones());
        }
    }
    (block, bits)
}

/// ML block and bit error rates of `g` at `ch`, all-zero codeword sent.
pub fn simulate_ml(g: &GeneratorMatrix, ch: &ChannelPoint, trials: u64, seed: u64) -> Result<McEstimate> {
    simulate_ml_with(g, ch, trials, seed, Transmit::AllZero)
}

pub fn simulate_ml_with(g: &GeneratorMatrix, ch: &ChannelPoint, trials: u64, seed: u64, tx: Transmit) -> Result<McEstimate> {
    if trials < MIN_TRIALS {
        return domain(format!("need at least {MIN_TRIALS} trials, got {trials}"));
    }
    let book = Codebook::new(g)?;
    let sigma = ch.sigma();
    let chunks = trials.div_ceil(CHUNK);
    let (block_errors, bit_errors) = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let len = CHUNK.min(trials - i * CHUNK);
            run_chunk(&book, sigma, seed, i, len, tx)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let block_error_rate = block_errors as f64 / trials as f64;
    let bit_error_rate = bit_errors as f64 / (trials as f64 * book.k as f64);
    Ok(McEstimate {
        block_error_rate,
        bit_error_rate,
        trials,
        block_errors,
        bit_errors,
        block_std_error: std_error(block_error_rate, trials),
        bit_std_error: std_error(bit_error_rate, trials),
        seed,
    })
}

/// `Q(sqrt(2 h c))`: the exact ML error probability of a code whose only
/// nonzero codeword has weight `h`.
pub fn exact_single_pairwise(h: usize, n: usize, ch: &ChannelPoint) -> Result<f64> {
    if h == 0 || h > n {
        return domain(format!("weight must satisfy 0 < h <= n = {n}, got {h}"));
    }
    Ok(q_function((2.0 * h as f64 * ch.c()).sqrt()))
}
