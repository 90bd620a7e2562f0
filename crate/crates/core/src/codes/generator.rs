use std::path::Path;

use rayon::prelude::*;

use super::spectrum::{DistanceSpectrum, Iowef};
use crate::error::{Error, Result};

/// Largest message length accepted by [`enumerate_spectrum`].
pub const ENUMERATION_CAP: usize = 24;

/// A `k x n` binary generator matrix with linearly independent rows.
///
/// Rows are packed little-endian into 64-bit words: column `j` is bit
/// `j % 64` of word `j / 64`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    k: usize,
    n: usize,
    rows: Vec<Vec<u64>>,
}

fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

impl GeneratorMatrix {
    /// Builds a matrix from rows of 0/1 entries and checks full row rank over GF(2).
    pub fn from_bits(bits: &[Vec<u8>]) -> Result<Self> {
        let k = bits.len();
        if k == 0 {
            return Err(Error::Parse { line: 1, msg: "generator matrix has no rows".into() });
        }
        let n = bits[0].len();
        if n < k {
            return Err(Error::Parse { line: 1, msg: format!("need k <= n, got k = {k}, n = {n}") });
        }
        let mut rows = Vec::with_capacity(k);
        for (i, r) in bits.iter().enumerate() {
            if r.len() != n {
                return Err(Error::Parse { line: i + 2, msg: format!("row {i} has {} entries, expected {n}", r.len()) });
            }
            let mut words = vec![0u64; words_for(n)];
            for (j, &b) in r.iter().enumerate() {
                match b {
                    0 => {}
                    1 => words[j / 64] |= 1 << (j % 64),
                    _ => return Err(Error::Parse { line: i + 2, msg: format!("entry {b} at column {j} is not binary") }),
                }
            }
            rows.push(words);
        }
        let g = GeneratorMatrix { k, n, rows };
        let rank = g.rank();
        if rank < k {
            return Err(Error::RankDeficient { rank, k });
        }
        Ok(g)
    }

    /// Parses the text format: a first line `k n`, then `k` lines of `n`
    /// characters from `{0, 1}`.  Blank lines and lines starting with `#` are
    /// ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty generator file".into() })?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        let parse_dim = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::Parse { line: hline, msg: format!("expected \"k n\", found {header:?}") })
        };
        if dims.len() != 2 {
            return Err(Error::Parse { line: hline, msg: format!("expected \"k n\", found {header:?}") });
        }
        let (k, n) = (parse_dim(dims[0])?, parse_dim(dims[1])?);
        if k == 0 || n < k {
            return Err(Error::Parse { line: hline, msg: format!("need 1 <= k <= n, got k = {k}, n = {n}") });
        }
        let mut bits = Vec::with_capacity(k);
        for _ in 0..k {
            let (ln, l) = lines.next().ok_or(Error::Parse { line: hline, msg: format!("expected {k} rows") })?;
            if l.chars().count() != n {
                return Err(Error::Parse { line: ln, msg: format!("row has {} characters, expected {n}", l.chars().count()) });
            }
            let mut row = Vec::with_capacity(n);
            for ch in l.chars() {
                match ch {
                    '0' => row.push(0),
                    '1' => row.push(1),
                    other => return Err(Error::Parse { line: ln, msg: format!("unexpected character {other:?}") }),
                }
            }
            bits.push(row);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::Parse { line: ln, msg: format!("extra content after {k} rows") });
        }
        match Self::from_bits(&bits) {
            Err(Error::Parse { msg, .. }) => Err(Error::Parse { line: hline, msg }),
            other => other,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.k, self.n);
        for i in 0..self.k {
            s.extend((0..self.n).map(|j| if self.bit(i, j) { '1' } else { '0' }));
            s.push('\n');
        }
        s
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn bit(&self, i: usize, j: usize) -> bool {
        self.rows[i][j / 64] >> (j % 64) & 1 == 1
    }

    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.rows[i]
    }

    /// Codeword of message `msg` (bit `i` of `msg` selects row `i`).
    pub fn encode(&self, msg: u64) -> Vec<u64> {
        let mut c = vec![0u64; words_for(self.n)];
        for i in 0..self.k {
            if msg >> i & 1 == 1 {
                for (w, r) in c.iter_mut().zip(&self.rows[i]) {
                    *w ^= r;
                }
            }
        }
        c
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        let mut m = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.n {
            let (w, b) = (col / 64, col % 64);
            let Some(p) = (rank..m.len()).find(|&r| m[r][w] >> b & 1 == 1) else { continue };
            m.swap(rank, p);
            let pivot = m[rank].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != rank && row[w] >> b & 1 == 1 {
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x ^= y;
                    }
                }
            }
            rank += 1;
            if rank == m.len() {
                break;
            }
        }
        rank
    }

    /// Systematic (7,4) Hamming code.
    pub fn hamming74() -> Self {
        Self::from_text("4 7\n1000110\n0100011\n0010111\n0001101\n").expect("valid built-in matrix")
    }

    /// (23,12) binary Golay code generated by `x^11 + x^10 + x^6 + x^5 + x^4 + x^2 + 1`.
    pub fn golay23() -> Self {
        let g = [1u8, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1];
        Self::cyclic(23, &g).expect("valid built-in matrix")
    }

    /// Cyclic code of length `n` from generator polynomial coefficients
    /// `g[0] + g[1] x + ...`; row `i` is `x^i g(x)`.
    pub fn cyclic(n: usize, g: &[u8]) -> Result<Self> {
        let deg = g.len().saturating_sub(1);
        if deg == 0 || deg >= n {
            return Err(Error::Parse { line: 1, msg: format!("generator polynomial degree {deg} invalid for n = {n}") });
        }
        let k = n - deg;
        let bits: Vec<Vec<u8>> = (0..k)
            .map(|i| {
                let mut r = vec![0u8; n];
                r[i..i + g.len()].copy_from_slice(g);
                r
            })
            .collect();
        Self::from_bits(&bits)
    }

    /// Length-`n` repetition code.
    pub fn repetition(n: usize) -> Result<Self> {
        Self::from_bits(&[vec![1u8; n]])
    }
}

/// Exact distance spectrum and input-output weight enumerator by running
/// through all `2^k` messages in Gray-code order.
///
/// Message blocks are processed in parallel; per-block integer counts are
/// summed, so the result does not depend on the worker count.
pub fn enumerate_spectrum(g: &GeneratorMatrix) -> Result<(DistanceSpectrum, Iowef)> {
    let (k, n) = (g.k, g.n);
    if k > ENUMERATION_CAP {
        return Err(Error::CapExceeded { k, cap: ENUMERATION_CAP });
    }
    let block_bits = k.min(12);
    let blocks = 1u64 << (k - block_bits);
    let block_len = 1u64 << block_bits;
    let width = n + 1;
    let counts = (0..blocks)
        .into_par_iter()
        .map(|blk| {
            let mut local = vec![0u64; (k + 1) * width];
            let start = blk * block_len;
            let gray = start ^ (start >> 1);
            let mut cw = g.encode(gray);
            let mut msg = gray;
            for i in start..start + block_len {
                if i != start {
                    let row = i.trailing_zeros() as usize;
                    msg ^= 1 << row;
                    for (x, y) in cw.iter_mut().zip(&g.rows[row]) {
                        *x ^= y;
                    }
                }
                let h: u32 = cw.iter().map(|w| w.count_ones()).sum();
                local[msg.count_ones() as usize * width + h as usize] += 1;
            }
            local
        })
        .reduce(
            || vec![0u64; (k + 1) * width],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let iowef = Iowef::from_counts(n, k, |w, h| counts[w * width + h])?;
    let spectrum = iowef.marginal()?;
    Ok((spectrum, iowef))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(s: &DistanceSpectrum) -> Vec<u64> {
        (0..=s.n()).map(|h| s.count(h).round() as u64).collect()
    }

    #[test]
    fn repetition_spectrum() {
        let (s, _) = enumerate_spectrum(&GeneratorMatrix::repetition(3).unwrap()).unwrap();
        assert_eq!(counts(&s), vec![1, 0, 0, 1]);
        assert_eq!(s.d_min(), 3);
    }

    #[test]
    fn hamming_spectrum() {
        let (s, _) = enumerate_spectrum(&GeneratorMatrix::hamming74()).unwrap();
        assert_eq!(counts(&s), vec![1, 0, 0, 7, 7, 0, 0, 1]);
        assert_eq!(s.d_min(), 3);
    }

    #[test]
    fn golay_spectrum() {
        let g = GeneratorMatrix::golay23();
        assert_eq!((g.k(), g.n()), (12, 23));
        let (s, _) = enumerate_spectrum(&g).unwrap();
        let c = counts(&s);
        assert_eq!(s.d_min(), 7);
        assert_eq!(c[7], 253);
        assert_eq!(c[8], 506);
        assert_eq!(c[11], 1288);
        assert_eq!(c[12], 1288);
        assert_eq!(c[15], 506);
        assert_eq!(c[16], 253);
        assert_eq!(c[23], 1);
        assert_eq!(c.iter().sum::<u64>(), 4096);
    }

    #[test]
    fn text_round_trip() {
        let g = GeneratorMatrix::golay23();
        assert_eq!(GeneratorMatrix::from_text(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn malformed_rows_name_their_line() {
        match GeneratorMatrix::from_text("2 4\n1010\n01x1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match GeneratorMatrix::from_text("2 4\n1010\n011\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rank_deficiency_detected() {
        assert!(matches!(
            GeneratorMatrix::from_text("3 4\n1100\n0110\n1010\n"),
            Err(Error::RankDeficient { rank: 2, k: 3 })
        ));
    }

    #[test]
    fn cap_enforced() {
        let bits: Vec<Vec<u8>> = (0..25).map(|i| (0..25).map(|j| u8::from(i == j)).collect()).collect();
        let g = GeneratorMatrix::from_bits(&bits).unwrap();
        assert!(matches!(enumerate_spectrum(&g), Err(Error::CapExceeded { k: 25, .. })));
    }

    #[test]
    fn multiword_rows() {
        let n = 70;
        let bits: Vec<Vec<u8>> = vec![(0..n).map(|j| u8::from(j % 3 == 0)).collect(), (0..n).map(|j| u8::from(j >= 60)).collect()];
        let g = GeneratorMatrix::from_bits(&bits).unwrap();
        let (s, _) = enumerate_spectrum(&g).unwrap();
        // weights 24, 10 and 24 + 10 - 2 * 4 = 26
        assert_eq!(s.count(24).round() as u64, 1);
        assert_eq!(s.count(10).round() as u64, 1);
        assert_eq!(s.count(26).round() as u64, 1);
    }
}
