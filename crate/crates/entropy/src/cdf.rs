//! Fixed-point cumulative distribution tables.

use crate::{EntropyError, Result};

/// Probability precision in bits. Every table's frequencies sum to
/// exactly `1 << PRECISION`.
pub const PRECISION: u32 = 16;
pub const TOTAL: u32 = 1 << PRECISION;

/// A quantized CDF over `len - 1` symbols: `cumulative[0] == 0`,
/// `cumulative[last] == TOTAL`, strictly increasing, so every symbol
/// carries frequency >= 1 and stays decodable however small its modeled
/// probability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CdfTable {
    cumulative: Vec<u32>,
}

impl CdfTable {
    /// Quantizes a pmf to integer frequencies summing to `TOTAL` with a
    /// per-symbol floor of 1, using largest-remainder rounding with ties
    /// broken toward the lowest symbol index.
    pub fn from_pmf(pmf: &[f64]) -> Result<Self> {
        if pmf.is_empty() {
            return Err(EntropyError::InvalidPmf("empty pmf".into()));
        }
        if pmf.len() >= TOTAL as usize {
            return Err(EntropyError::TooManySymbols(pmf.len()));
        }
        let mut sum = 0.0;
        for &p in pmf {
            if !p.is_finite() || p < 0.0 {
                return Err(EntropyError::InvalidPmf(format!("bad entry {p}")));
            }
            sum += p;
        }
        if sum <= 0.0 {
            return Err(EntropyError::AllZeroPmf);
        }
        if sum > 1.0 + 1e-6 {
            return Err(EntropyError::InvalidPmf(format!("pmf sums to {sum}")));
        }

        let n = pmf.len();
        let spare = (TOTAL as usize - n) as f64;
        let mut freqs = vec![1u32; n];
        let mut fracs: Vec<(usize, f64)> = Vec::with_capacity(n);
        let mut assigned = n as u64;
        for (i, &p) in pmf.iter().enumerate() {
            let ideal = p / sum * spare;
            let base = ideal.floor();
            freqs[i] += base as u32;
            assigned += base as u64;
            fracs.push((i, ideal - base));
        }
        let mut remainder = TOTAL as u64 - assigned;
        fracs.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        for &(i, _) in &fracs {
            if remainder == 0 {
                break;
            }
            freqs[i] += 1;
            remainder -= 1;
        }
        debug_assert_eq!(remainder, 0);
        Self::from_frequencies(&freqs)
    }

    /// Builds a table from explicit integer frequencies (each >= 1,
    /// summing to `TOTAL`).
    pub fn from_frequencies(freqs: &[u32]) -> Result<Self> {
        if freqs.is_empty() {
            return Err(EntropyError::InvalidPmf("empty frequency list".into()));
        }
        let mut cumulative = Vec::with_capacity(freqs.len() + 1);
        let mut acc = 0u64;
        cumulative.push(0);
        for &f in freqs {
            if f == 0 {
                return Err(EntropyError::InvalidPmf("zero frequency".into()));
            }
            acc += f as u64;
            if acc > TOTAL as u64 {
                return Err(EntropyError::InvalidPmf("frequencies exceed total".into()));
            }
            cumulative.push(acc as u32);
        }
        if acc != TOTAL as u64 {
            return Err(EntropyError::InvalidPmf(format!(
                "frequencies sum to {acc}, expected {TOTAL}"
            )));
        }
        Ok(Self { cumulative })
    }

    pub fn num_symbols(&self) -> usize {
        self.cumulative.len() - 1
    }

    #[inline]
    pub fn cum(&self, symbol: usize) -> u32 {
        self.cumulative[symbol]
    }

    #[inline]
    pub fn freq(&self, symbol: usize) -> u32 {
        self.cumulative[symbol + 1] - self.cumulative[symbol]
    }

    pub fn frequencies(&self) -> Vec<u32> {
        (0..self.num_symbols()).map(|s| self.freq(s)).collect()
    }

    /// Largest symbol s with cum(s) <= scaled_value.
    #[inline]
    pub fn lookup(&self, scaled_value: u32) -> usize {
        debug_assert!(scaled_value < TOTAL);
        // binary search over the strictly increasing cumulative array
        let mut lo = 0usize;
        let mut hi = self.cumulative.len() - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.cumulative[mid] <= scaled_value {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Ideal code length of `symbol` under this table, in bits.
    pub fn self_information_bits(&self, symbol: usize) -> f64 {
        -((self.freq(symbol) as f64 / TOTAL as f64).log2())
    }
}
