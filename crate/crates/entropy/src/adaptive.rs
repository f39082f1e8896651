//! Adaptive zero-order frequency model.
//!
//! Keeps raw symbol counts, rescaling when the total would exceed the
//! coder's precision. Encoder and decoder update identically, so no
//! model state is transmitted.

use crate::range::{RangeDecoder, RangeEncoder};
use crate::Result;

const INCREMENT: u32 = 24;
const MAX_TOTAL: u32 = 1 << 16;

#[derive(Debug, Clone)]
pub struct AdaptiveModel {
    freq: Vec<u32>,
    total: u32,
}

impl AdaptiveModel {
    pub fn new(num_symbols: usize) -> Self {
        assert!(num_symbols >= 1 && num_symbols as u32 <= MAX_TOTAL / 2);
        Self {
            freq: vec![1; num_symbols],
            total: num_symbols as u32,
        }
    }

    pub fn num_symbols(&self) -> usize {
        self.freq.len()
    }

    pub fn encode(&mut self, enc: &mut RangeEncoder, symbol: usize) {
        let cum: u32 = self.freq[..symbol].iter().sum();
        enc.encode(cum, self.freq[symbol], self.total);
        self.bump(symbol);
    }

    pub fn decode(&mut self, dec: &mut RangeDecoder<'_>) -> Result<usize> {
        let dv = dec.decode_target(self.total)?;
        let mut cum = 0u32;
        let mut symbol = self.freq.len() - 1;
        for (s, &f) in self.freq.iter().enumerate() {
            if cum + f > dv {
                symbol = s;
                break;
            }
            cum += f;
        }
        dec.commit(cum, self.freq[symbol], self.total);
        self.bump(symbol);
        Ok(symbol)
    }

    fn bump(&mut self, symbol: usize) {
        self.freq[symbol] += INCREMENT;
        self.total += INCREMENT;
        if self.total > MAX_TOTAL {
            self.total = 0;
            for f in &mut self.freq {
                *f = (*f + 1) >> 1; // halve, keeping every symbol codable
                self.total += *f;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adaptive_round_trip() {
        let symbols: Vec<usize> = (0..5000).map(|i| [0, 0, 1, 0, 2, 0, 0, 3][i % 8]).collect();
        let mut model = AdaptiveModel::new(4);
        let mut enc = RangeEncoder::new();
        for &s in &symbols {
            model.encode(&mut enc, s);
        }
        let bytes = enc.finish();

        let mut model = AdaptiveModel::new(4);
        let mut dec = RangeDecoder::new(&bytes);
        for &expect in &symbols {
            assert_eq!(model.decode(&mut dec).unwrap(), expect);
        }
    }

    #[test]
    fn adaptation_beats_uniform_on_skewed_data() {
        let symbols: Vec<usize> = (0..20_000).map(|i| usize::from(i % 17 == 0)).collect();
        let mut model = AdaptiveModel::new(2);
        let mut enc = RangeEncoder::new();
        for &s in &symbols {
            model.encode(&mut enc, s);
        }
        let bytes = enc.finish().len();
        // ~0.32 bits/symbol entropy; uniform coding would need 2500 bytes
        assert!(bytes < 1500, "adaptive coded {bytes} bytes");
    }
}
