//! Carry-less range coder with 64-bit state and byte-wise renormalization.
//!
//! Encoder and decoder run the same state machine over (low, range); the
//! encoder emits the top byte of `low` whenever the top byte of the coding
//! interval has settled, and clamps the interval at the next 32-bit
//! boundary when it straddles a byte boundary with too little range left.
//! No carries ever propagate into emitted bytes, so output is append-only.
//! The flush writes 4 bytes, placing a value with 32 zero low bits inside
//! the final interval; the decoder's zero padding reconstructs it exactly.

use crate::cdf::{CdfTable, TOTAL};
use crate::{Bitstream, EntropyError, Result};

const TOP: u64 = 1 << 56;
const BOT: u64 = 1 << 32;
const BOT_MASK: u64 = BOT - 1;

/// Uniform bit: cum/freq of one raw bit under a half-half split.
const HALF: u32 = TOTAL / 2;

pub struct RangeEncoder {
    low: u64,
    range: u64,
    out: Vec<u8>,
}

impl Default for RangeEncoder {
    fn default() -> Self {
        Self::new()
    }
}

impl RangeEncoder {
    pub fn new() -> Self {
        Self {
            low: 0,
            range: u64::MAX,
            out: Vec::new(),
        }
    }

    /// Narrows the interval to `[cum, cum + freq) / total`.
    /// Requires `freq >= 1`, `cum + freq <= total`, `total <= 1 << 16`.
    #[inline]
    pub fn encode(&mut self, cum: u32, freq: u32, total: u32) {
        debug_assert!(freq >= 1 && total <= TOTAL && cum + freq <= total);
        let r = self.range / total as u64;
        self.low += cum as u64 * r;
        self.range = freq as u64 * r;
        self.normalize();
    }

    pub fn encode_symbol(&mut self, table: &CdfTable, symbol: u32) -> Result<()> {
        let s = symbol as usize;
        if s >= table.num_symbols() {
            return Err(EntropyError::SymbolOutOfRange {
                symbol,
                alphabet: table.num_symbols(),
            });
        }
        self.encode(table.cum(s), table.freq(s), TOTAL);
        Ok(())
    }

    /// One raw bit at exactly one bit of cost.
    pub fn encode_bit_raw(&mut self, bit: bool) {
        self.encode(if bit { HALF } else { 0 }, HALF, TOTAL);
    }

    /// `bits` raw bits of `value`, most significant first.
    pub fn encode_raw_bits(&mut self, value: u64, bits: u32) {
        for i in (0..bits).rev() {
            self.encode_bit_raw((value >> i) & 1 == 1);
        }
    }

    #[inline]
    fn normalize(&mut self) {
        loop {
            if (self.low ^ self.low.wrapping_add(self.range)) < TOP {
                // top byte settled
            } else if self.range < BOT {
                // interval straddles a byte boundary with little range left:
                // clamp it to end at the next 32-bit boundary. Every value in
                // the clamped interval shares low's top byte.
                self.range = BOT - (self.low & BOT_MASK);
            } else {
                break;
            }
            self.out.push((self.low >> 56) as u8);
            self.low = self.low.wrapping_shl(8);
            self.range <<= 8;
        }
    }

    /// Terminates the stream with 4 bytes and returns the payload.
    pub fn finish(mut self) -> Vec<u8> {
        // smallest multiple of 2^32 inside [low, low + range)
        let v = (self.low.wrapping_add(BOT - 1)) & !BOT_MASK;
        for shift in [56u32, 48, 40, 32] {
            self.out.push((v >> shift) as u8);
        }
        self.out
    }

    pub fn bytes_written(&self) -> usize {
        self.out.len()
    }
}

pub struct RangeDecoder<'a> {
    low: u64,
    range: u64,
    code: u64,
    input: &'a [u8],
    pos: usize,
}

impl<'a> RangeDecoder<'a> {
    pub fn new(input: &'a [u8]) -> Self {
        let mut d = Self {
            low: 0,
            range: u64::MAX,
            code: 0,
            input,
            pos: 0,
        };
        for _ in 0..8 {
            d.code = (d.code << 8) | d.next_byte() as u64;
        }
        d
    }

    #[inline]
    fn next_byte(&mut self) -> u8 {
        let b = if self.pos < self.input.len() {
            self.input[self.pos]
        } else {
            0
        };
        self.pos += 1;
        b
    }

    /// Scaled position of the code point inside the current interval.
    /// The caller maps it to a symbol and then calls [`Self::commit`].
    #[inline]
    pub fn decode_target(&self, total: u32) -> Result<u32> {
        let r = self.range / total as u64;
        let dv = self.code.wrapping_sub(self.low) / r;
        if dv >= total as u64 {
            return Err(EntropyError::Corrupt("code point outside model range".into()));
        }
        Ok(dv as u32)
    }

    /// Mirrors [`RangeEncoder::encode`] for the selected symbol.
    #[inline]
    pub fn commit(&mut self, cum: u32, freq: u32, total: u32) {
        let r = self.range / total as u64;
        self.low += cum as u64 * r;
        self.range = freq as u64 * r;
        self.normalize();
    }

    /// A well-formed stream never makes the decoder read more than 4
    /// positions past its payload (the flush tail); anything beyond means
    /// the stream was cut short.
    #[inline]
    fn check_overrun(&self) -> Result<()> {
        if self.pos > self.input.len() + 4 {
            return Err(EntropyError::Truncated);
        }
        Ok(())
    }

    pub fn decode_symbol(&mut self, table: &CdfTable) -> Result<u32> {
        let dv = self.decode_target(TOTAL)?;
        let s = table.lookup(dv);
        self.commit(table.cum(s), table.freq(s), TOTAL);
        self.check_overrun()?;
        Ok(s as u32)
    }

    pub fn decode_bit_raw(&mut self) -> Result<bool> {
        let dv = self.decode_target(TOTAL)?;
        let bit = dv >= HALF;
        self.commit(if bit { HALF } else { 0 }, HALF, TOTAL);
        self.check_overrun()?;
        Ok(bit)
    }

    pub fn decode_raw_bits(&mut self, bits: u32) -> Result<u64> {
        let mut v = 0u64;
        for _ in 0..bits {
            v = (v << 1) | self.decode_bit_raw()? as u64;
        }
        Ok(v)
    }

    #[inline]
    fn normalize(&mut self) {
        loop {
            if (self.low ^ self.low.wrapping_add(self.range)) < TOP {
            } else if self.range < BOT {
                self.range = BOT - (self.low & BOT_MASK);
            } else {
                break;
            }
            self.low = self.low.wrapping_shl(8);
            self.range <<= 8;
            self.code = (self.code << 8) | self.next_byte() as u64;
        }
    }

    /// Bytes of real input consumed so far (padding reads excluded).
    pub fn consumed(&self) -> usize {
        self.pos.min(self.input.len())
    }
}

/// Encodes `symbols[i]` with `tables[table_idx[i]]`.
pub fn rc_encode_indexed(
    symbols: &[u32],
    table_idx: &[usize],
    tables: &[CdfTable],
) -> Result<Bitstream> {
    assert_eq!(symbols.len(), table_idx.len());
    let mut enc = RangeEncoder::new();
    for (&s, &ti) in symbols.iter().zip(table_idx) {
        enc.encode_symbol(&tables[ti], s)?;
    }
    Ok(Bitstream::from_bytes(enc.finish()))
}

pub fn rc_decode_indexed(
    stream: &Bitstream,
    table_idx: &[usize],
    tables: &[CdfTable],
) -> Result<Vec<u32>> {
    let mut dec = RangeDecoder::new(&stream.bytes);
    let mut out = Vec::with_capacity(table_idx.len());
    for &ti in table_idx {
        out.push(dec.decode_symbol(&tables[ti])?);
    }
    Ok(out)
}

/// Encodes every symbol with the same table.
pub fn rc_encode(symbols: &[u32], table: &CdfTable) -> Result<Bitstream> {
    let mut enc = RangeEncoder::new();
    for &s in symbols {
        enc.encode_symbol(table, s)?;
    }
    Ok(Bitstream::from_bytes(enc.finish()))
}

pub fn rc_decode(stream: &Bitstream, table: &CdfTable, n: usize) -> Result<Vec<u32>> {
    let mut dec = RangeDecoder::new(&stream.bytes);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(dec.decode_symbol(table)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sequence_is_header_only() {
        let t = CdfTable::from_pmf(&[0.5, 0.5]).unwrap();
        let s = rc_encode(&[], &t).unwrap();
        assert_eq!(s.bytes.len(), 4);
        assert_eq!(rc_decode(&s, &t, 0).unwrap(), Vec::<u32>::new());
    }

    #[test]
    fn simple_round_trip() {
        let t = CdfTable::from_pmf(&[0.7, 0.2, 0.1]).unwrap();
        let syms = vec![0, 1, 2, 0, 0, 1, 0, 2, 2, 1, 0, 0, 0];
        let s = rc_encode(&syms, &t).unwrap();
        assert_eq!(rc_decode(&s, &t, syms.len()).unwrap(), syms);
    }

    #[test]
    fn uniform_256_table_codes_near_one_byte_per_symbol() {
        let t = CdfTable::from_pmf(&vec![1.0 / 256.0; 256]).unwrap();
        let syms: Vec<u32> = (0..1000u32).map(|i| (i * 2654435761) % 256).collect();
        let s = rc_encode(&syms, &t).unwrap();
        assert!(
            (1000..=1006).contains(&s.bytes.len()),
            "coded length {} bytes",
            s.bytes.len()
        );
        assert_eq!(rc_decode(&s, &t, syms.len()).unwrap(), syms);
    }

    #[test]
    fn out_of_range_symbol_is_an_encode_error() {
        let t = CdfTable::from_pmf(&[0.5, 0.5]).unwrap();
        assert!(matches!(
            rc_encode(&[2], &t),
            Err(EntropyError::SymbolOutOfRange { .. })
        ));
    }

    #[test]
    fn truncated_stream_errors_or_differs() {
        // a skewed table makes the decoder visit the clamp path; cutting the
        // stream must never silently return the original symbols
        let t = CdfTable::from_pmf(&[0.95, 0.04, 0.01]).unwrap();
        let syms: Vec<u32> = (0..200u32).map(|i| [0, 0, 0, 0, 1, 0, 0, 2][i as usize % 8]).collect();
        let full = rc_encode(&syms, &t).unwrap();
        let cut = Bitstream::from_bytes(full.bytes[..full.bytes.len() / 2].to_vec());
        match rc_decode(&cut, &t, syms.len()) {
            Ok(decoded) => assert_ne!(decoded, syms),
            Err(_) => {}
        }
    }

    #[test]
    fn raw_bits_round_trip() {
        let mut enc = RangeEncoder::new();
        enc.encode_raw_bits(0xDEADBEEF, 32);
        enc.encode_raw_bits(0x5, 3);
        let bytes = enc.finish();
        let mut dec = RangeDecoder::new(&bytes);
        assert_eq!(dec.decode_raw_bits(32).unwrap(), 0xDEADBEEF);
        assert_eq!(dec.decode_raw_bits(3).unwrap(), 0x5);
    }

    #[test]
    fn per_symbol_tables_round_trip() {
        let tables = vec![
            CdfTable::from_pmf(&[0.9, 0.1]).unwrap(),
            CdfTable::from_pmf(&[0.1, 0.2, 0.7]).unwrap(),
            CdfTable::from_pmf(&vec![1.0 / 17.0; 17]).unwrap(),
        ];
        let idx: Vec<usize> = (0..500).map(|i| i % 3).collect();
        let syms: Vec<u32> = idx
            .iter()
            .enumerate()
            .map(|(i, &t)| (i as u32 * 7919) % tables[t].num_symbols() as u32)
            .collect();
        let s = rc_encode_indexed(&syms, &idx, &tables).unwrap();
        assert_eq!(rc_decode_indexed(&s, &idx, &tables).unwrap(), syms);
    }
}
