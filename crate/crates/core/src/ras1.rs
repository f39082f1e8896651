//! RAS1 on-disk container: a minimal little-endian raster format.
//!
//! Layout: magic "RAS1" | u32 height | u32 width | u32 channels |
//! u32 dtype tag | payload. Tag 0 stores row-major f32 samples, tag 1
//! stores one byte per mask label.

use crate::{CoreError, Mask, Raster, Result};
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: &[u8; 4] = b"RAS1";
const DTYPE_F32: u32 = 0;
const DTYPE_MASK: u32 = 1;

pub fn write_raster(path: &Path, raster: &Raster) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(&encode_raster(raster)?)?;
    Ok(())
}

pub fn read_raster(path: &Path) -> Result<Raster> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    decode_raster(&bytes)
}

pub fn write_mask(path: &Path, mask: &Mask) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(&encode_mask(mask))?;
    Ok(())
}

pub fn read_mask(path: &Path) -> Result<Mask> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    decode_mask(&bytes)
}

pub fn encode_raster(raster: &Raster) -> Result<Vec<u8>> {
    let (h, w, c) = dims_to_u32(raster.height, raster.width, raster.channels)?;
    let mut out = Vec::with_capacity(20 + raster.data.len() * 4);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&h.to_le_bytes());
    out.extend_from_slice(&w.to_le_bytes());
    out.extend_from_slice(&c.to_le_bytes());
    out.extend_from_slice(&DTYPE_F32.to_le_bytes());
    for v in &raster.data {
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

pub fn decode_raster(bytes: &[u8]) -> Result<Raster> {
    let (h, w, c, dtype, payload) = parse_header(bytes)?;
    if dtype != DTYPE_F32 {
        return Err(CoreError::BadDtype(dtype));
    }
    let n = checked_len(h, w, c)?;
    if payload.len() < n * 4 {
        return Err(CoreError::Truncated);
    }
    let mut data = Vec::with_capacity(n);
    for i in 0..n {
        let mut b = [0u8; 4];
        b.copy_from_slice(&payload[i * 4..i * 4 + 4]);
        data.push(f32::from_le_bytes(b));
    }
    Raster::new(h as usize, w as usize, c as usize, data)
}

pub fn encode_mask(mask: &Mask) -> Vec<u8> {
    let mut out = Vec::with_capacity(20 + mask.labels.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(mask.height as u32).to_le_bytes());
    out.extend_from_slice(&(mask.width as u32).to_le_bytes());
    out.extend_from_slice(&1u32.to_le_bytes());
    out.extend_from_slice(&DTYPE_MASK.to_le_bytes());
    out.extend_from_slice(&mask.labels);
    out
}

pub fn decode_mask(bytes: &[u8]) -> Result<Mask> {
    let (h, w, c, dtype, payload) = parse_header(bytes)?;
    if dtype != DTYPE_MASK {
        return Err(CoreError::BadDtype(dtype));
    }
    let n = checked_len(h, w, c)?;
    if payload.len() < n {
        return Err(CoreError::Truncated);
    }
    Mask::new(h as usize, w as usize, payload[..n].to_vec())
}

fn parse_header(bytes: &[u8]) -> Result<(u32, u32, u32, u32, &[u8])> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(CoreError::BadMagic);
    }
    if bytes.len() < 20 {
        return Err(CoreError::Truncated);
    }
    let rd = |i: usize| {
        let mut b = [0u8; 4];
        b.copy_from_slice(&bytes[i..i + 4]);
        u32::from_le_bytes(b)
    };
    Ok((rd(4), rd(8), rd(12), rd(16), &bytes[20..]))
}

fn checked_len(h: u32, w: u32, c: u32) -> Result<usize> {
    (h as usize)
        .checked_mul(w as usize)
        .and_then(|v| v.checked_mul(c as usize))
        .filter(|&v| v > 0 && v <= u32::MAX as usize)
        .ok_or(CoreError::DimOverflow(h, w, c))
}

fn dims_to_u32(h: usize, w: usize, c: usize) -> Result<(u32, u32, u32)> {
    let conv = |v: usize| u32::try_from(v).map_err(|_| CoreError::DimOverflow(0, 0, 0));
    Ok((conv(h)?, conv(w)?, conv(c)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let r = Raster::new(2, 3, 2, (0..12).map(|i| i as f32 * 0.37 - 1.0).collect()).unwrap();
        let back = decode_raster(&encode_raster(&r).unwrap()).unwrap();
        for (a, b) in r.data.iter().zip(&back.data) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn wrong_magic_errors() {
        let mut bytes = encode_raster(&Raster::zeros(1, 1, 1)).unwrap();
        bytes[0] = b'X';
        assert!(matches!(decode_raster(&bytes), Err(CoreError::BadMagic)));
    }

    #[test]
    fn truncated_payload_errors() {
        // header says 2x2x1 but only 3 floats present
        let r = Raster::zeros(2, 2, 1);
        let mut bytes = encode_raster(&r).unwrap();
        bytes.truncate(20 + 3 * 4);
        assert!(matches!(decode_raster(&bytes), Err(CoreError::Truncated)));
    }

    #[test]
    fn dim_overflow_errors() {
        let mut bytes = encode_raster(&Raster::zeros(1, 1, 1)).unwrap();
        bytes[4..8].copy_from_slice(&u32::MAX.to_le_bytes());
        bytes[8..12].copy_from_slice(&u32::MAX.to_le_bytes());
        assert!(matches!(
            decode_raster(&bytes),
            Err(CoreError::DimOverflow(..))
        ));
    }

    #[test]
    fn mask_round_trip() {
        let m = Mask::new(2, 2, vec![1, 0, 0, 1]).unwrap();
        let back = decode_mask(&encode_mask(&m)).unwrap();
        assert_eq!(m, back);
    }

    proptest! {
        #[test]
        fn prop_round_trip(h in 1usize..6, w in 1usize..6, c in 1usize..4,
                           seed in any::<u64>()) {
            let n = h * w * c;
            let mut state = seed;
            let data: Vec<f32> = (0..n).map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                f32::from_bits((state >> 32) as u32 & 0x7f7fffff) // finite values
            }).collect();
            let r = Raster::new(h, w, c, data).unwrap();
            let back = decode_raster(&encode_raster(&r).unwrap()).unwrap();
            for (a, b) in r.data.iter().zip(&back.data) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }
}
