//! TCB1 compressed container shared by both codecs.
//!
//! Layout (little-endian): magic "TCB1" | u8 codec id | u32 height |
//! u32 width | u32 channels | u32 param block length | param block |
//! range-coded payload (to end of stream).

use crate::{EntropyError, Result};

pub const CODEC_CLASSIC: u8 = 0;
pub const CODEC_LEARNED: u8 = 1;

const MAGIC: &[u8; 4] = b"TCB1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Container {
    pub codec_id: u8,
    pub height: u32,
    pub width: u32,
    pub channels: u32,
    pub params: Vec<u8>,
    pub payload: Vec<u8>,
}

impl Container {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(21 + self.params.len() + self.payload.len());
        out.extend_from_slice(MAGIC);
        out.push(self.codec_id);
        out.extend_from_slice(&self.height.to_le_bytes());
        out.extend_from_slice(&self.width.to_le_bytes());
        out.extend_from_slice(&self.channels.to_le_bytes());
        out.extend_from_slice(&(self.params.len() as u32).to_le_bytes());
        out.extend_from_slice(&self.params);
        out.extend_from_slice(&self.payload);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 4 || &bytes[..4] != MAGIC {
            return Err(EntropyError::BadMagic);
        }
        if bytes.len() < 21 {
            return Err(EntropyError::Truncated);
        }
        let rd = |i: usize| {
            let mut b = [0u8; 4];
            b.copy_from_slice(&bytes[i..i + 4]);
            u32::from_le_bytes(b)
        };
        let codec_id = bytes[4];
        let (height, width, channels) = (rd(5), rd(9), rd(13));
        let param_len = rd(17) as usize;
        if bytes.len() < 21 + param_len {
            return Err(EntropyError::Truncated);
        }
        Ok(Self {
            codec_id,
            height,
            width,
            channels,
            params: bytes[21..21 + param_len].to_vec(),
            payload: bytes[21 + param_len..].to_vec(),
        })
    }
}
