//! Bit-exact range coding over integer symbols with explicit CDF tables.
//!
//! This is the shared coding back-end for both codecs in the workspace.
//! All coder arithmetic is fixed-width integer only; the same bytes decode
//! to the same symbols on every platform.

pub mod adaptive;
pub mod cdf;
pub mod container;
pub mod range;

pub use adaptive::AdaptiveModel;
pub use cdf::CdfTable;
pub use container::{Container, CODEC_CLASSIC, CODEC_LEARNED};
pub use range::{
    rc_decode, rc_decode_indexed, rc_encode, rc_encode_indexed, RangeDecoder, RangeEncoder,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EntropyError {
    #[error("all-zero pmf")]
    AllZeroPmf,
    #[error("invalid pmf: {0}")]
    InvalidPmf(String),
    #[error("too many symbols: {0} exceeds table precision")]
    TooManySymbols(usize),
    #[error("symbol {symbol} out of range for {alphabet}-symbol table")]
    SymbolOutOfRange { symbol: u32, alphabet: usize },
    #[error("corrupt stream: {0}")]
    Corrupt(String),
    #[error("truncated stream")]
    Truncated,
    #[error("not a TCB1 container")]
    BadMagic,
}

pub type Result<T> = std::result::Result<T, EntropyError>;

/// A coded payload: raw bytes plus the exact bit length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitstream {
    pub bytes: Vec<u8>,
    pub bit_len: u64,
}

impl Bitstream {
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        let bit_len = bytes.len() as u64 * 8;
        Self { bytes, bit_len }
    }
}
