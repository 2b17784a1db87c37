//! Channel model, block codes and finite-blocklength calculators.

mod bch;
mod bits;
mod bsc;
mod codec;
mod concat;
mod fbl;
mod mvc;

pub use bch::{smallest_primitive_polynomial, BchCode, BchEncoding};
pub use bits::BitString;
pub use bsc::{bsc_controlled, bsc_transmit, BscParams};
pub use codec::{Codec, CodecSpec};
pub use concat::{concat_decode, concat_encode, ConcatDecodeResult, ConcatenatedCode, MajorityBch, KEY_BLOCKS};
pub use fbl::{
    binary_entropy, block_success_probability, channel_capacity, channel_dispersion, extractable_key_length,
    fbl_report, gaussian_q, gaussian_q_inv, ppv_max_payload, secrecy_capacity, FblInputs, FblReport,
};
pub use mvc::{mvc_decode, mvc_effective_ber, mvc_encode};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CodingError {
    #[error("{name} = {value} is out of range")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("{0} must be positive")]
    ZeroLength(&'static str),
    #[error("expected {expected} bits, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("value {0} is not a bit")]
    NotABit(u8),
    #[error("character {0:?} is not a bit")]
    ParseBits(char),
    #[error("unsupported code: {0}")]
    UnsupportedCode(String),
}

/// `(N, K, t)`: codeword length, message length, guaranteed correction radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub t: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecodeStatus {
    Ok,
    Uncorrectable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecodeResult {
    pub message: BitString,
    pub corrected_errors: usize,
    pub status: DecodeStatus,
}
