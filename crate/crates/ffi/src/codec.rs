use std::ffi::c_char;

use cnsqkd::coding::{Codec, CodecSpec, DecodeStatus};

use crate::error::{guard, CnsqkdStatus, FfiError};
use crate::{out_ref, read_bits, read_str, write_bits};

/// Opaque block code.
pub struct CnsqkdCodec(Codec);

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CnsqkdCodeParams {
    /// Codeword length.
    pub n: usize,
    /// Message length.
    pub k: usize,
    /// Guaranteed correction radius.
    pub t: usize,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CnsqkdDecodeInfo {
    pub corrected_errors: usize,
    /// False when the word lies outside every decoding sphere.
    pub correctable: bool,
}

/// Builds a codec from `ideal:N`, `bch:N:K[:systematic|polynomial]`,
/// `mvc-bch:N:K[...]` or `concatenated`.
///
/// # Safety
/// `spec` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cnsqkd_codec_new(spec: *const c_char, out: *mut *mut CnsqkdCodec) -> CnsqkdStatus {
    guard(|| {
        let slot = out_ref(out, "out")?;
        let spec: CodecSpec = read_str(spec, "spec")?.parse().map_err(|e: cnsqkd::coding::CodingError| FfiError::Validation(e.to_string()))?;
        let codec = spec.build().map_err(|e| FfiError::Validation(e.to_string()))?;
        *slot = Box::into_raw(Box::new(CnsqkdCodec(codec)));
        Ok(())
    })
}

/// # Safety
/// `codec` must come from [`cnsqkd_codec_new`] and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cnsqkd_codec_free(codec: *mut CnsqkdCodec) {
    if !codec.is_null() {
        drop(Box::from_raw(codec));
    }
}

/// # Safety
/// Both pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cnsqkd_codec_params(codec: *const CnsqkdCodec, out: *mut CnsqkdCodeParams) -> CnsqkdStatus {
    guard(|| {
        let codec = codec.as_ref().ok_or(FfiError::NullPointer("codec"))?;
        let p = codec.0.params();
        *out_ref(out, "out")? = CnsqkdCodeParams { n: p.n, k: p.k, t: p.t };
        Ok(())
    })
}

/// Encodes `message_len` (= K) bits into `out`, which holds `out_capacity` bytes.
///
/// # Safety
/// `message` must hold `message_len` bytes, `out` `out_capacity` bytes.
#[no_mangle]
pub unsafe extern "C" fn cnsqkd_codec_encode(
    codec: *const CnsqkdCodec,
    message: *const u8,
    message_len: usize,
    out: *mut u8,
    out_capacity: usize,
    out_len: *mut usize,
) -> CnsqkdStatus {
    guard(|| {
        let codec = codec.as_ref().ok_or(FfiError::NullPointer("codec"))?;
        let message = read_bits(message, message_len, "message")?;
        let word = codec.0.encode(&message).map_err(|e| FfiError::InvalidArgument(e.to_string()))?;
        write_bits(&word, out, out_capacity, out_len)
    })
}

/// Decodes `word_len` (= N) bits. An uncorrectable word still yields a
/// message and reports `correctable = false`.
///
/// # Safety
/// `word` must hold `word_len` bytes, `out` `out_capacity` bytes; `info` may be null.
#[no_mangle]
pub unsafe extern "C" fn cnsqkd_codec_decode(
    codec: *const CnsqkdCodec,
    word: *const u8,
    word_len: usize,
    out: *mut u8,
    out_capacity: usize,
    out_len: *mut usize,
    info: *mut CnsqkdDecodeInfo,
) -> CnsqkdStatus {
    guard(|| {
        let codec = codec.as_ref().ok_or(FfiError::NullPointer("codec"))?;
        let word = read_bits(word, word_len, "word")?;
        let result = codec.0.decode(&word).map_err(|e| FfiError::InvalidArgument(e.to_string()))?;
        write_bits(&result.message, out, out_capacity, out_len)?;
        if let Some(info) = info.as_mut() {
            *info = CnsqkdDecodeInfo {
                corrected_errors: result.corrected_errors,
                correctable: result.status == DecodeStatus::Ok,
            };
        }
        Ok(())
    })
}
