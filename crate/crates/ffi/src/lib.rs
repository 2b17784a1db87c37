//! C ABI over `cnsqkd`.
//!
//! Every fallible function returns a [`CnsqkdStatus`] and writes results
//! through out-pointers. On failure [`cnsqkd_last_error`] describes the
//! problem. Bit strings cross the boundary as `uint8_t` arrays holding 0 or 1.
//! Strings returned by the library are released with [`cnsqkd_string_free`],
//! handles with their matching `_free` function.

mod analysis;
mod codec;
mod error;
mod session;

use std::ffi::{c_char, CStr, CString};

pub use analysis::*;
pub use codec::*;
pub use error::{cnsqkd_last_error, CnsqkdStatus};
pub use session::*;

use cnsqkd::coding::BitString;
use error::FfiError;

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cnsqkd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

pub(crate) unsafe fn out_ref<'a, T>(ptr: *mut T, name: &'static str) -> Result<&'a mut T, FfiError> {
    ptr.as_mut().ok_or(FfiError::NullPointer(name))
}

pub(crate) unsafe fn read_str<'a>(ptr: *const c_char, name: &'static str) -> Result<&'a str, FfiError> {
    if ptr.is_null() {
        return Err(FfiError::NullPointer(name));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| FfiError::InvalidArgument(format!("{name} is not UTF-8")))
}

pub(crate) unsafe fn read_bits(ptr: *const u8, len: usize, name: &'static str) -> Result<BitString, FfiError> {
    if len == 0 {
        return Ok(BitString::new());
    }
    if ptr.is_null() {
        return Err(FfiError::NullPointer(name));
    }
    BitString::from_bits(std::slice::from_raw_parts(ptr, len)).map_err(|e| FfiError::InvalidArgument(format!("{name}: {e}")))
}

/// Writes `bits` into a caller buffer of `capacity` bytes and stores the
/// length. Too small a buffer leaves it untouched but still stores the length.
pub(crate) unsafe fn write_bits(bits: &BitString, out: *mut u8, capacity: usize, out_len: *mut usize) -> Result<(), FfiError> {
    *out_ref(out_len, "out_len")? = bits.len();
    if bits.len() > capacity {
        return Err(FfiError::BufferTooSmall {
            required: bits.len(),
            capacity,
        });
    }
    if bits.is_empty() {
        return Ok(());
    }
    if out.is_null() {
        return Err(FfiError::NullPointer("out"));
    }
    std::ptr::copy_nonoverlapping(bits.bits().as_ptr(), out, bits.len());
    Ok(())
}

pub(crate) unsafe fn write_string(s: String, out: *mut *mut c_char) -> Result<(), FfiError> {
    let slot = out_ref(out, "out")?;
    *slot = CString::new(s)
        .map_err(|e| FfiError::Runtime(e.to_string()))?
        .into_raw();
    Ok(())
}
