use std::ffi::c_char;

use cnsqkd::coding::{fbl_report, FblInputs};
use cnsqkd::protocol::{toeplitz_extract, ToeplitzSpec};
use cnsqkd::quantum::{game_success_probability, operator_fixture, ProcessKind};

use crate::error::{guard, CnsqkdStatus, FfiError};
use crate::{out_ref, read_bits, write_bits, write_string};

/// Named process matrices. Functions take these as `int32_t`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CnsqkdProcess {
    Wcns = 0,
    WhiteNoise = 1,
    CombAB = 2,
    CombBA = 3,
    WcnsIntercepted = 4,
}

pub(crate) fn process_kind(code: i32) -> Result<ProcessKind, FfiError> {
    usize::try_from(code)
        .ok()
        .and_then(|i| ProcessKind::ALL.get(i).copied())
        .ok_or_else(|| FfiError::InvalidArgument(format!("unknown process {code}")))
}

/// Code lengths and channel parameters for the finite-blocklength estimates.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CnsqkdFblInputs {
    pub n: u64,
    pub epsilon: f64,
    pub delta: f64,
    pub p: f64,
    pub p_eve: f64,
    pub k: u64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CnsqkdFblReport {
    pub capacity: f64,
    pub dispersion: f64,
    pub payload: f64,
    pub secrecy_capacity: f64,
    pub eve_dispersion: f64,
    pub key_length: f64,
}

/// Success probability of the causal game for `process`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cnsqkd_game_success(process: i32, out: *mut f64) -> CnsqkdStatus {
    guard(|| {
        let slot = out_ref(out, "out")?;
        *slot = game_success_probability(&process_kind(process)?.build());
        Ok(())
    })
}

/// # Safety
/// Both pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cnsqkd_fbl(inputs: *const CnsqkdFblInputs, out: *mut CnsqkdFblReport) -> CnsqkdStatus {
    guard(|| {
        let i = inputs.as_ref().ok_or(FfiError::NullPointer("inputs"))?;
        let slot = out_ref(out, "out")?;
        let inputs = FblInputs {
            n: i.n,
            epsilon: i.epsilon,
            delta: i.delta,
            p: i.p,
            p_eve: i.p_eve,
            k: i.k,
        };
        let r = fbl_report(&inputs).map_err(|e| FfiError::InvalidArgument(e.to_string()))?;
        *slot = CnsqkdFblReport {
            capacity: r.capacity,
            dispersion: r.dispersion,
            payload: r.payload,
            secrecy_capacity: r.secrecy_capacity,
            eve_dispersion: r.eve_dispersion,
            key_length: r.key_length,
        };
        Ok(())
    })
}

/// Multiplies `input` by the Toeplitz matrix whose diagonals are `seed`
/// (`out_len + input_len - 1` bits) and writes `out_len` bits.
///
/// # Safety
/// Each buffer must hold the stated number of bytes.
#[no_mangle]
pub unsafe extern "C" fn cnsqkd_toeplitz_extract(
    seed: *const u8,
    seed_len: usize,
    input: *const u8,
    input_len: usize,
    out_len: usize,
    out: *mut u8,
    out_capacity: usize,
    written: *mut usize,
) -> CnsqkdStatus {
    guard(|| {
        let seed = read_bits(seed, seed_len, "seed")?;
        let input = read_bits(input, input_len, "input")?;
        let spec = ToeplitzSpec::new(out_len, input_len, seed)?;
        let key = toeplitz_extract(&spec, &input)?;
        write_bits(&key, out, out_capacity, written)
    })
}

/// JSON export of every named process and local instrument operator.
///
/// # Safety
/// `out` must be a valid pointer. Free the string with `cnsqkd_string_free`.
#[no_mangle]
pub unsafe extern "C" fn cnsqkd_export_fixture_json(out: *mut *mut c_char) -> CnsqkdStatus {
    guard(|| {
        let json = serde_json::to_string(&operator_fixture()).map_err(|e| FfiError::Runtime(e.to_string()))?;
        write_string(json, out)
    })
}
