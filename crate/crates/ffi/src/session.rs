use std::ffi::c_char;

use cnsqkd::protocol::{run_experiment, run_seeded, ChannelMode, PrivacyAmplification, RetryPolicy, SessionConfig, SessionStatus};

use crate::analysis::process_kind;
use crate::error::{guard, CnsqkdStatus, FfiError};
use crate::{out_ref, read_str, write_string};

/// Opaque session configuration.
pub struct CnsqkdSessionConfig(SessionConfig);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CnsqkdMode {
    /// 1990 raw seed bits per party, decoded against the sender's word.
    Ideal = 0,
    /// 264 seed bits per party in majority-voted BCH(31,11) blocks.
    Concatenated = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CnsqkdSessionStatus {
    Ok = 0,
    Timeout = 1,
    CodewordFailure = 2,
    Rejected = 3,
    KeyMismatch = 4,
}

impl From<SessionStatus> for CnsqkdSessionStatus {
    fn from(s: SessionStatus) -> Self {
        match s {
            SessionStatus::Ok => Self::Ok,
            SessionStatus::Timeout => Self::Timeout,
            SessionStatus::CodewordFailure => Self::CodewordFailure,
            SessionStatus::Rejected => Self::Rejected,
            SessionStatus::KeyMismatch => Self::KeyMismatch,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CnsqkdSessionSummary {
    pub status: CnsqkdSessionStatus,
    pub success: bool,
    pub rounds: usize,
    pub min_rounds: usize,
    pub overhead: i64,
    pub bit_overhead_alice: usize,
    pub bit_overhead_bob: usize,
    /// NaN when nothing was observed.
    pub compliance: f64,
    pub eavesdropping_detected: bool,
    /// Bits in each final key component, 0 without keys.
    pub key_len: usize,
}

/// Statistics over successful trials are NaN when there are none.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CnsqkdExperimentSummary {
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub stddev: f64,
    pub mean_overhead: f64,
    pub timeouts: usize,
    pub rejected: usize,
    pub codeword_failures: usize,
    pub key_mismatches: usize,
}

unsafe fn config_mut<'a>(config: *mut CnsqkdSessionConfig) -> Result<&'a mut SessionConfig, FfiError> {
    config.as_mut().map(|c| &mut c.0).ok_or(FfiError::NullPointer("config"))
}

unsafe fn config_ref<'a>(config: *const CnsqkdSessionConfig) -> Result<&'a SessionConfig, FfiError> {
    config.as_ref().map(|c| &c.0).ok_or(FfiError::NullPointer("config"))
}

fn boxed(config: SessionConfig) -> *mut CnsqkdSessionConfig {
    Box::into_raw(Box::new(CnsqkdSessionConfig(config)))
}

/// Default configuration for `mode` over a BSC with crossover `p`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cnsqkd_session_config_new(mode: i32, p: f64, out: *mut *mut CnsqkdSessionConfig) -> CnsqkdStatus {
    guard(|| {
        let slot = out_ref(out, "out")?;
        let config = match mode {
            0 => SessionConfig::ideal(p),
            1 => SessionConfig::concatenated(p),
            _ => return Err(FfiError::InvalidArgument(format!("unknown mode {mode}"))),
        };
        config.validate()?;
        *slot = boxed(config);
        Ok(())
    })
}

/// Parses a configuration in the JSON form produced by [`cnsqkd_session_config_to_json`].
///
/// # Safety
/// `json` must be nul-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn cnsqkd_session_config_from_json(json: *const c_char, out: *mut *mut CnsqkdSessionConfig) -> CnsqkdStatus {
    guard(|| {
        let slot = out_ref(out, "out")?;
        let config: SessionConfig =
            serde_json::from_str(read_str(json, "json")?).map_err(|e| FfiError::Validation(e.to_string()))?;
        config.validate()?;
        *slot = boxed(config);
        Ok(())
    })
}

/// # Safety
/// Both pointers must be valid. Free the string with `cnsqkd_string_free`.
#[no_mangle]
pub unsafe extern "C" fn cnsqkd_session_config_to_json(config: *const CnsqkdSessionConfig, out: *mut *mut c_char) -> CnsqkdStatus {
    guard(|| {
        let json = serde_json::to_string(config_ref(config)?).map_err(|e| FfiError::Runtime(e.to_string()))?;
        write_string(json, out)
    })
}

/// # Safety
/// `config` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cnsqkd_session_config_free(config: *mut CnsqkdSessionConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Applies `edit` and keeps the old value if the result does not validate.
unsafe fn update(config: *mut CnsqkdSessionConfig, edit: impl FnOnce(&mut SessionConfig)) -> Result<(), FfiError> {
    let config = config_mut(config)?;
    let mut next = config.clone();
    edit(&mut next);
    next.validate()?;
    *config = next;
    Ok(())
}

/// # Safety
/// `config` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn cnsqkd_session_config_set_q0(config: *mut CnsqkdSessionConfig, q0: f64) -> CnsqkdStatus {
    guard(|| update(config, |c| c.q0 = q0))
}

/// # Safety
/// `config` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn cnsqkd_session_config_set_bsc(config: *mut CnsqkdSessionConfig, p: f64) -> CnsqkdStatus {
    guard(|| update(config, |c| c.channel = ChannelMode::Bsc { p }))
}

/// Samples every round from `process` (a [`crate::CnsqkdProcess`] value).
///
/// # Safety
/// `config` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn cnsqkd_session_config_set_quantum(config: *mut CnsqkdSessionConfig, process: i32) -> CnsqkdStatus {
    guard(|| {
        let process = process_kind(process)?;
        update(config, |c| c.channel = ChannelMode::ExactQuantum { process })
    })
}

/// Output bits per key component; 0 disables privacy amplification.
///
/// # Safety
/// `config` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn cnsqkd_session_config_set_privacy_amplification(
    config: *mut CnsqkdSessionConfig,
    out_len: usize,
) -> CnsqkdStatus {
    guard(|| {
        let pa = if out_len == 0 {
            PrivacyAmplification::disabled()
        } else {
            PrivacyAmplification::to(out_len)
        };
        update(config, |c| c.privacy_amplification = pa)
    })
}

/// Retransmit uncorrectable codewords instead of aborting.
///
/// # Safety
/// `config` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn cnsqkd_session_config_set_retransmit(config: *mut CnsqkdSessionConfig, retransmit: bool) -> CnsqkdStatus {
    guard(|| {
        update(config, |c| {
            c.retry = if retransmit { RetryPolicy::Retransmit } else { RetryPolicy::Abort }
        })
    })
}

/// Runs one session from `seed`, with the same derivation as an experiment trial.
///
/// # Safety
/// Both pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cnsqkd_run_session(
    config: *const CnsqkdSessionConfig,
    seed: u64,
    out: *mut CnsqkdSessionSummary,
) -> CnsqkdStatus {
    guard(|| {
        let config = config_ref(config)?;
        let slot = out_ref(out, "out")?;
        let s = run_seeded(config, seed)?;
        *slot = CnsqkdSessionSummary {
            status: s.status.into(),
            success: s.success,
            rounds: s.rounds,
            min_rounds: s.min_rounds,
            overhead: s.overhead,
            bit_overhead_alice: s.bit_overhead[0],
            bit_overhead_bob: s.bit_overhead[1],
            compliance: s.compliance.unwrap_or(f64::NAN),
            eavesdropping_detected: s.eavesdropping_detected,
            key_len: s.key0.as_ref().map_or(0, |k| k.len()),
        };
        Ok(())
    })
}

/// Full session statistics, keys and per-codeword reports included, as JSON.
///
/// # Safety
/// Both pointers must be valid. Free the string with `cnsqkd_string_free`.
#[no_mangle]
pub unsafe extern "C" fn cnsqkd_run_session_json(
    config: *const CnsqkdSessionConfig,
    seed: u64,
    out: *mut *mut c_char,
) -> CnsqkdStatus {
    guard(|| {
        let stats = run_seeded(config_ref(config)?, seed)?;
        write_string(serde_json::to_string(&stats).map_err(|e| FfiError::Runtime(e.to_string()))?, out)
    })
}

/// Runs `trials` sessions in parallel, trial `t` seeded from `(master, t)`.
///
/// # Safety
/// Both pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cnsqkd_run_experiment(
    config: *const CnsqkdSessionConfig,
    trials: usize,
    master: u64,
    out: *mut CnsqkdExperimentSummary,
) -> CnsqkdStatus {
    guard(|| {
        let config = config_ref(config)?;
        let slot = out_ref(out, "out")?;
        let r = run_experiment(trials, config, master)?;
        let nan = |v: Option<f64>| v.unwrap_or(f64::NAN);
        *slot = CnsqkdExperimentSummary {
            trials: r.trials,
            successes: r.successes,
            success_rate: nan(r.success_rate),
            min: nan(r.min.map(|m| m as f64)),
            max: nan(r.max.map(|m| m as f64)),
            mean: nan(r.mean),
            stddev: nan(r.stddev),
            mean_overhead: nan(r.mean_overhead),
            timeouts: r.timeouts,
            rejected: r.rejected,
            codeword_failures: r.codeword_failures,
            key_mismatches: r.key_mismatches,
        };
        Ok(())
    })
}
