use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use thiserror::Error;

/// Result code of every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CnsqkdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// The configuration or code description was rejected.
    ValidationFailed = 3,
    /// The caller's buffer is shorter than the result; the required length was written.
    BufferTooSmall = 4,
    Runtime = 5,
    Panic = 6,
}

#[derive(Debug, Error)]
pub(crate) enum FfiError {
    #[error("{0} is null")]
    NullPointer(&'static str),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("{0}")]
    Validation(String),
    #[error("buffer holds {capacity} bits, {required} needed")]
    BufferTooSmall { required: usize, capacity: usize },
    #[error("{0}")]
    Runtime(String),
}

impl FfiError {
    fn status(&self) -> CnsqkdStatus {
        match self {
            FfiError::NullPointer(_) => CnsqkdStatus::NullPointer,
            FfiError::InvalidArgument(_) => CnsqkdStatus::InvalidArgument,
            FfiError::Validation(_) => CnsqkdStatus::ValidationFailed,
            FfiError::BufferTooSmall { .. } => CnsqkdStatus::BufferTooSmall,
            FfiError::Runtime(_) => CnsqkdStatus::Runtime,
        }
    }
}

impl From<cnsqkd::protocol::ProtocolError> for FfiError {
    fn from(e: cnsqkd::protocol::ProtocolError) -> Self {
        use cnsqkd::protocol::ProtocolError as P;
        match e {
            P::Config(_) | P::SeedNotDivisible { .. } | P::OddKeyLength { .. } => FfiError::Validation(e.to_string()),
            P::ToeplitzSeed { .. } => FfiError::InvalidArgument(e.to_string()),
            other => FfiError::Runtime(other.to_string()),
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

/// Message of the last failed call on this thread, or null after a
/// successful call. The pointer stays valid until the next call on the
/// same thread and must not be freed.
#[no_mangle]
pub extern "C" fn cnsqkd_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

pub(crate) fn guard<F: FnOnce() -> Result<(), FfiError>>(f: F) -> CnsqkdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            clear_last_error();
            CnsqkdStatus::Ok
        }
        Ok(Err(e)) => {
            let status = e.status();
            set_last_error(e.to_string());
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {message}"));
            CnsqkdStatus::Panic
        }
    }
}
