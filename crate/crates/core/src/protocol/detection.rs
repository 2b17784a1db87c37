use serde::Serialize;

use super::ProtocolError;

/// Default acceptance level for the observed Alice-Bob compliance.
pub const DEFAULT_ACCEPTANCE: f64 = 0.8334;

/// Bit errors seen on one decoded codeword.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorObservation {
    pub errors: usize,
    pub bits: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "decision", rename_all = "lowercase")]
pub enum Detection {
    Accept { compliance: f64 },
    Reject { compliance: f64 },
}

impl Detection {
    pub fn accepted(&self) -> bool {
        matches!(self, Detection::Accept { .. })
    }

    pub fn compliance(&self) -> f64 {
        match *self {
            Detection::Accept { compliance } | Detection::Reject { compliance } => compliance,
        }
    }
}

/// Accepts when `1 - errors/bits` over all observations is at least `q0`.
pub fn detect_eavesdropping(observations: &[ErrorObservation], q0: f64) -> Result<Detection, ProtocolError> {
    let bits: usize = observations.iter().map(|o| o.bits).sum();
    if bits == 0 {
        return Err(ProtocolError::NoObservations);
    }
    let errors: usize = observations.iter().map(|o| o.errors).sum();
    let compliance = 1.0 - errors as f64 / bits as f64;
    Ok(if compliance >= q0 {
        Detection::Accept { compliance }
    } else {
        Detection::Reject { compliance }
    })
}
