//! Key-agreement engine: bit-exchange rounds, permutation transmission of
//! codewords, decoding, eavesdropping detection and key finalization.

mod channel;
mod detection;
mod experiment;
mod keys;
mod party;
mod permutation;
mod session;
mod toeplitz;
mod transcript;

pub use channel::{Channel, ChannelMode};
pub use detection::{detect_eavesdropping, Detection, ErrorObservation, DEFAULT_ACCEPTANCE};
pub use experiment::{derive_seed, run_experiment, run_seeded, seeded_config, seeded_rng, ExperimentReport};
pub use keys::{finalize_keys, PrivacyAmplification};
pub use party::{setup_party, CodewordTarget, PartyState};
pub use permutation::{
    build_permutation, build_permutation_scripted, decode_and_verify, recover_codeword, PermutationMessage, Verified,
};
pub use session::{
    execute_round, run_session, run_session_observed, CodewordReport, RetryPolicy, SessionConfig, SessionStats,
    SessionStatus, DEFAULT_ROUND_CAP_FACTOR,
};
pub use toeplitz::{toeplitz_extract, ToeplitzSpec};
pub use transcript::{JsonLinesTranscript, RoundRecord, SessionObserver, StoredSet};

use thiserror::Error;

use crate::coding::CodingError;
use crate::quantum::{Party, QuantumError};

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Coding(#[from] CodingError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error("seed length {n} is not a multiple of the message length {k}")]
    SeedNotDivisible { n: usize, k: usize },
    #[error("{party:?} needs {needed} indices of bit {bit} but holds {available}")]
    InsufficientIndices {
        party: Party,
        bit: u8,
        needed: usize,
        available: usize,
    },
    #[error("scripted draw {index} is not an unused index of bit {bit}")]
    BadScriptedDraw { index: usize, bit: u8 },
    #[error("round {0} is missing from the received table")]
    Desync(usize),
    #[error("no codeword observations to estimate compliance from")]
    NoObservations,
    #[error("key components must have equal even length, got {left} and {right}")]
    OddKeyLength { left: usize, right: usize },
    #[error("Toeplitz seed must have {expected} bits, got {actual}")]
    ToeplitzSeed { expected: usize, actual: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("transcript write failed: {0}")]
    Io(#[from] std::io::Error),
}
