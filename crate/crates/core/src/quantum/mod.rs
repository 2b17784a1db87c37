//! Process matrices, local instruments and the causal guessing game.

mod fixture;
mod game;
mod instrument;
mod operator;
mod process;

pub use fixture::{operator_fixture, InstrumentFixture, OperatorFixture, ProcessFixture};
pub use game::{
    game_success_probability, round_distribution, sample_round, RoundDistribution, RoundInputs, RoundOutcome,
    RoundSampler,
};
pub use instrument::{alice_instrument, bob_instrument, trace_preservation_residual, InstrumentElement, Party};
pub use operator::{link_product, qubits, Label, LabeledOperator, OperatorRecord, Subsystem};
pub use process::{
    comb_alice_first, comb_bob_first, lv_project, make_wcns, validate_comb, validate_process_matrix, white_noise,
    CausalOrder, CombReport, ProcessKind, ProcessMatrix, ValidationReport, DEFAULT_TOLERANCE,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("unknown subsystem label {0}")]
    UnknownLabel(String),
    #[error("subsystem {0} appears twice")]
    DuplicateLabel(Label),
    #[error("subsystem {0} has dimension zero")]
    ZeroDimension(Label),
    #[error("matrix is {rows}x{cols}, expected side {expected}")]
    ShapeMismatch { expected: usize, rows: usize, cols: usize },
    #[error("operands live on different subsystems")]
    SubsystemMismatch,
    #[error("shared subsystem {label} has dimension {left} on the left and {right} on the right")]
    LinkDimensionMismatch { label: Label, left: usize, right: usize },
    #[error("operator must live on A_I, A_O, B_I, B_O")]
    NotBipartite,
    #[error("not a valid process matrix: {0}")]
    InvalidProcess(String),
    #[error("malformed operator record: {0}")]
    Record(String),
}
