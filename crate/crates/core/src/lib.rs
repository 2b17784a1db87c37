//! Key agreement over a causally non-separable process.
//!
//! * [`quantum`]: process matrices, local instruments, the causal game and
//!   exact sampling of a single bit-exchange round.
//! * [`coding`]: the binary symmetric channel model, BCH and majority-vote
//!   codecs, and finite-blocklength calculators.
//! * [`protocol`]: the key-agreement engine (rounds, permutation transfer,
//!   decoding, eavesdropping detection, Toeplitz privacy amplification).
//! * [`cli`]: configuration, experiments and reporting behind the `cnsqkd` binary.

pub mod cli;
pub mod coding;
pub mod protocol;
pub mod quantum;
