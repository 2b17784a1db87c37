use serde::{Deserialize, Serialize};

use super::game::game_success_probability;
use super::instrument::{alice_instrument, bob_instrument, Party};
use super::operator::OperatorRecord;
use super::process::{ProcessKind, DEFAULT_TOLERANCE};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProcessFixture {
    pub name: String,
    pub game_value: f64,
    pub operator: OperatorRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstrumentFixture {
    pub party: Party,
    /// `[a]` for Alice, `[b, b']` for Bob.
    pub inputs: Vec<u8>,
    pub outcome: u8,
    pub operator: OperatorRecord,
}

/// Every named process and every instrument element, for external tools
/// that must reproduce the same probabilities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorFixture {
    /// Probabilities are `tr[W (A ⊗ B)]` with matrices row-major and the
    /// first listed subsystem most significant.
    pub convention: String,
    pub tolerance: f64,
    pub processes: Vec<ProcessFixture>,
    pub instruments: Vec<InstrumentFixture>,
}

pub fn operator_fixture() -> OperatorFixture {
    let processes = ProcessKind::ALL
        .iter()
        .map(|&kind| {
            let w = kind.build();
            ProcessFixture {
                name: kind.name().to_string(),
                game_value: game_success_probability(&w),
                operator: w.operator().to_record(),
            }
        })
        .collect();
    let alice = (0..2u8).flat_map(alice_instrument);
    let bob = (0..2u8).flat_map(|b| (0..2u8).flat_map(move |bp| bob_instrument(b, bp)));
    let instruments = alice
        .chain(bob)
        .map(|e| InstrumentFixture {
            party: e.party,
            inputs: e.inputs,
            outcome: e.outcome,
            operator: e.operator.to_record(),
        })
        .collect();
    OperatorFixture {
        convention: "p = tr[W (A_{a,x} ⊗ B_{b,b',y})], instrument element = effect ⊗ state^T on input ⊗ output, \
                     row-major, first subsystem most significant"
            .to_string(),
        tolerance: DEFAULT_TOLERANCE,
        processes,
        instruments,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::LabeledOperator;

    #[test]
    fn fixture_reproduces_game_value() {
        let f = operator_fixture();
        assert_eq!(f.processes.len(), 5);
        assert_eq!(f.instruments.len(), 4 + 8);
        let json = serde_json::to_string(&f).unwrap();
        let back: OperatorFixture = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);

        let w = LabeledOperator::from_record(&back.processes[0].operator).unwrap();
        let find = |party: Party, inputs: &[u8], outcome: u8| {
            let e = back
                .instruments
                .iter()
                .find(|e| e.party == party && e.inputs == inputs && e.outcome == outcome)
                .unwrap();
            LabeledOperator::from_record(&e.operator).unwrap()
        };
        // P(y = a | b' = 1) from the exported operators alone
        let (a, b) = (1u8, 0u8);
        let mut p = 0.0;
        for x in 0..2 {
            let joint = find(Party::Alice, &[a], x).tensor(&find(Party::Bob, &[b, 1], a)).unwrap();
            p += w.checked_mul(&joint).unwrap().trace().re;
        }
        assert!((p - (2.0 + 2f64.sqrt()) / 4.0).abs() < 1e-12);
    }
}
