use nalgebra::DMatrix;
use num_complex::Complex64;

use super::operator::{qubits, Label, LabeledOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    pub fn other(self) -> Party {
        match self {
            Party::Alice => Party::Bob,
            Party::Bob => Party::Alice,
        }
    }
}

/// One outcome of a local instrument, as a positive operator on the
/// party's input ⊗ output qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct InstrumentElement {
    pub party: Party,
    /// Classical settings: `[a]` for Alice, `[b, b']` for Bob.
    pub inputs: Vec<u8>,
    pub outcome: u8,
    pub operator: LabeledOperator,
}

fn projector(vector: [f64; 2]) -> DMatrix<Complex64> {
    DMatrix::from_fn(2, 2, |r, c| Complex64::new(vector[r] * vector[c], 0.0))
}

fn z_state(bit: u8) -> [f64; 2] {
    if bit == 0 {
        [1.0, 0.0]
    } else {
        [0.0, 1.0]
    }
}

fn x_state(bit: u8) -> [f64; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    if bit == 0 {
        [h, h]
    } else {
        [h, -h]
    }
}

/// Measure `input` with effect `effect`, then prepare `state` on `output`.
///
/// The Choi operator of `ρ ↦ tr(Eρ) σ` is `Eᵀ ⊗ σ`; the process-matrix
/// convention stores its transpose, `E ⊗ σᵀ`.
fn measure_prepare(input: Label, effect: DMatrix<Complex64>, output: Label, state: DMatrix<Complex64>) -> LabeledOperator {
    LabeledOperator::from_local_factors(&qubits(&[input, output]), &[(input, effect), (output, state.transpose())])
        .expect("two distinct qubits")
}

/// Alice measures `A_I` in the Z basis (outcome `x`) and prepares `|a⟩` on `A_O`.
pub fn alice_instrument(a: u8) -> [InstrumentElement; 2] {
    [0u8, 1].map(|x| InstrumentElement {
        party: Party::Alice,
        inputs: vec![a],
        outcome: x,
        operator: measure_prepare(
            Label::AliceIn,
            projector(z_state(x)),
            Label::AliceOut,
            projector(z_state(a)),
        ),
    })
}

/// Bob measures `B_I` in the Z basis when `b' = 1` and in the X basis when
/// `b' = 0` (outcome `y`), then prepares `|z⟩` on `B_O` with `z = (1-b')y ⊕ b`.
pub fn bob_instrument(b: u8, b_prime: u8) -> [InstrumentElement; 2] {
    [0u8, 1].map(|y| {
        let effect = if b_prime == 1 { z_state(y) } else { x_state(y) };
        let z = ((1 - b_prime) * y) ^ b;
        InstrumentElement {
            party: Party::Bob,
            inputs: vec![b, b_prime],
            outcome: y,
            operator: measure_prepare(Label::BobIn, projector(effect), Label::BobOut, projector(z_state(z))),
        }
    })
}

impl InstrumentElement {
    pub fn input_label(&self) -> Label {
        match self.party {
            Party::Alice => Label::AliceIn,
            Party::Bob => Label::BobIn,
        }
    }

    pub fn output_label(&self) -> Label {
        match self.party {
            Party::Alice => Label::AliceOut,
            Party::Bob => Label::BobOut,
        }
    }
}

/// Distance between `Σ_outcomes tr_out(element)` and the identity on the
/// input; zero for a trace-preserving instrument.
pub fn trace_preservation_residual(family: &[InstrumentElement]) -> f64 {
    let Some(first) = family.first() else {
        return f64::INFINITY;
    };
    let input = first.input_label();
    let mut sum = LabeledOperator::zeros(qubits(&[input])).expect("qubit");
    for e in family {
        let reduced = e.operator.partial_trace(&[e.output_label()]).expect("output present");
        sum = sum.checked_add(&reduced).expect("same input space");
    }
    let id = LabeledOperator::identity(qubits(&[input])).expect("qubit");
    sum.distance(&id).expect("same space")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alice_family_is_trace_preserving() {
        for a in 0..2 {
            assert!(trace_preservation_residual(&alice_instrument(a)) < 1e-14);
        }
    }

    #[test]
    fn bob_family_is_trace_preserving() {
        for b in 0..2 {
            for bp in 0..2 {
                assert!(trace_preservation_residual(&bob_instrument(b, bp)) < 1e-14);
            }
        }
    }

    #[test]
    fn elements_are_rank_one_and_positive() {
        for b in 0..2 {
            for bp in 0..2 {
                for e in bob_instrument(b, bp) {
                    let eig = e.operator.hermitian_eigenvalues();
                    assert!(eig[0] > -1e-14);
                    let nonzero = eig.iter().filter(|v| v.abs() > 1e-12).count();
                    assert_eq!(nonzero, 1);
                    assert!((eig[3] - 1.0).abs() < 1e-12);
                }
            }
        }
        for e in alice_instrument(1) {
            assert!(e.operator.min_eigenvalue() > -1e-14);
        }
    }

    #[test]
    fn bob_prepares_announced_bit() {
        // b' = 0, b = 1, y = 1 -> z = 0, so B_O holds |0><0|
        let e = &bob_instrument(1, 0)[1];
        let out = e.operator.partial_trace(&[Label::BobIn]).unwrap();
        assert!((out.matrix()[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!(out.matrix()[(1, 1)].norm() < 1e-14);
    }
}
