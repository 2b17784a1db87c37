use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::operator::{qubits, Label, LabeledOperator, Subsystem};
use super::QuantumError;

/// Absolute tolerance for residual norms and the PSD check.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

const BIPARTITE: [Label; 4] = [Label::AliceIn, Label::AliceOut, Label::BobIn, Label::BobOut];

fn pauli_x() -> DMatrix<Complex64> {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    DMatrix::from_row_slice(2, 2, &[o, l, l, o])
}

fn pauli_z() -> DMatrix<Complex64> {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    DMatrix::from_row_slice(2, 2, &[l, o, o, -l])
}

fn check_bipartite(w: &LabeledOperator) -> Result<(), QuantumError> {
    if w.labels() != BIPARTITE {
        return Err(QuantumError::NotBipartite);
    }
    Ok(())
}

fn dim_of(w: &LabeledOperator, label: Label) -> usize {
    w.subsystem(label).map_or(1, |s| s.dim)
}

/// Projector onto the linear span of valid process matrices.
pub fn lv_project(w: &LabeledOperator) -> Result<LabeledOperator, QuantumError> {
    use Label::*;
    check_bipartite(w)?;
    let ce = |t: &[Label]| w.conditional_expectation(t);
    let plus = [
        ce(&[AliceOut])?,
        ce(&[BobOut])?,
        ce(&[AliceOut, BobIn, BobOut])?,
        ce(&[AliceIn, AliceOut, BobOut])?,
    ];
    let minus = [
        ce(&[AliceOut, BobOut])?,
        ce(&[BobIn, BobOut])?,
        ce(&[AliceIn, AliceOut])?,
    ];
    let mut acc = LabeledOperator::zeros(w.subsystems().to_vec())?;
    for term in &plus {
        acc = acc.checked_add(term)?;
    }
    for term in &minus {
        acc = acc.checked_sub(term)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub hermiticity_residual: f64,
    pub min_eigenvalue: f64,
    pub projection_residual: f64,
    pub trace_residual: f64,
    pub tolerance: f64,
}

impl ValidationReport {
    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_residual < self.tolerance
    }
    pub fn is_positive(&self) -> bool {
        self.min_eigenvalue >= -self.tolerance
    }
    pub fn is_projection_fixed_point(&self) -> bool {
        self.projection_residual < self.tolerance
    }
    pub fn has_valid_trace(&self) -> bool {
        self.trace_residual < self.tolerance
    }
    pub fn passed(&self) -> bool {
        self.is_hermitian() && self.is_positive() && self.is_projection_fixed_point() && self.has_valid_trace()
    }
}

/// Residuals for positivity, the projector fixed point and the trace condition.
/// An operator on the wrong subsystems is reported as failing every condition.
pub fn validate_process_matrix(w: &LabeledOperator, tol: f64) -> ValidationReport {
    let hermiticity_residual = w.hermiticity_residual();
    let min_eigenvalue = w.min_eigenvalue();
    let Ok(projected) = lv_project(w) else {
        return ValidationReport {
            hermiticity_residual,
            min_eigenvalue,
            projection_residual: f64::INFINITY,
            trace_residual: f64::INFINITY,
            tolerance: tol,
        };
    };
    let projection_residual = w.distance(&projected).unwrap_or(f64::INFINITY);
    let expected = (dim_of(w, Label::AliceOut) * dim_of(w, Label::BobOut)) as f64;
    let trace_residual = (w.trace() - Complex64::new(expected, 0.0)).norm();
    ValidationReport {
        hermiticity_residual,
        min_eigenvalue,
        projection_residual,
        trace_residual,
        tolerance: tol,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CausalOrder {
    AliceFirst,
    BobFirst,
}

#[derive(Clone, Debug, Serialize)]
pub struct CombReport {
    pub order: CausalOrder,
    /// `W` against `W' ⊗ 1` on the last party's output.
    pub last_output_residual: f64,
    /// `tr_{second input} W'` against `W'' ⊗ 1` on the first party's output.
    pub first_output_residual: f64,
    pub tolerance: f64,
}

impl CombReport {
    pub fn passed(&self) -> bool {
        self.last_output_residual < self.tolerance && self.first_output_residual < self.tolerance
    }
}

pub fn validate_comb(w: &LabeledOperator, order: CausalOrder, tol: f64) -> Result<CombReport, QuantumError> {
    check_bipartite(w)?;
    let (first_out, second_in, second_out) = match order {
        CausalOrder::AliceFirst => (Label::AliceOut, Label::BobIn, Label::BobOut),
        CausalOrder::BobFirst => (Label::BobOut, Label::AliceIn, Label::AliceOut),
    };
    let last_output_residual = w.distance(&w.conditional_expectation(&[second_out])?)?;
    let reduced = w
        .partial_trace(&[second_out])?
        .scaled(1.0 / dim_of(w, second_out) as f64);
    let marginal = reduced.partial_trace(&[second_in])?;
    let first_output_residual = marginal.distance(&marginal.conditional_expectation(&[first_out])?)?;
    Ok(CombReport {
        order,
        last_output_residual,
        first_output_residual,
        tolerance: tol,
    })
}

/// A validated bipartite process matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ProcessMatrix {
    operator: LabeledOperator,
}

impl ProcessMatrix {
    pub fn new(operator: LabeledOperator, tol: f64) -> Result<Self, QuantumError> {
        check_bipartite(&operator)?;
        let report = validate_process_matrix(&operator, tol);
        if !report.passed() {
            return Err(QuantumError::InvalidProcess(format!(
                "hermiticity {:.3e}, min eigenvalue {:.3e}, projection {:.3e}, trace {:.3e}",
                report.hermiticity_residual,
                report.min_eigenvalue,
                report.projection_residual,
                report.trace_residual
            )));
        }
        Ok(Self { operator })
    }

    pub fn operator(&self) -> &LabeledOperator {
        &self.operator
    }

    /// The process seen by the parties when Bob's input is measured in the
    /// computational basis and resent before reaching him.
    pub fn with_bob_input_dephased(&self) -> Result<Self, QuantumError> {
        let subsystems = self.operator.subsystems().to_vec();
        let mut acc = LabeledOperator::zeros(subsystems.clone())?;
        for k in 0..2 {
            let mut proj = DMatrix::<Complex64>::zeros(2, 2);
            proj[(k, k)] = Complex64::new(1.0, 0.0);
            let p = LabeledOperator::from_local_factors(&subsystems, &[(Label::BobIn, proj)])?;
            acc = acc.checked_add(&p.checked_mul(&self.operator)?.checked_mul(&p)?)?;
        }
        Self::new(acc, DEFAULT_TOLERANCE)
    }
}

fn bipartite_qubits() -> Vec<Subsystem> {
    qubits(&BIPARTITE)
}

/// The causally non-separable process
/// `¼[1 + (σz^{A_O} σz^{B_I} + σz^{A_I} σx^{B_I} σz^{B_O}) / √2]`.
pub fn make_wcns() -> ProcessMatrix {
    let subs = bipartite_qubits();
    let build = || -> Result<LabeledOperator, QuantumError> {
        let id = LabeledOperator::identity(subs.clone())?;
        let first = LabeledOperator::from_local_factors(
            &subs,
            &[(Label::AliceOut, pauli_z()), (Label::BobIn, pauli_z())],
        )?;
        let second = LabeledOperator::from_local_factors(
            &subs,
            &[
                (Label::AliceIn, pauli_z()),
                (Label::BobIn, pauli_x()),
                (Label::BobOut, pauli_z()),
            ],
        )?;
        Ok(id
            .checked_add(&first.checked_add(&second)?.scaled(FRAC_1_SQRT_2))?
            .scaled(0.25))
    };
    let op = build().expect("fixed construction on canonical qubits");
    ProcessMatrix::new(op, DEFAULT_TOLERANCE).expect("W_CNS is a valid process matrix")
}

/// `1/4` on all four qubits: no correlations at all.
pub fn white_noise() -> ProcessMatrix {
    let op = LabeledOperator::identity(bipartite_qubits())
        .expect("canonical qubits")
        .scaled(0.25);
    ProcessMatrix::new(op, DEFAULT_TOLERANCE).expect("white noise is a valid process matrix")
}

/// Unnormalized Choi operator of the identity channel between two qubits.
fn identity_channel(from: Label, to: Label) -> LabeledOperator {
    let mut phi = DMatrix::<Complex64>::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            phi[(i * 2 + i, j * 2 + j)] = Complex64::new(1.0, 0.0);
        }
    }
    LabeledOperator::new(qubits(&[from, to]), phi).expect("two qubits")
}

/// Comb `A ≺ B`: maximally mixed state into `A_I`, `A_O` wired to `B_I`,
/// `B_O` discarded.
pub fn comb_alice_first() -> ProcessMatrix {
    identity_comb(Label::AliceIn, Label::AliceOut, Label::BobIn, Label::BobOut)
}

/// Comb `B ≺ A`: maximally mixed state into `B_I`, `B_O` wired to `A_I`,
/// `A_O` discarded.
pub fn comb_bob_first() -> ProcessMatrix {
    identity_comb(Label::BobIn, Label::BobOut, Label::AliceIn, Label::AliceOut)
}

fn identity_comb(first_in: Label, first_out: Label, second_in: Label, second_out: Label) -> ProcessMatrix {
    let rho = LabeledOperator::identity(qubits(&[first_in]))
        .expect("qubit")
        .scaled(0.5);
    let op = rho
        .tensor(&identity_channel(first_out, second_in))
        .and_then(|w| w.tensor(&LabeledOperator::identity(qubits(&[second_out]))?))
        .expect("disjoint qubits");
    ProcessMatrix::new(op, DEFAULT_TOLERANCE).expect("identity comb is a valid process matrix")
}

/// Named processes available to configuration and the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProcessKind {
    Wcns,
    WhiteNoise,
    CombAB,
    CombBA,
    /// `W^CNS` with Bob's input measured and resent in the Z basis.
    WcnsIntercepted,
}

impl ProcessKind {
    pub const ALL: [ProcessKind; 5] = [
        ProcessKind::Wcns,
        ProcessKind::WhiteNoise,
        ProcessKind::CombAB,
        ProcessKind::CombBA,
        ProcessKind::WcnsIntercepted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProcessKind::Wcns => "wcns",
            ProcessKind::WhiteNoise => "white-noise",
            ProcessKind::CombAB => "comb-a-b",
            ProcessKind::CombBA => "comb-b-a",
            ProcessKind::WcnsIntercepted => "wcns-intercepted",
        }
    }

    pub fn build(self) -> ProcessMatrix {
        match self {
            ProcessKind::Wcns => make_wcns(),
            ProcessKind::WhiteNoise => white_noise(),
            ProcessKind::CombAB => comb_alice_first(),
            ProcessKind::CombBA => comb_bob_first(),
            ProcessKind::WcnsIntercepted => make_wcns()
                .with_bob_input_dephased()
                .expect("dephasing keeps a valid process"),
        }
    }
}

impl std::fmt::Display for ProcessKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ProcessKind {
    type Err = QuantumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| QuantumError::UnknownLabel(s.to_string()))
    }
}
