//! Dense complex operators carrying a labelled tensor factorization.
//!
//! Every operator stores its subsystems in canonical order
//! (`A_I`, `A_O`, `B_I`, `B_O`, `E`). The first subsystem is the most
//! significant digit of the row/column index, matching the usual Kronecker
//! product layout.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::QuantumError;

/// Name of a subsystem. The derived ordering is the canonical ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    AliceIn,
    AliceOut,
    BobIn,
    BobOut,
    Eve,
}

impl Label {
    pub const ALL: [Label; 5] = [
        Label::AliceIn,
        Label::AliceOut,
        Label::BobIn,
        Label::BobOut,
        Label::Eve,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::AliceIn => "A_I",
            Label::AliceOut => "A_O",
            Label::BobIn => "B_I",
            Label::BobOut => "B_O",
            Label::Eve => "E",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = QuantumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Label::ALL
            .iter()
            .copied()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| QuantumError::UnknownLabel(s.to_string()))
    }
}

/// A labelled tensor factor together with its Hilbert-space dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Subsystem {
    pub label: Label,
    pub dim: usize,
}

impl Subsystem {
    pub fn new(label: Label, dim: usize) -> Self {
        Self { label, dim }
    }

    pub fn qubit(label: Label) -> Self {
        Self { label, dim: 2 }
    }
}

/// Shorthand for a list of qubit subsystems.
pub fn qubits(labels: &[Label]) -> Vec<Subsystem> {
    labels.iter().copied().map(Subsystem::qubit).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledOperator {
    subsystems: Vec<Subsystem>,
    matrix: DMatrix<Complex64>,
}

/// JSON-friendly form: row-major real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorRecord {
    pub labels: Vec<String>,
    pub dims: Vec<usize>,
    pub real: Vec<f64>,
    pub imag: Vec<f64>,
}

fn total_dim(subsystems: &[Subsystem]) -> usize {
    subsystems.iter().map(|s| s.dim).product()
}

/// Splits a flat index into per-subsystem digits (first subsystem most significant).
fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
}

fn flatten(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&d, &n)| acc * n + d)
}

impl LabeledOperator {
    /// Builds an operator from subsystems in any order; the result is permuted
    /// into canonical order.
    pub fn new(subsystems: Vec<Subsystem>, matrix: DMatrix<Complex64>) -> Result<Self, QuantumError> {
        let mut seen = BTreeSet::new();
        for s in &subsystems {
            if s.dim == 0 {
                return Err(QuantumError::ZeroDimension(s.label));
            }
            if !seen.insert(s.label) {
                return Err(QuantumError::DuplicateLabel(s.label));
            }
        }
        let side = total_dim(&subsystems);
        if matrix.nrows() != side || matrix.ncols() != side {
            return Err(QuantumError::ShapeMismatch {
                expected: side,
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let op = Self { subsystems, matrix };
        let mut canonical = op.subsystems.clone();
        canonical.sort_by_key(|s| s.label);
        Ok(op.reordered(&canonical))
    }

    pub fn identity(subsystems: Vec<Subsystem>) -> Result<Self, QuantumError> {
        let d = total_dim(&subsystems);
        Self::new(subsystems, DMatrix::identity(d, d))
    }

    pub fn zeros(subsystems: Vec<Subsystem>) -> Result<Self, QuantumError> {
        let d = total_dim(&subsystems);
        Self::new(subsystems, DMatrix::zeros(d, d))
    }

    /// A 1x1 operator on no subsystems.
    pub fn scalar(value: Complex64) -> Self {
        Self {
            subsystems: Vec::new(),
            matrix: DMatrix::from_element(1, 1, value),
        }
    }

    /// Tensor product of local factors, padded with identity on every
    /// subsystem in `subsystems` that has no factor.
    pub fn from_local_factors(
        subsystems: &[Subsystem],
        factors: &[(Label, DMatrix<Complex64>)],
    ) -> Result<Self, QuantumError> {
        let mut ordered = subsystems.to_vec();
        ordered.sort_by_key(|s| s.label);
        for (label, _) in factors {
            if !ordered.iter().any(|s| s.label == *label) {
                return Err(QuantumError::UnknownLabel(label.to_string()));
            }
        }
        let mut matrix = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        for s in &ordered {
            let local = match factors.iter().find(|(l, _)| *l == s.label) {
                Some((_, m)) => {
                    if m.nrows() != s.dim || m.ncols() != s.dim {
                        return Err(QuantumError::ShapeMismatch {
                            expected: s.dim,
                            rows: m.nrows(),
                            cols: m.ncols(),
                        });
                    }
                    m.clone()
                }
                None => DMatrix::identity(s.dim, s.dim),
            };
            matrix = matrix.kronecker(&local);
        }
        Self::new(ordered, matrix)
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn labels(&self) -> Vec<Label> {
        self.subsystems.iter().map(|s| s.label).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.subsystems.iter().map(|s| s.dim).collect()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn subsystem(&self, label: Label) -> Option<Subsystem> {
        self.subsystems.iter().copied().find(|s| s.label == label)
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            subsystems: self.subsystems.clone(),
            matrix: self.matrix.scale(factor),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            subsystems: self.subsystems.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    fn same_space(&self, other: &Self) -> Result<(), QuantumError> {
        if self.subsystems != other.subsystems {
            return Err(QuantumError::SubsystemMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, QuantumError> {
        self.same_space(other)?;
        Ok(Self {
            subsystems: self.subsystems.clone(),
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, QuantumError> {
        self.same_space(other)?;
        Ok(Self {
            subsystems: self.subsystems.clone(),
            matrix: &self.matrix - &other.matrix,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, QuantumError> {
        self.same_space(other)?;
        Ok(Self {
            subsystems: self.subsystems.clone(),
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// Frobenius norm of `self - other`.
    pub fn distance(&self, other: &Self) -> Result<f64, QuantumError> {
        self.same_space(other)?;
        Ok((&self.matrix - &other.matrix).norm())
    }

    pub fn hermiticity_residual(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).norm()
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let h = (&self.matrix + self.matrix.adjoint()).scale(0.5);
        let mut eig: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        eig.sort_by(|a, b| a.total_cmp(b));
        eig
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.hermitian_eigenvalues()
            .first()
            .copied()
            .unwrap_or(f64::NAN)
    }

    fn check_targets(&self, targets: &[Label]) -> Result<(), QuantumError> {
        for t in targets {
            if self.subsystem(*t).is_none() {
                return Err(QuantumError::UnknownLabel(t.to_string()));
            }
        }
        Ok(())
    }

    /// Permutes the tensor factors into `order`, which must be a permutation
    /// of the current subsystems.
    fn reordered(&self, order: &[Subsystem]) -> Self {
        if order == self.subsystems.as_slice() {
            return self.clone();
        }
        let old_dims = self.dims();
        let new_dims: Vec<usize> = order.iter().map(|s| s.dim).collect();
        // position in old layout of each new factor
        let source: Vec<usize> = order
            .iter()
            .map(|s| {
                self.subsystems
                    .iter()
                    .position(|o| o.label == s.label)
                    .expect("reorder target must be a permutation")
            })
            .collect();
        let d = self.dim();
        let map_index = |new_index: usize, new_digits: &mut [usize], old_digits: &mut [usize]| {
            digits(new_index, &new_dims, new_digits);
            for (k, &src) in source.iter().enumerate() {
                old_digits[src] = new_digits[k];
            }
            flatten(old_digits, &old_dims)
        };
        let n = order.len();
        let (mut nd, mut od) = (vec![0; n], vec![0; n]);
        let old_of_new: Vec<usize> = (0..d).map(|i| map_index(i, &mut nd, &mut od)).collect();
        let matrix = DMatrix::from_fn(d, d, |r, c| self.matrix[(old_of_new[r], old_of_new[c])]);
        Self {
            subsystems: order.to_vec(),
            matrix,
        }
    }

    /// Traces out `targets`; the result lives on the remaining subsystems.
    pub fn partial_trace(&self, targets: &[Label]) -> Result<Self, QuantumError> {
        self.check_targets(targets)?;
        let dims = self.dims();
        let traced: Vec<bool> = self
            .subsystems
            .iter()
            .map(|s| targets.contains(&s.label))
            .collect();
        let keep: Vec<Subsystem> = self
            .subsystems
            .iter()
            .zip(&traced)
            .filter(|(_, &t)| !t)
            .map(|(s, _)| *s)
            .collect();
        let keep_dims: Vec<usize> = keep.iter().map(|s| s.dim).collect();
        let gone_dims: Vec<usize> = self
            .subsystems
            .iter()
            .zip(&traced)
            .filter(|(_, &t)| t)
            .map(|(s, _)| s.dim)
            .collect();

        let d = self.dim();
        let mut dig = vec![0; dims.len()];
        let split: Vec<(usize, usize)> = (0..d)
            .map(|i| {
                digits(i, &dims, &mut dig);
                let k: Vec<usize> = dig.iter().zip(&traced).filter(|(_, &t)| !t).map(|(&x, _)| x).collect();
                let g: Vec<usize> = dig.iter().zip(&traced).filter(|(_, &t)| t).map(|(&x, _)| x).collect();
                (flatten(&k, &keep_dims), flatten(&g, &gone_dims))
            })
            .collect();

        let kd = total_dim(&keep);
        let mut out = DMatrix::zeros(kd, kd);
        for r in 0..d {
            for c in 0..d {
                if split[r].1 == split[c].1 {
                    out[(split[r].0, split[c].0)] += self.matrix[(r, c)];
                }
            }
        }
        Ok(Self {
            subsystems: keep,
            matrix: out,
        })
    }

    /// Transposes the tensor factors in `targets` only.
    pub fn partial_transpose(&self, targets: &[Label]) -> Result<Self, QuantumError> {
        self.check_targets(targets)?;
        let dims = self.dims();
        let flip: Vec<bool> = self
            .subsystems
            .iter()
            .map(|s| targets.contains(&s.label))
            .collect();
        let n = dims.len();
        let d = self.dim();
        let (mut rd, mut cd) = (vec![0; n], vec![0; n]);
        let matrix = DMatrix::from_fn(d, d, |r, c| {
            digits(r, &dims, &mut rd);
            digits(c, &dims, &mut cd);
            for k in 0..n {
                if flip[k] {
                    std::mem::swap(&mut rd[k], &mut cd[k]);
                }
            }
            self.matrix[(flatten(&rd, &dims), flatten(&cd, &dims))]
        });
        Ok(Self {
            subsystems: self.subsystems.clone(),
            matrix,
        })
    }

    /// Kronecker product; subsystem sets must be disjoint.
    pub fn tensor(&self, other: &Self) -> Result<Self, QuantumError> {
        for s in &other.subsystems {
            if self.subsystem(s.label).is_some() {
                return Err(QuantumError::DuplicateLabel(s.label));
            }
        }
        let mut subsystems = self.subsystems.clone();
        subsystems.extend_from_slice(&other.subsystems);
        Self::new(subsystems, self.matrix.kronecker(&other.matrix))
    }

    /// Pads with identity on each subsystem in `extra` that is not already present.
    pub fn extended(&self, extra: &[Subsystem]) -> Result<Self, QuantumError> {
        let missing: Vec<Subsystem> = extra
            .iter()
            .copied()
            .filter(|s| self.subsystem(s.label).is_none())
            .collect();
        if missing.is_empty() {
            return Ok(self.clone());
        }
        self.tensor(&Self::identity(missing)?)
    }

    /// `(1_X / dim X) ⊗ tr_X(self)` re-embedded at the original positions.
    pub fn conditional_expectation(&self, targets: &[Label]) -> Result<Self, QuantumError> {
        self.check_targets(targets)?;
        let traced: Vec<Subsystem> = self
            .subsystems
            .iter()
            .copied()
            .filter(|s| targets.contains(&s.label))
            .collect();
        let d = total_dim(&traced) as f64;
        let reduced = self.partial_trace(targets)?;
        Self::identity(traced)?.scaled(1.0 / d).tensor(&reduced)
    }

    pub fn to_record(&self) -> OperatorRecord {
        let d = self.dim();
        let mut real = Vec::with_capacity(d * d);
        let mut imag = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                real.push(self.matrix[(r, c)].re);
                imag.push(self.matrix[(r, c)].im);
            }
        }
        OperatorRecord {
            labels: self.labels().iter().map(|l| l.to_string()).collect(),
            dims: self.dims(),
            real,
            imag,
        }
    }

    pub fn from_record(record: &OperatorRecord) -> Result<Self, QuantumError> {
        if record.labels.len() != record.dims.len() {
            return Err(QuantumError::Record("labels and dims differ in length".into()));
        }
        let subsystems = record
            .labels
            .iter()
            .zip(&record.dims)
            .map(|(l, &d)| Ok(Subsystem::new(l.parse()?, d)))
            .collect::<Result<Vec<_>, QuantumError>>()?;
        let d = total_dim(&subsystems);
        if record.real.len() != d * d || record.imag.len() != d * d {
            return Err(QuantumError::Record(format!(
                "expected {} entries, got {} real and {} imaginary",
                d * d,
                record.real.len(),
                record.imag.len()
            )));
        }
        let matrix = DMatrix::from_fn(d, d, |r, c| Complex64::new(record.real[r * d + c], record.imag[r * d + c]));
        Self::new(subsystems, matrix)
    }
}

/// Link product `tr_Z[(1 ⊗ B^{T_Z}) (A ⊗ 1)]` over the shared subsystems `Z`.
///
/// The result lives on the union of the non-shared subsystems of both operands.
/// Non-shared labels must not appear in both operands.
pub fn link_product(a: &LabeledOperator, b: &LabeledOperator, shared: &[Label]) -> Result<LabeledOperator, QuantumError> {
    for label in shared {
        let sa = a.subsystem(*label).ok_or_else(|| QuantumError::UnknownLabel(label.to_string()))?;
        let sb = b.subsystem(*label).ok_or_else(|| QuantumError::UnknownLabel(label.to_string()))?;
        if sa.dim != sb.dim {
            return Err(QuantumError::LinkDimensionMismatch {
                label: *label,
                left: sa.dim,
                right: sb.dim,
            });
        }
    }
    for s in a.subsystems() {
        if !shared.contains(&s.label) && b.subsystem(s.label).is_some() {
            return Err(QuantumError::DuplicateLabel(s.label));
        }
    }
    let a_ext = a.extended(b.subsystems())?;
    let b_ext = b.partial_transpose(shared)?.extended(a.subsystems())?;
    b_ext.checked_mul(&a_ext)?.partial_trace(shared)
}
