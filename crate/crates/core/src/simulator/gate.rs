use serde::{Deserialize, Serialize};

use super::state::{apply_1q, apply_diag_2q, Mat2, StateVector};
use crate::{CMatrix, Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    Rx,
    Ry,
    Rz,
    /// `diag(1, 1, 1, e^{i angle})`.
    CZ,
    /// `Rz(angle)` on `targets[1]` controlled by `targets[0]`.
    CRz,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz => 1,
            GateKind::CZ | GateKind::CRz => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub angle: f64,
}

impl Gate {
    pub fn rx(q: usize, angle: f64) -> Self {
        Gate { kind: GateKind::Rx, targets: vec![q], angle }
    }

    pub fn ry(q: usize, angle: f64) -> Self {
        Gate { kind: GateKind::Ry, targets: vec![q], angle }
    }

    pub fn rz(q: usize, angle: f64) -> Self {
        Gate { kind: GateKind::Rz, targets: vec![q], angle }
    }

    pub fn cz(a: usize, b: usize, phi: f64) -> Self {
        Gate { kind: GateKind::CZ, targets: vec![a, b], angle: phi }
    }

    pub fn crz(control: usize, target: usize, angle: f64) -> Self {
        Gate { kind: GateKind::CRz, targets: vec![control, target], angle }
    }

    pub fn inverse(&self) -> Self {
        Gate { angle: -self.angle, ..self.clone() }
    }

    pub fn with_angle(&self, angle: f64) -> Self {
        Gate { angle, ..self.clone() }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        if self.targets.len() != self.kind.arity() {
            return Err(Error::invalid(format!(
                "{:?} takes {} targets, got {}",
                self.kind,
                self.kind.arity(),
                self.targets.len()
            )));
        }
        if let Some(&index) = self.targets.iter().find(|&&q| q >= n_qubits) {
            return Err(Error::QubitOutOfRange { index, n_qubits });
        }
        if self.kind.arity() == 2 && self.targets[0] == self.targets[1] {
            return Err(Error::invalid(format!("{:?} on repeated qubit {}", self.kind, self.targets[0])));
        }
        if !self.angle.is_finite() {
            return Err(Error::invalid("non-finite gate angle"));
        }
        Ok(())
    }

    pub(crate) fn single_qubit_matrix(kind: GateKind, angle: f64) -> Mat2 {
        let (s, c) = (angle / 2.0).sin_cos();
        let z = C64::new(0.0, 0.0);
        match kind {
            GateKind::Rx => [[C64::new(c, 0.0), C64::new(0.0, -s)], [C64::new(0.0, -s), C64::new(c, 0.0)]],
            GateKind::Ry => [[C64::new(c, 0.0), C64::new(-s, 0.0)], [C64::new(s, 0.0), C64::new(c, 0.0)]],
            GateKind::Rz => [[C64::from_polar(1.0, -angle / 2.0), z], [z, C64::from_polar(1.0, angle / 2.0)]],
            _ => unreachable!("not a single-qubit gate"),
        }
    }

    /// Diagonal of a two-qubit gate indexed by `2*bit(targets[0]) + bit(targets[1])`.
    pub(crate) fn two_qubit_diagonal(kind: GateKind, angle: f64) -> [C64; 4] {
        let one = C64::new(1.0, 0.0);
        match kind {
            GateKind::CZ => [one, one, one, C64::from_polar(1.0, angle)],
            GateKind::CRz => [
                one,
                one,
                C64::from_polar(1.0, -angle / 2.0),
                C64::from_polar(1.0, angle / 2.0),
            ],
            _ => unreachable!("not a two-qubit gate"),
        }
    }

    /// Dense matrix on the gate's own qubits: 2x2, or 4x4 with `targets[0]`
    /// as the least-significant bit.
    pub fn matrix(&self) -> CMatrix {
        match self.kind.arity() {
            1 => {
                let m = Self::single_qubit_matrix(self.kind, self.angle);
                CMatrix::from_row_slice(2, 2, &[m[0][0], m[0][1], m[1][0], m[1][1]])
            }
            _ => {
                let d = Self::two_qubit_diagonal(self.kind, self.angle);
                // index bit0 = targets[0], bit1 = targets[1]
                let diag = [d[0], d[2], d[1], d[3]];
                CMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&diag))
            }
        }
    }

    pub(crate) fn apply_to(&self, amps: &mut [C64]) {
        match self.kind.arity() {
            1 => apply_1q(amps, self.targets[0], &Self::single_qubit_matrix(self.kind, self.angle)),
            _ => apply_diag_2q(
                amps,
                self.targets[0],
                self.targets[1],
                &Self::two_qubit_diagonal(self.kind, self.angle),
            ),
        }
    }
}

/// `state <- U state`.
pub fn apply_gate(mut state: StateVector, gate: &Gate) -> Result<StateVector> {
    use crate::pauli::QuantumState;
    gate.validate(state.n_qubits())?;
    gate.apply_to(state.amplitudes_mut());
    Ok(state)
}
