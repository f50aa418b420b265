use serde::{Deserialize, Serialize};

use super::gate::{Gate, GateKind};
use super::state::StateVector;
use crate::pauli::QuantumState;
use crate::{CMatrix, Error, Result};

/// Ordered gate list on a fixed register. Gates are validated on insertion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n_qubits: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Circuit::new(n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(self)
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<&mut Self> {
        for g in gates {
            self.push(g)?;
        }
        Ok(self)
    }

    /// Append another circuit on the same register.
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(self)
    }

    /// Reversed gate order with negated angles.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// Place this circuit on a larger register, qubit `q` going to `mapping[q]`.
    pub fn embed(&self, n_qubits: usize, mapping: &[usize]) -> Result<Circuit> {
        if mapping.len() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: mapping.len(),
            });
        }
        let gates = self.gates.iter().map(|g| Gate {
            targets: g.targets.iter().map(|&q| mapping[q]).collect(),
            ..g.clone()
        });
        Circuit::from_gates(n_qubits, gates)
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }

    /// Dense `2^n` unitary, built column by column from basis states.
    pub fn unitary(&self) -> CMatrix {
        let dim = 1usize << self.n_qubits;
        let mut u = CMatrix::zeros(dim, dim);
        for j in 0..dim {
            let mut amps = StateVector::basis(self.n_qubits, j);
            for g in &self.gates {
                g.apply_to(amps.amplitudes_mut());
            }
            for (i, a) in amps.amplitudes().iter().enumerate() {
                u[(i, j)] = *a;
            }
        }
        u
    }
}

/// Run a circuit on a pure state.
pub fn apply_circuit(mut state: StateVector, circuit: &Circuit) -> Result<StateVector> {
    if state.n_qubits() != circuit.n_qubits {
        return Err(Error::DimensionMismatch {
            expected: circuit.n_qubits,
            found: state.n_qubits(),
        });
    }
    for g in &circuit.gates {
        g.apply_to(state.amplitudes_mut());
    }
    Ok(state)
}

#[derive(Deserialize)]
struct CircuitRecord {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl<'de> Deserialize<'de> for Circuit {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = CircuitRecord::deserialize(d)?;
        Circuit::from_gates(r.n_qubits, r.gates).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::simulator::random_state;

    #[test]
    fn empty_circuit_is_identity() {
        let psi = random_state(2, 3);
        assert_eq!(apply_circuit(psi.clone(), &Circuit::new(2)).unwrap(), psi);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            apply_circuit(StateVector::zero(3), &Circuit::new(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn unitary_matches_simulation_and_inverse() {
        let mut c = Circuit::new(3);
        c.extend([Gate::rx(0, 0.4), Gate::cz(0, 2, 1.3), Gate::ry(1, -0.8), Gate::crz(2, 1, 0.6), Gate::rz(0, 2.2)])
            .unwrap();
        let psi = random_state(3, 11);
        let direct = apply_circuit(psi.clone(), &c).unwrap();
        let via_matrix = psi.apply_matrix(&c.unitary()).unwrap();
        for (a, b) in direct.amplitudes().iter().zip(via_matrix.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
        let mut round = c.clone();
        round.append(&c.inverse()).unwrap();
        assert!(max_abs_diff(&round.unitary(), &CMatrix::identity(8, 8)) < 1e-12);
        assert!((direct.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn json_round_trip_validates() {
        let c = Circuit::from_gates(2, [Gate::rz(0, 1.5708), Gate::cz(0, 1, std::f64::consts::PI)]).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.starts_with(r#"{"n_qubits":2,"gates":[{"kind":"Rz","targets":[0],"angle":1.5708}"#));
        let back: Circuit = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        let bad = r#"{"n_qubits":1,"gates":[{"kind":"CZ","targets":[0,1],"angle":1.0}]}"#;
        assert!(serde_json::from_str::<Circuit>(bad).is_err());
    }
}
