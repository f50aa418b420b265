//! Controlled two-qubit primitives on the native gate set. Register qubits
//! are 0 and 1, the phase-estimation ancilla is qubit [`ANCILLA`].

use std::f64::consts::PI;

use crate::hamiltonian::TermLabel;
use crate::simulator::{Circuit, Gate};
use crate::vqe::cnot_gates;
use crate::{CMatrix, Error, Result};

pub const ANCILLA: usize = 2;

/// CNOT with q1 as control and q0 as target.
pub fn cnot_via_cz() -> Circuit {
    Circuit::from_gates(2, cnot_gates(1, 0)).expect("two qubits")
}

fn swap_gates(a: usize, b: usize) -> Vec<Gate> {
    let mut g = Vec::with_capacity(9);
    g.extend(cnot_gates(a, b));
    g.extend(cnot_gates(b, a));
    g.extend(cnot_gates(a, b));
    g
}

/// SWAP as three CNOTs, each one `CZ(pi)` between two rotations.
pub fn swap_via_cz() -> Circuit {
    Circuit::from_gates(2, swap_gates(0, 1)).expect("two qubits")
}

/// `exp(-i theta Z_q)` controlled by the ancilla: `CZ(2 theta)` leaves the
/// ancilla a relative phase `e^{i theta}` too many, which `Rz(-theta)` removes.
fn controlled_z(q: usize, theta: f64) -> [Gate; 2] {
    [Gate::cz(ANCILLA, q, 2.0 * theta), Gate::rz(ANCILLA, -theta)]
}

/// Parity of q0 and q1 computed into q0, controlled `Z0`, then uncomputed.
fn controlled_zz(theta: f64) -> Vec<Gate> {
    let mut g = cnot_gates(1, 0).to_vec();
    g.extend(controlled_z(0, theta));
    g.extend(cnot_gates(1, 0));
    g
}

/// `|0><0| (x) I + |1><1| (x) exp(-i theta P)` on three qubits, ancilla on
/// qubit 2, exact including the ancilla's relative phase.
pub fn controlled_term(term: TermLabel, theta: f64) -> Result<Circuit> {
    if !theta.is_finite() {
        return Err(Error::invalid("non-finite angle"));
    }
    let gates: Vec<Gate> = match term {
        TermLabel::Z0 => controlled_z(0, theta).to_vec(),
        TermLabel::Z1 => {
            let mut g = swap_gates(0, 1);
            g.extend(controlled_z(0, theta));
            g.extend(swap_gates(0, 1));
            g
        }
        TermLabel::Z0Z1 => controlled_zz(theta),
        TermLabel::X0X1 => {
            let mut g = vec![Gate::ry(0, -PI / 2.0), Gate::ry(1, -PI / 2.0)];
            g.extend(controlled_zz(theta));
            g.extend([Gate::ry(0, PI / 2.0), Gate::ry(1, PI / 2.0)]);
            g
        }
        TermLabel::Y0Y1 => {
            let mut g = vec![Gate::rx(0, PI / 2.0), Gate::rx(1, PI / 2.0)];
            g.extend(controlled_zz(theta));
            g.extend([Gate::rx(0, -PI / 2.0), Gate::rx(1, -PI / 2.0)]);
            g
        }
        TermLabel::I => return Err(Error::invalid("the identity term has no controlled circuit; it is an ancilla phase")),
    };
    Circuit::from_gates(3, gates)
}

/// Dense `|0><0| (x) I + |1><1| (x) U` for a two-qubit `U`, ancilla as the
/// most significant bit.
pub fn controlled_unitary(u: &CMatrix) -> CMatrix {
    let mut c = CMatrix::identity(8, 8);
    for i in 0..4 {
        for j in 0..4 {
            c[(4 + i, 4 + j)] = u[(i, j)];
        }
    }
    c
}

/// Ancilla phase `diag(1, e^{-i phi})` up to a global phase.
pub(crate) fn ancilla_phase(phi: f64) -> Gate {
    Gate::rz(ANCILLA, -phi)
}
