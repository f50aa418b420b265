//! Trotterized controlled evolution and iterative phase estimation with a
//! single ancilla, phase kickback and majority voting.

mod gates;
mod iterative;
mod trotter;

pub use gates::{cnot_via_cz, controlled_term, controlled_unitary, swap_via_cz, ANCILLA};
pub use iterative::{default_t0, energy_from_bits, iterative_pea, kickback_phase, PeaMode, PeaOutcome, T0_SAFETY};
pub use trotter::{
    check_ordering, eigenphase_error, exact_unitary, log_log_slope, operator_norm_error, optimize_ordering, ordering_scores,
    trotter_circuit, trotter_circuit_for, trotter_unitary, TrotterSpec, MAX_BITS, ORDERING_TIE,
};
