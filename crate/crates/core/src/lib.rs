//! Classical simulation of molecular-hydrogen quantum chemistry on a small
//! gate-model simulator.
//!
//! The pipeline runs from STO-6G Gaussian integrals, through the second
//! quantized Hamiltonian and its Jordan-Wigner / Bravyi-Kitaev encodings,
//! down to the two-qubit effective Hamiltonian
//!
//! ```text
//! H = g0 I + g1 Z0 + g2 Z1 + g3 Z0Z1 + g4 X0X1 + g5 Y0Y1
//! ```
//!
//! which is then solved by a one-parameter unitary coupled cluster VQE and by
//! Trotterized iterative phase estimation with majority voting.
//!
//! Conventions shared by every module:
//! - qubit 0 is the least-significant bit of a basis-state index, kets are
//!   written `|q1 q0>`;
//! - rotations are `R_s(theta) = exp(-i theta s / 2)`, `CZ(phi) = diag(1, 1, 1, e^{i phi})`;
//! - bond lengths enter in Angstrom, everything else is in atomic units.

pub mod chemistry;
pub mod error;
pub mod exec;
pub mod hamiltonian;
pub mod linalg;
pub mod pauli;
pub mod pea;
pub mod simulator;
pub mod units;
pub mod vqe;

pub use error::{Error, Result};
pub use hamiltonian::{TermLabel, TwoQubitHamiltonian};
pub use pauli::{Pauli, PauliString, QubitOperator};

pub type C64 = num_complex::Complex64;
pub type CMatrix = nalgebra::DMatrix<C64>;
