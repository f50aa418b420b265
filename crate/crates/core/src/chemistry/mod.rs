//! Minimal-basis electronic structure for H2: integrals, second
//! quantization, qubit encodings, tapering, MP2 and exact spectra.
//!
//! Spin orbitals are interleaved, mode `2k + s` for spatial orbital `k`
//! (0 = sigma_g, 1 = sigma_u) and spin `s` (0 = up, 1 = down). With this
//! order the Bravyi-Kitaev image of the Hamiltonian never flips qubits 1
//! and 3, which is what the two-qubit reduction relies on.

pub mod basis;
pub mod fermion;
pub mod integrals;
pub mod mapping;
pub mod mp2;
pub mod reduction;
pub mod spectrum;

pub use fermion::{second_quantized, FermionOperator};
pub use integrals::{compute_integrals, MolecularIntegrals};
pub use mapping::{bravyi_kitaev, jordan_wigner, FermionEncoding};
pub use mp2::{mp2_initial_amplitude, Mp2Guess};
pub use reduction::{reduce_to_two_qubits, BkCoefficients};
pub use spectrum::{exact_diagonalize, EigenDecomposition};

use crate::exec::{self, Execution};
use crate::hamiltonian::TwoQubitHamiltonian;
use crate::pauli::QubitOperator;
use crate::simulator::StateVector;
use crate::Result;

/// `|q1 q0> = |01>`: the Hartree-Fock state of the reduced register.
pub fn hartree_fock_state() -> StateVector {
    StateVector::basis(2, 0b01)
}

/// Everything derived from one bond length.
#[derive(Debug, Clone)]
pub struct H2Model {
    pub r_angstrom: f64,
    pub integrals: MolecularIntegrals,
    pub fermion: FermionOperator,
    pub bk4: QubitOperator,
    pub bk_coefficients: BkCoefficients,
    pub hamiltonian: TwoQubitHamiltonian,
}

impl H2Model {
    pub fn at(r_angstrom: f64) -> Result<Self> {
        let integrals = compute_integrals(r_angstrom)?;
        let fermion = second_quantized(&integrals);
        let bk4 = bravyi_kitaev(&fermion, 4)?;
        let bk_coefficients = BkCoefficients::extract(&bk4)?;
        let hamiltonian = reduce_to_two_qubits(&bk4)?;
        Ok(H2Model {
            r_angstrom,
            integrals,
            fermion,
            bk4,
            bk_coefficients,
            hamiltonian,
        })
    }

    pub fn jordan_wigner(&self) -> QubitOperator {
        jordan_wigner(&self.fermion, 4).expect("four modes")
    }

    /// Spectrum of the reduced Hamiltonian with overlaps against `|01>`.
    pub fn exact(&self) -> EigenDecomposition {
        exact_diagonalize(&self.hamiltonian.to_operator(), &hartree_fock_state()).expect("Hermitian two-qubit operator")
    }

    pub fn ground_energy(&self) -> f64 {
        self.hamiltonian.ground_energy()
    }

    pub fn hartree_fock_energy(&self) -> f64 {
        self.hamiltonian.hartree_fock_energy()
    }

    /// Image of `T - T^dagger` (with `T = a+_2 a+_3 a_1 a_0`) on the reduced
    /// register; the circuit angle for amplitude `t` is `t <10|G|01>`.
    pub fn ucc_generator(&self) -> Result<QubitOperator> {
        let t = FermionOperator::term(&[(2, true), (3, true), (1, false), (0, false)], 1.0);
        let g = &t - &t.adjoint();
        let bk = bravyi_kitaev(&g, 4)?;
        reduction::taper(&bk, &reduction::STABILIZED_QUBITS, reduction::bk_hartree_fock_index())
    }

    /// Ansatz angle equivalent to the MP2 doubles amplitude.
    pub fn mp2_theta(&self) -> Result<f64> {
        let amp = mp2_initial_amplitude(&self.integrals)?.doubles;
        let g = self.ucc_generator()?.to_dense(2)?;
        Ok(amp * g[(0b10, 0b01)].re)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub r_angstrom: f64,
    pub hartree_fock: f64,
    pub ground: f64,
    /// `|<0|HF>|^2`.
    pub ground_weight: f64,
}

pub fn exact_curve(grid: &[f64], exec: Execution) -> Result<Vec<CurvePoint>> {
    exec::map(exec, grid, |&r| {
        let m = H2Model::at(r)?;
        let e = m.exact();
        Ok(CurvePoint {
            r_angstrom: r,
            hartree_fock: m.hartree_fock_energy(),
            ground: e.ground_energy(),
            ground_weight: e.ground_weight(),
        })
    })
    .into_iter()
    .collect()
}

/// `E(R_max) - min_R E(R)` over a curve sampled on an increasing grid.
pub fn dissociation_energy(energies: &[f64]) -> f64 {
    let last = *energies.last().expect("nonempty curve");
    last - energies.iter().copied().fold(f64::INFINITY, f64::min)
}

/// `0.30, 0.35, ..., 2.85` Angstrom.
pub fn default_grid() -> Vec<f64> {
    (0..=51).map(|i| ((30 + 5 * i) as f64) / 100.0).collect()
}
