use crate::linalg::hermitian_eigen;
use crate::pauli::{QuantumState, QubitOperator};
use crate::simulator::StateVector;
use crate::{CMatrix, Error, Result, C64};

/// Full spectrum with overlaps `a_n = <n|phi>` against a reference state.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Ascending.
    pub energies: Vec<f64>,
    /// Column `n` is `|n>`.
    pub states: CMatrix,
    pub overlaps: Vec<C64>,
}

impl EigenDecomposition {
    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    pub fn state(&self, n: usize) -> StateVector {
        StateVector::from_amplitudes(self.states.column(n).iter().copied().collect()).expect("normalized eigenvector")
    }

    /// `|a_0|^2`.
    pub fn ground_weight(&self) -> f64 {
        self.overlaps[0].norm_sqr()
    }
}

pub fn exact_diagonalize(op: &QubitOperator, reference: &StateVector) -> Result<EigenDecomposition> {
    let n = reference.n_qubits();
    if n > 4 {
        return Err(Error::invalid(format!("dense diagonalization is limited to 4 qubits, got {n}")));
    }
    let herm = op.max_imag();
    if herm > 1e-12 {
        return Err(Error::NonHermitian(herm));
    }
    let (energies, states) = hermitian_eigen(&op.to_dense(n)?)?;
    let overlaps = (0..states.ncols())
        .map(|k| states.column(k).iter().zip(reference.amplitudes()).map(|(v, r)| v.conj() * r).sum())
        .collect();
    Ok(EigenDecomposition {
        energies,
        states,
        overlaps,
    })
}
