use crate::pauli::{PauliString, QuantumState};
use crate::{CMatrix, Error, Result, C64};

pub(crate) type Mat2 = [[C64; 2]; 2];

/// Apply a 2x2 matrix to bit `q` of a flat amplitude array.
pub(crate) fn apply_1q(amps: &mut [C64], q: usize, m: &Mat2) {
    let bit = 1usize << q;
    for i in 0..amps.len() {
        if i & bit == 0 {
            let a = amps[i];
            let b = amps[i | bit];
            amps[i] = m[0][0] * a + m[0][1] * b;
            amps[i | bit] = m[1][0] * a + m[1][1] * b;
        }
    }
}

/// Apply a diagonal two-qubit gate; `d[2*bit_a + bit_b]` multiplies each amplitude.
pub(crate) fn apply_diag_2q(amps: &mut [C64], a: usize, b: usize, d: &[C64; 4]) {
    for (i, amp) in amps.iter_mut().enumerate() {
        let idx = ((i >> a) & 1) << 1 | ((i >> b) & 1);
        *amp *= d[idx];
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[index] = C64::new(1.0, 0.0);
        StateVector { n_qubits, amplitudes }
    }

    /// Normalizes the input; rejects zero vectors and non-power-of-two lengths.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::invalid(format!("{len} amplitudes is not a power of two")));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::invalid("zero state vector"));
        }
        Ok(StateVector {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `|1 - |<a|b>|^2|`, zero when the states agree up to global phase.
    pub fn infidelity(&self, other: &StateVector) -> Result<f64> {
        Ok((1.0 - self.inner(other)?.norm_sqr()).abs())
    }

    pub fn apply_matrix(&self, m: &CMatrix) -> Result<StateVector> {
        if m.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: m.ncols(),
            });
        }
        let v = m * nalgebra::DVector::from_column_slice(&self.amplitudes);
        Ok(StateVector {
            n_qubits: self.n_qubits,
            amplitudes: v.as_slice().to_vec(),
        })
    }

    pub fn to_density(&self) -> DensityMatrix {
        let dim = self.dim();
        let mut data = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                data[i * dim + j] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        DensityMatrix {
            n_qubits: self.n_qubits,
            data,
        }
    }
}

impl QuantumState for StateVector {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn pauli_expectation(&self, p: &PauliString) -> C64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(j, &a)| {
                let (phase, i) = p.apply_to_basis(j);
                self.amplitudes[i].conj() * phase * a
            })
            .sum()
    }
}

/// Row-major `2^n x 2^n` density matrix.
///
/// Stored flat so that element `(i, j)` sits at `i * dim + j`; viewed as a
/// `2n`-qubit vector, ket qubit `q` is bit `n + q` and bra qubit `q` is bit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    data: Vec<C64>,
}

impl DensityMatrix {
    pub fn zero(n_qubits: usize) -> Self {
        StateVector::zero(n_qubits).to_density()
    }

    pub fn from_matrix(m: &CMatrix) -> Result<Self> {
        let dim = m.nrows();
        if dim != m.ncols() || dim == 0 || !dim.is_power_of_two() {
            return Err(Error::invalid(format!("{}x{} is not a density-matrix shape", m.nrows(), m.ncols())));
        }
        let data = (0..dim * dim).map(|k| m[(k / dim, k % dim)]).collect();
        Ok(DensityMatrix {
            n_qubits: dim.trailing_zeros() as usize,
            data,
        })
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim() + j]
    }

    pub(crate) fn data(&self) -> &[C64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn to_matrix(&self) -> CMatrix {
        let dim = self.dim();
        CMatrix::from_fn(dim, dim, |i, j| self.data[i * dim + j])
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.get(i, i).re.max(0.0)).collect()
    }

    pub fn purity(&self) -> f64 {
        let m = self.to_matrix();
        (&m * &m).trace().re
    }

    /// `rho -> K rho K^dagger` for a single-qubit operator.
    pub(crate) fn conjugate_1q(&mut self, q: usize, k: &Mat2) {
        let n = self.n_qubits;
        let kc = [[k[0][0].conj(), k[0][1].conj()], [k[1][0].conj(), k[1][1].conj()]];
        apply_1q(&mut self.data, n + q, k);
        apply_1q(&mut self.data, q, &kc);
    }

    pub(crate) fn conjugate_diag_2q(&mut self, a: usize, b: usize, d: &[C64; 4]) {
        let n = self.n_qubits;
        let dc = [d[0].conj(), d[1].conj(), d[2].conj(), d[3].conj()];
        apply_diag_2q(&mut self.data, n + a, n + b, d);
        apply_diag_2q(&mut self.data, a, b, &dc);
    }

    /// `sum_k K_k rho K_k^dagger` for a single-qubit Kraus set.
    pub(crate) fn apply_kraus_1q(&mut self, q: usize, kraus: &[Mat2]) {
        let mut acc = vec![C64::new(0.0, 0.0); self.data.len()];
        for k in kraus {
            let mut branch = self.clone();
            branch.conjugate_1q(q, k);
            acc.iter_mut().zip(&branch.data).for_each(|(a, b)| *a += b);
        }
        self.data = acc;
    }

    /// Smallest eigenvalue, for positivity checks.
    pub fn min_eigenvalue(&self) -> f64 {
        let (vals, _) = crate::linalg::hermitian_eigen(&self.to_matrix()).expect("density matrix is Hermitian");
        vals[0]
    }
}

impl QuantumState for DensityMatrix {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// `tr(rho P) = sum_j <j|rho P|j> = sum_j phase_j rho[i_j, j]`.
    fn pauli_expectation(&self, p: &PauliString) -> C64 {
        (0..self.dim())
            .map(|j| {
                let (phase, i) = p.apply_to_basis(j);
                phase * self.get(j, i)
            })
            .sum()
    }
}
