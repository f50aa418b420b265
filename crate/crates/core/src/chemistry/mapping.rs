//! Fermion-to-qubit encodings of the form `b = beta n (mod 2)`, where `n` is
//! the occupation vector and `b` the qubit register. Jordan-Wigner is
//! `beta = I`; Bravyi-Kitaev uses the Fenwick-tree matrix.

use super::fermion::FermionOperator;
use crate::pauli::{Pauli, PauliString, QubitOperator};
use crate::{Error, Result, C64};

/// Binary encoding matrix with rows stored as bitmasks: `b_i = parity(rows[i] & n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FermionEncoding {
    n_modes: usize,
    rows: Vec<usize>,
    inverse: Vec<usize>,
}

fn gf2_inverse(rows: &[usize]) -> Option<Vec<usize>> {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut inv: Vec<usize> = (0..n).map(|i| 1 << i).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r] >> col & 1 == 1)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        for r in 0..n {
            if r != col && a[r] >> col & 1 == 1 {
                a[r] ^= a[col];
                inv[r] ^= inv[col];
            }
        }
    }
    Some(inv)
}

impl FermionEncoding {
    pub fn from_rows(rows: Vec<usize>) -> Result<Self> {
        let inverse = gf2_inverse(&rows).ok_or_else(|| Error::invalid("encoding matrix is singular over GF(2)"))?;
        Ok(FermionEncoding {
            n_modes: rows.len(),
            rows,
            inverse,
        })
    }

    pub fn jordan_wigner(n_modes: usize) -> Self {
        Self::from_rows((0..n_modes).map(|i| 1 << i).collect()).expect("identity is invertible")
    }

    /// Fenwick-tree matrix: qubit `i` stores the parity of modes
    /// `(i & (i + 1)) ..= i`. For power-of-two sizes this is the usual
    /// recursive block construction, and smaller sizes are its top-left block.
    pub fn bravyi_kitaev(n_modes: usize) -> Self {
        let rows = (0..n_modes)
            .map(|i| {
                let lo = i & (i + 1);
                (lo..=i).fold(0usize, |m, j| m | (1 << j))
            })
            .collect();
        Self::from_rows(rows).expect("lower unitriangular is invertible")
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn beta(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    /// Qubit basis index encoding the occupation bitmask `occupation`.
    pub fn encode(&self, occupation: usize) -> usize {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |b, (i, &row)| b | ((((row & occupation).count_ones() & 1) as usize) << i))
    }

    pub fn decode(&self, bits: usize) -> usize {
        self.inverse
            .iter()
            .enumerate()
            .fold(0, |n, (i, &row)| n | ((((row & bits).count_ones() & 1) as usize) << i))
    }

    /// Qubits other than `j` whose stored value depends on mode `j`.
    pub fn update_set(&self, j: usize) -> usize {
        (0..self.n_modes).filter(|&i| i != j && self.beta(i, j)).fold(0, |m, i| m | (1 << i))
    }

    /// Qubits whose parity equals the parity of modes below `j`.
    pub fn parity_set(&self, j: usize) -> usize {
        self.inverse[..j].iter().fold(0, |m, &row| m ^ row)
    }

    /// Qubits other than `j` that determine `n_j` together with qubit `j`.
    pub fn flip_set(&self, j: usize) -> usize {
        self.inverse[j] & !(1 << j)
    }

    fn string(x: usize, y: Option<usize>, z: usize) -> PauliString {
        let mut factors = Vec::new();
        for q in 0..usize::BITS as usize {
            let bit = 1usize << q;
            let p = if Some(q) == y {
                Some(Pauli::Y)
            } else if x & bit != 0 && z & bit != 0 {
                // X Z = -i Y would need a phase; the sets are disjoint for valid encodings
                unreachable!("overlapping X and Z sets on qubit {q}")
            } else if x & bit != 0 {
                Some(Pauli::X)
            } else if z & bit != 0 {
                Some(Pauli::Z)
            } else {
                None
            };
            if let Some(p) = p {
                factors.push((q, p));
            }
        }
        PauliString::new(factors, C64::new(1.0, 0.0))
    }

    /// Majorana pair `(c_j, d_j)` with `a_j = (c_j + i d_j) / 2`.
    pub fn majoranas(&self, j: usize) -> (PauliString, PauliString) {
        let u = self.update_set(j);
        let p = self.parity_set(j);
        let f = self.flip_set(j);
        let c = Self::string(u | 1 << j, None, p);
        let d = Self::string(u, Some(j), p ^ f);
        (c, d)
    }

    /// Image of `a+_j` (`dagger`) or `a_j`.
    pub fn ladder(&self, j: usize, dagger: bool) -> QubitOperator {
        let (c, d) = self.majoranas(j);
        let s = if dagger { -0.5 } else { 0.5 };
        let mut d = d;
        d.coeff = C64::new(0.0, s);
        let mut c = c;
        c.coeff = C64::new(0.5, 0.0);
        QubitOperator::from_terms([c, d])
    }

    pub fn map(&self, op: &FermionOperator) -> Result<QubitOperator> {
        if let Some(m) = op.max_mode() {
            if m >= self.n_modes {
                return Err(Error::QubitOutOfRange { index: m, n_qubits: self.n_modes });
            }
        }
        let ladders: Vec<[QubitOperator; 2]> = (0..self.n_modes).map(|j| [self.ladder(j, false), self.ladder(j, true)]).collect();
        let mut out = QubitOperator::zero();
        for (word, c) in op.terms() {
            let mut term = QubitOperator::identity(c);
            for &(mode, dagger) in word {
                term = &term * &ladders[mode][dagger as usize];
            }
            out = &out + &term;
        }
        Ok(out)
    }
}

pub fn jordan_wigner(op: &FermionOperator, n_modes: usize) -> Result<QubitOperator> {
    FermionEncoding::jordan_wigner(n_modes).map(op)
}

pub fn bravyi_kitaev(op: &FermionOperator, n_modes: usize) -> Result<QubitOperator> {
    FermionEncoding::bravyi_kitaev(n_modes).map(op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chemistry::fermion::second_quantized;
    use crate::chemistry::integrals::compute_integrals;
    use proptest::prelude::*;

    #[test]
    fn bk_matrix_for_four_modes() {
        let bk = FermionEncoding::bravyi_kitaev(4);
        let dense: Vec<Vec<u8>> = (0..4).map(|i| (0..4).map(|j| bk.beta(i, j) as u8).collect()).collect();
        assert_eq!(dense, vec![vec![1, 0, 0, 0], vec![1, 1, 0, 0], vec![0, 0, 1, 0], vec![1, 1, 1, 1]]);
        let eight = FermionEncoding::bravyi_kitaev(8);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(eight.beta(i, j), bk.beta(i, j));
            }
        }
    }

    #[test]
    fn number_operator_maps_to_projector() {
        let expected = QubitOperator::from_labels([("I", 0.5), ("Z0", -0.5)]).unwrap();
        let n0 = FermionOperator::number(0);
        assert_eq!(jordan_wigner(&n0, 4).unwrap(), expected);
        assert_eq!(bravyi_kitaev(&n0, 4).unwrap(), expected);
    }

    /// Mapped operator, read in the qubit basis `b = beta n`, must reproduce
    /// the fermionic matrix element by element.
    fn assert_faithful(enc: &FermionEncoding, op: &FermionOperator) {
        let n = enc.n_modes();
        let f = op.to_dense(n).unwrap();
        let q = enc.map(op).unwrap().to_dense(n).unwrap();
        for col in 0..1 << n {
            for row in 0..1 << n {
                let d = (q[(enc.encode(row), enc.encode(col))] - f[(row, col)]).norm();
                assert!(d < 1e-12, "row {row} col {col}: {d}");
            }
        }
    }

    #[test]
    fn hamiltonian_faithful_under_both_encodings() {
        let h = second_quantized(&compute_integrals(0.9).unwrap());
        assert_faithful(&FermionEncoding::jordan_wigner(4), &h);
        assert_faithful(&FermionEncoding::bravyi_kitaev(4), &h);
    }

    proptest! {
        #[test]
        fn every_ladder_faithful(n in 1usize..7, j in 0usize..7, dagger: bool) {
            prop_assume!(j < n);
            let op = FermionOperator::term(&[(j, dagger)], 1.0);
            assert_faithful(&FermionEncoding::bravyi_kitaev(n), &op);
            assert_faithful(&FermionEncoding::jordan_wigner(n), &op);
        }

        #[test]
        fn encode_decode_round_trip(n in 1usize..9, occ in 0usize..256) {
            let enc = FermionEncoding::bravyi_kitaev(n);
            let occ = occ & ((1 << n) - 1);
            prop_assert_eq!(enc.decode(enc.encode(occ)), occ);
        }
    }
}
