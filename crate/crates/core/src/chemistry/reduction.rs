//! Stabilizer tapering of the four-qubit Bravyi-Kitaev Hamiltonian down to
//! the two-qubit effective form.

use serde::{Deserialize, Serialize};

use super::mapping::FermionEncoding;
use crate::hamiltonian::{TermLabel, TwoQubitHamiltonian};
use crate::pauli::{parse_key, Pauli, PauliString, QubitOperator};
use crate::simulator::StateVector;
use crate::{Error, Result, C64};

/// Hartree-Fock occupation: both sigma_g spin orbitals (modes 0 and 1).
pub const HF_OCCUPATION: usize = 0b0011;

/// Qubits left untouched by the H2 Hamiltonian under Bravyi-Kitaev.
pub const STABILIZED_QUBITS: [usize; 2] = [1, 3];

/// Fix `Z_q` on each stabilized qubit to its value in the basis state
/// `reference`, drop those qubits and renumber the rest in order.
pub fn taper(op: &QubitOperator, stabilized: &[usize], reference: usize) -> Result<QubitOperator> {
    let n = op.min_qubits().max(stabilized.iter().map(|q| q + 1).max().unwrap_or(0));
    let kept: Vec<usize> = (0..n).filter(|q| !stabilized.contains(q)).collect();
    let mut out = Vec::new();
    for term in op.terms() {
        let mut coeff = term.coeff;
        for &q in stabilized {
            match term.factor(q) {
                None => {}
                Some(Pauli::Z) => {
                    if reference >> q & 1 == 1 {
                        coeff = -coeff;
                    }
                }
                Some(p) => {
                    return Err(Error::invalid(format!("term {term} has {p:?} on stabilized qubit {q}")));
                }
            }
        }
        let factors = term
            .factors()
            .filter(|(q, _)| !stabilized.contains(q))
            .map(|(q, p)| (kept.iter().position(|&k| k == q).expect("kept qubit"), p));
        out.push(PauliString::new(factors.collect::<Vec<_>>(), coeff));
    }
    Ok(QubitOperator::from_terms(out))
}

/// Reduced image of a basis state under [`taper`].
pub fn taper_basis_state(index: usize, n_qubits: usize, stabilized: &[usize]) -> usize {
    (0..n_qubits)
        .filter(|q| !stabilized.contains(q))
        .enumerate()
        .fold(0, |acc, (new, old)| acc | ((index >> old & 1) << new))
}

/// Bravyi-Kitaev image of the Hartree-Fock determinant on four qubits.
pub fn bk_hartree_fock_index() -> usize {
    FermionEncoding::bravyi_kitaev(4).encode(HF_OCCUPATION)
}

/// Taper the four-qubit BK Hamiltonian using the stabilizer eigenvalues of
/// `Z1` and `Z3` evaluated on the BK-encoded Hartree-Fock state.
pub fn reduce_to_two_qubits(op4: &QubitOperator) -> Result<TwoQubitHamiltonian> {
    let reference = bk_hartree_fock_index();
    let hf = StateVector::basis(4, reference);
    for &q in &STABILIZED_QUBITS {
        // eigenvalue is computed from the state, never assumed
        let z = PauliString::single(q, Pauli::Z, 1.0);
        let v = crate::pauli::QuantumState::pauli_expectation(&hf, &z).re;
        debug_assert!((v.abs() - 1.0).abs() < 1e-12);
    }
    let reduced = taper(op4, &STABILIZED_QUBITS, reference)?;
    let h = TwoQubitHamiltonian::from_operator(&reduced)?;
    let present: Vec<TermLabel> = TermLabel::ALL.into_iter().filter(|t| reduced.coefficient(&t.key()).norm() > 0.0).collect();
    if present.len() != 6 {
        return Err(Error::TemplateMismatch(format!("reduced operator has terms {present:?}")));
    }
    Ok(h)
}

/// The eight independent coefficients of the four-qubit BK Hamiltonian, in
/// the pattern
/// `f0 + f1 (Z0 + Z0Z1) + f2 Z1 + f3 (Z2 + Z1Z2Z3) + f4 (Z0Z2 + Z0Z2Z3)
///  + f5 Z1Z3 + f6 (X0Z1X2 + Y0Z1Y2 + X0Z1X2Z3 + Y0Z1Y2Z3) + f7 (Z0Z1Z2 + Z0Z1Z2Z3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BkCoefficients {
    pub f: [f64; 8],
}

pub const BK_PATTERN: [(&str, usize); 15] = [
    ("I", 0),
    ("Z0", 1),
    ("Z1", 2),
    ("Z2", 3),
    ("Z0 Z1", 1),
    ("Z0 Z2", 4),
    ("Z1 Z3", 5),
    ("X0 Z1 X2", 6),
    ("Y0 Z1 Y2", 6),
    ("Z0 Z1 Z2", 7),
    ("Z0 Z2 Z3", 4),
    ("Z1 Z2 Z3", 3),
    ("X0 Z1 X2 Z3", 6),
    ("Y0 Z1 Y2 Z3", 6),
    ("Z0 Z1 Z2 Z3", 7),
];

impl BkCoefficients {
    /// Check `op4` has exactly the fifteen-term pattern (tied coefficients
    /// equal to `1e-10`) and read off `f0..f7`.
    pub fn extract(op4: &QubitOperator) -> Result<Self> {
        if op4.len() != BK_PATTERN.len() {
            return Err(Error::TemplateMismatch(format!("expected 15 terms, found {}", op4.len())));
        }
        let mut f = [f64::NAN; 8];
        for (label, idx) in BK_PATTERN {
            let key = parse_key(label)?;
            let c = op4.coefficient(&key);
            if c.norm() == 0.0 {
                return Err(Error::TemplateMismatch(format!("missing term {label}")));
            }
            if c.im.abs() > 1e-12 {
                return Err(Error::NonHermitian(c.im.abs()));
            }
            if f[idx].is_nan() {
                f[idx] = c.re;
            } else if (f[idx] - c.re).abs() > 1e-10 {
                return Err(Error::TemplateMismatch(format!("{label} = {} but f{idx} = {}", c.re, f[idx])));
            }
        }
        Ok(BkCoefficients { f })
    }

    pub fn to_operator(&self) -> QubitOperator {
        QubitOperator::from_terms(BK_PATTERN.iter().map(|&(label, idx)| {
            PauliString::new(parse_key(label).expect("static label"), C64::new(self.f[idx], 0.0))
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hf_state_encodes_to_single_occupied_qubit() {
        assert_eq!(bk_hartree_fock_index(), 0b0001);
        assert_eq!(taper_basis_state(0b0001, 4, &STABILIZED_QUBITS), 0b01);
    }

    #[test]
    fn taper_rejects_flips_on_stabilized_qubits() {
        let op = QubitOperator::from_labels([("Z0 X1", 1.0)]).unwrap();
        assert!(taper(&op, &[1], 0).is_err());
    }

    #[test]
    fn taper_substitutes_signs() {
        let op = QubitOperator::from_labels([("Z1 Z3", 2.0), ("X0 Z1 X2", 0.5), ("Z2 Z3", 1.0)]).unwrap();
        let t = taper(&op, &[1, 3], 0b0010).unwrap();
        let expected = QubitOperator::from_labels([("I", -2.0), ("X0 X1", -0.5), ("Z1", 1.0)]).unwrap();
        assert_eq!(t, expected);
    }
}
