use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::gates::{ancilla_phase, controlled_term};
use crate::hamiltonian::{TermLabel, TwoQubitHamiltonian};
use crate::linalg::{hermitian_eigen, matrix_power, normal_eigen, operator_norm, propagator, wrap_angle};
use crate::pauli::QubitOperator;
use crate::simulator::Circuit;
use crate::vqe::Shots;
use crate::{CMatrix, Error, Result, C64};

/// Largest bit count; beyond it `t0 2^b` exceeds double-precision phase
/// resolution for typical `t0`.
pub const MAX_BITS: usize = 24;

/// Scores closer than this count as ties when ranking orderings.
pub const ORDERING_TIE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrotterSpec {
    pub t0: f64,
    pub rho: u32,
    pub ordering: [TermLabel; 5],
    pub bits: usize,
    /// Ancilla measurements per bit; `Exact` thresholds the probability itself.
    pub reps: Shots,
    /// Fold `g3 Z0Z1` into the ancilla phase using its Hartree-Fock value.
    pub substitute_z0z1: bool,
}

impl TrotterSpec {
    pub fn new(t0: f64) -> Self {
        TrotterSpec {
            t0,
            rho: 1,
            ordering: TermLabel::NON_IDENTITY,
            bits: 10,
            reps: Shots::Count(1000),
            substitute_z0z1: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t0 > 0.0 && self.t0.is_finite()) {
            return Err(Error::invalid(format!("t0 must be positive, got {}", self.t0)));
        }
        if self.rho == 0 {
            return Err(Error::invalid("rho must be at least 1"));
        }
        if self.bits == 0 || self.bits > MAX_BITS {
            return Err(Error::invalid(format!("bits must be in 1..={MAX_BITS}, got {}", self.bits)));
        }
        if self.reps == Shots::Count(0) {
            return Err(Error::invalid("reps must be at least 1"));
        }
        check_ordering(&self.ordering)
    }
}

pub fn check_ordering(ordering: &[TermLabel]) -> Result<()> {
    let mut sorted = ordering.to_vec();
    sorted.sort();
    if sorted != TermLabel::NON_IDENTITY {
        return Err(Error::invalid(format!(
            "ordering must be a permutation of Z0, Z1, Z0Z1, X0X1, Y0Y1, got {}",
            ordering.iter().join(", ")
        )));
    }
    Ok(())
}

/// `<HF|Z0Z1|HF>` on `|01>`.
fn hf_z0z1() -> f64 {
    let hf = 0b01usize;
    if (hf & 1) ^ (hf >> 1 & 1) == 1 { -1.0 } else { 1.0 }
}

/// Controlled `U_Trot(t)` on three qubits. The identity coefficient, plus the
/// substituted `Z0Z1` term if requested, becomes one ancilla phase.
pub fn trotter_circuit(h: &TwoQubitHamiltonian, t: f64, spec: &TrotterSpec) -> Result<Circuit> {
    if spec.rho == 0 {
        return Err(Error::invalid("rho must be at least 1"));
    }
    check_ordering(&spec.ordering)?;
    let mut constant = h.coefficient(TermLabel::I);
    if spec.substitute_z0z1 {
        constant += h.coefficient(TermLabel::Z0Z1) * hf_z0z1();
    }
    let mut c = Circuit::new(3);
    c.push(ancilla_phase(constant * t))?;
    let step = t / spec.rho as f64;
    for _ in 0..spec.rho {
        for &label in &spec.ordering {
            if spec.substitute_z0z1 && label == TermLabel::Z0Z1 {
                continue;
            }
            c.append(&controlled_term(label, h.coefficient(label) * step)?)?;
        }
    }
    Ok(c)
}

/// Trotter circuit for a general operator, which must fit the six-term template.
pub fn trotter_circuit_for(op: &QubitOperator, t: f64, spec: &TrotterSpec) -> Result<Circuit> {
    trotter_circuit(&TwoQubitHamiltonian::from_operator(op)?, t, spec)
}

fn term_matrix(label: TermLabel) -> CMatrix {
    QubitOperator::from_labels([(label.pauli_label(), 1.0)])
        .expect("static label")
        .to_dense(2)
        .expect("two qubits")
}

/// Dense register propagator `e^{-i g0 t} (prod_gamma e^{-i g_gamma H_gamma t/rho})^rho`,
/// the first term of `ordering` acting first.
pub fn trotter_unitary(h: &TwoQubitHamiltonian, t: f64, ordering: &[TermLabel; 5], rho: u32) -> Result<CMatrix> {
    check_ordering(ordering)?;
    let step_t = t / rho as f64;
    let mut step = CMatrix::identity(4, 4);
    for &label in ordering {
        step = propagator(&(term_matrix(label) * C64::new(h.coefficient(label), 0.0)), step_t)? * step;
    }
    Ok(matrix_power(&step, rho as u64) * C64::from_polar(1.0, -h.coefficient(TermLabel::I) * t))
}

pub fn exact_unitary(h: &TwoQubitHamiltonian, t: f64) -> Result<CMatrix> {
    propagator(&h.to_dense(), t)
}

/// `||U_Trot - e^{-iHt}||` in the spectral norm.
pub fn operator_norm_error(h: &TwoQubitHamiltonian, t: f64, ordering: &[TermLabel; 5], rho: u32) -> Result<f64> {
    Ok(operator_norm(&(trotter_unitary(h, t, ordering, rho)? - exact_unitary(h, t)?)))
}

/// `|arg(lambda) + E0 t|` (wrapped) for the eigenvalue of `U_Trot` whose
/// eigenvector overlaps the exact ground state most.
pub fn eigenphase_error(h: &TwoQubitHamiltonian, t: f64, ordering: &[TermLabel; 5], rho: u32) -> Result<f64> {
    let (energies, states) = hermitian_eigen(&h.to_dense())?;
    let ground = states.column(0);
    let (lambdas, vectors) = normal_eigen(&trotter_unitary(h, t, ordering, rho)?);
    let best = (0..lambdas.len())
        .max_by(|&a, &b| {
            let oa = vectors.column(a).dotc(&ground).norm();
            let ob = vectors.column(b).dotc(&ground).norm();
            oa.total_cmp(&ob)
        })
        .expect("four eigenvalues");
    Ok(wrap_angle(lambdas[best].arg() + energies[0] * t).abs())
}

/// Single-step eigenphase error of every ordering, in lexicographic order of
/// [`TermLabel::NON_IDENTITY`] indices.
pub fn ordering_scores(h: &TwoQubitHamiltonian, t0: f64) -> Result<Vec<([TermLabel; 5], f64)>> {
    TermLabel::NON_IDENTITY
        .into_iter()
        .permutations(5)
        .map(|p| {
            let ordering: [TermLabel; 5] = p.try_into().expect("five labels");
            Ok((ordering, eigenphase_error(h, t0, &ordering, 1)?))
        })
        .collect()
}

/// Brute force over all 120 orderings; near-ties go to the lexicographically first.
pub fn optimize_ordering(h: &TwoQubitHamiltonian, t0: f64) -> Result<([TermLabel; 5], f64)> {
    let scores = ordering_scores(h, t0)?;
    let mut best = scores[0];
    for &(o, s) in &scores[1..] {
        if s < best.1 - ORDERING_TIE {
            best = (o, s);
        }
    }
    Ok(best)
}

/// Least-squares slope of `ln(err)` against `ln(rho)`.
pub fn log_log_slope(rhos: &[u32], errors: &[f64]) -> f64 {
    let xs: Vec<f64> = rhos.iter().map(|&r| (r as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chemistry::H2Model;
    use crate::linalg::{distance_up_to_phase, max_abs_diff};
    use crate::pea::gates::controlled_unitary;
    use crate::pea::default_t0;

    fn h(r: f64) -> TwoQubitHamiltonian {
        H2Model::at(r).unwrap().hamiltonian
    }

    #[test]
    fn circuit_matches_dense_trotter_product() {
        let h = h(0.75);
        let t = default_t0(&h);
        for rho in [1, 3] {
            for ordering in [TermLabel::NON_IDENTITY, [TermLabel::Y0Y1, TermLabel::Z1, TermLabel::X0X1, TermLabel::Z0Z1, TermLabel::Z0]] {
                let spec = TrotterSpec { rho, ordering, ..TrotterSpec::new(t) };
                let u = trotter_circuit(&h, t, &spec).unwrap().unitary();
                let oracle = controlled_unitary(&trotter_unitary(&h, t, &ordering, rho).unwrap());
                let ph = u[(0, 0)];
                assert!(max_abs_diff(&(u * ph.conj()), &oracle) < 1e-10);
            }
        }
    }

    #[test]
    fn diagonal_hamiltonian_is_exact_for_any_rho() {
        let h = TwoQubitHamiltonian::new([-0.3, 0.2, -0.4, 0.1, 0.0, 0.0]);
        for rho in [1, 2, 5] {
            let spec = TrotterSpec { rho, ..TrotterSpec::new(1.3) };
            let u = trotter_circuit(&h, 1.3, &spec).unwrap().unitary();
            let oracle = controlled_unitary(&exact_unitary(&h, 1.3).unwrap());
            assert!(distance_up_to_phase(&u, &oracle) < 1e-10);
        }
    }

    #[test]
    fn substituted_z0z1_agrees_on_the_hf_sector() {
        let h = h(1.1);
        let t = 0.9;
        let a = trotter_circuit(&h, t, &TrotterSpec::new(t)).unwrap().unitary();
        let b = trotter_circuit(&h, t, &TrotterSpec { substitute_z0z1: true, ..TrotterSpec::new(t) }).unwrap().unitary();
        let pa = a[(0, 0)].conj();
        let pb = b[(0, 0)].conj();
        for &i in &[1usize, 2, 5, 6] {
            for &j in &[1usize, 2, 5, 6] {
                assert!((a[(i, j)] * pa - b[(i, j)] * pb).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn operator_norm_error_is_first_order() {
        let h = h(0.75);
        let t = default_t0(&h);
        let rhos = [1u32, 2, 4, 8, 16];
        let errs: Vec<f64> = rhos.iter().map(|&r| operator_norm_error(&h, t, &TermLabel::NON_IDENTITY, r).unwrap()).collect();
        for w in errs.windows(2) {
            let ratio = w[1] / w[0];
            assert!((0.4..=0.6).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn single_step_eigenphase_error_depends_on_ordering() {
        let h = h(0.75);
        let scores = ordering_scores(&h, default_t0(&h)).unwrap();
        assert_eq!(scores.len(), 120);
        let lo = scores.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
        let hi = scores.iter().map(|s| s.1).fold(0.0, f64::max);
        assert!(lo > 0.0);
        assert!(hi > 2.0 * lo);
    }

    #[test]
    fn optimizer_is_exhaustive_minimum() {
        let h = h(1.2);
        let t0 = default_t0(&h);
        let (best, score) = optimize_ordering(&h, t0).unwrap();
        for (o, s) in ordering_scores(&h, t0).unwrap() {
            assert!(score <= s + ORDERING_TIE, "{o:?}");
        }
        assert!((eigenphase_error(&h, t0, &best, 1).unwrap() - score).abs() < 1e-15);
    }

    #[test]
    fn diagonal_hamiltonian_ties_pick_first_ordering() {
        let h = TwoQubitHamiltonian::new([-0.3, 0.2, -0.4, 0.1, 0.0, 0.0]);
        let (best, score) = optimize_ordering(&h, 1.0).unwrap();
        assert_eq!(best, TermLabel::NON_IDENTITY);
        assert!(score < ORDERING_TIE);
    }

    #[test]
    fn ordering_validation() {
        let bad = [TermLabel::Z0, TermLabel::Z0, TermLabel::Z0Z1, TermLabel::X0X1, TermLabel::Y0Y1];
        assert!(check_ordering(&bad).is_err());
        let spec = TrotterSpec { ordering: bad, ..TrotterSpec::new(1.0) };
        assert!(spec.validate().is_err());
        assert!(TrotterSpec { bits: 25, ..TrotterSpec::new(1.0) }.validate().is_err());
        assert!(TrotterSpec { reps: Shots::Count(0), ..TrotterSpec::new(1.0) }.validate().is_err());
        assert!(TrotterSpec::new(1.0).validate().is_ok());
    }

    #[test]
    fn slope_of_power_law() {
        let rhos = [1u32, 2, 4, 8];
        let errs: Vec<f64> = rhos.iter().map(|&r| 0.3 / r as f64).collect();
        assert!((log_log_slope(&rhos, &errs) + 1.0).abs() < 1e-12);
    }
}
