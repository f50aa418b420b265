use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use super::circuit::{apply_circuit, Circuit};
use super::state::{DensityMatrix, StateVector};
use crate::exec::stream_rng;
use crate::pauli::QuantumState;
use crate::{Error, Result};

/// States that can be rotated by a circuit and read out in the Z basis.
pub trait Measurable: QuantumState {
    fn born_probabilities(&self, basis_change: &Circuit) -> Result<Vec<f64>>;
}

impl Measurable for StateVector {
    fn born_probabilities(&self, basis_change: &Circuit) -> Result<Vec<f64>> {
        Ok(apply_circuit(self.clone(), basis_change)?.probabilities())
    }
}

impl Measurable for DensityMatrix {
    fn born_probabilities(&self, basis_change: &Circuit) -> Result<Vec<f64>> {
        Ok(self.clone().apply_circuit(basis_change)?.probabilities())
    }
}

/// Outcome histogram indexed by basis state (qubit 0 = least-significant bit).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementCounts {
    n_qubits: usize,
    counts: Vec<u64>,
}

impl MeasurementCounts {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn shots(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn count(&self, index: usize) -> u64 {
        self.counts[index]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn frequency(&self, index: usize) -> f64 {
        self.counts[index] as f64 / self.shots() as f64
    }

    /// Nonzero counts keyed by bitstring, most-significant qubit first.
    pub fn to_bitstrings(&self) -> BTreeMap<String, u64> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (format!("{:0width$b}", i, width = self.n_qubits), c))
            .collect()
    }

    /// Sample mean of `prod_q Z_q` over `qubits`.
    pub fn z_expectation(&self, qubits: &[usize]) -> f64 {
        let mask = qubits.iter().fold(0usize, |m, &q| m | (1 << q));
        let signed: i64 = self
            .counts
            .iter()
            .enumerate()
            .map(|(i, &c)| if (i & mask).count_ones() % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum();
        signed as f64 / self.shots() as f64
    }

    /// Binomial standard error of `z_expectation`, `sqrt((1 - m^2) / shots)`.
    pub fn z_stderr(&self, qubits: &[usize]) -> f64 {
        let m = self.z_expectation(qubits);
        ((1.0 - m * m).max(0.0) / self.shots() as f64).sqrt()
    }
}

/// Multinomial draw as a chain of conditional binomials.
pub fn sample_multinomial<R: Rng>(probs: &[f64], shots: u64, rng: &mut R) -> Vec<u64> {
    let total: f64 = probs.iter().map(|p| p.max(0.0)).sum();
    let mut remaining = shots;
    let mut mass = total;
    let mut out = vec![0u64; probs.len()];
    for (i, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let p = p.max(0.0);
        if i + 1 == probs.len() || mass <= 0.0 {
            out[i] = remaining;
            break;
        }
        let q = (p / mass).clamp(0.0, 1.0);
        let k = Binomial::new(remaining, q).expect("probability in [0,1]").sample(rng);
        out[i] = k;
        remaining -= k;
        mass -= p;
    }
    out
}

/// Apply `basis_change`, then draw `shots` Z-basis outcomes.
pub fn sample_pauli<S: Measurable + ?Sized>(state: &S, basis_change: &Circuit, shots: u64, seed: u64) -> Result<MeasurementCounts> {
    if shots == 0 {
        return Err(Error::invalid("shots must be at least 1"));
    }
    let probs = state.born_probabilities(basis_change)?;
    let mut rng = stream_rng(seed, &[0x7368_6f74]);
    Ok(MeasurementCounts {
        n_qubits: state.n_qubits(),
        counts: sample_multinomial(&probs, shots, &mut rng),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::Gate;
    use crate::C64;

    #[test]
    fn zero_state_always_reads_zero() {
        let c = sample_pauli(&StateVector::zero(1), &Circuit::new(1), 777, 3).unwrap();
        assert_eq!(c.count(0), 777);
        assert_eq!(c.to_bitstrings().into_iter().collect::<Vec<_>>(), vec![("0".to_string(), 777)]);
    }

    #[test]
    fn plus_state_is_balanced() {
        let plus = StateVector::from_amplitudes(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]).unwrap();
        let c = sample_pauli(&plus, &Circuit::new(1), 10_000, 42).unwrap();
        assert!((c.frequency(0) - 0.5).abs() < 0.02);
    }

    #[test]
    fn same_seed_same_counts() {
        let psi = crate::simulator::random_state(3, 1);
        let basis = Circuit::from_gates(3, [Gate::ry(0, 1.0)]).unwrap();
        let a = sample_pauli(&psi, &basis, 5000, 9).unwrap();
        let b = sample_pauli(&psi, &basis, 5000, 9).unwrap();
        let c = sample_pauli(&psi, &basis, 5000, 10).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.shots(), 5000);
    }

    #[test]
    fn zero_shots_rejected() {
        assert!(sample_pauli(&StateVector::zero(1), &Circuit::new(1), 0, 0).is_err());
    }

    #[test]
    fn density_and_pure_agree_in_distribution() {
        let psi = crate::simulator::random_state(2, 8);
        let basis = Circuit::from_gates(2, [Gate::rx(1, 0.5)]).unwrap();
        let a = sample_pauli(&psi, &basis, 1000, 1).unwrap();
        let b = sample_pauli(&psi.to_density(), &basis, 1000, 1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn z_string_estimator_is_unbiased() {
        // mean over many seeds converges to the exact value well inside 4 sigma
        let psi = crate::simulator::random_state(2, 4);
        let exact = {
            let p = psi.probabilities();
            p[0] - p[1] - p[2] + p[3]
        };
        let runs = 200;
        let shots = 500;
        let mean: f64 = (0..runs)
            .map(|s| sample_pauli(&psi, &Circuit::new(2), shots, s).unwrap().z_expectation(&[0, 1]))
            .sum::<f64>()
            / runs as f64;
        let sigma = ((1.0 - exact * exact) / (shots * runs) as f64).sqrt();
        assert!((mean - exact).abs() < 4.0 * sigma + 1e-12);
    }
}
