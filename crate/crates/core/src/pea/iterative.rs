use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::gates::{ancilla_phase, controlled_unitary, ANCILLA};
use super::trotter::{exact_unitary, trotter_circuit, TrotterSpec};
use crate::chemistry::hartree_fock_state;
use crate::exec::{derive_seed, stream_rng};
use crate::hamiltonian::{TermLabel, TwoQubitHamiltonian};
use crate::linalg::hermitian_eigen;
use crate::simulator::{apply_circuit, apply_circuit_noisy, Circuit, DensityMatrix, Gate, NoiseModel, StateVector, Superoperator};
use crate::vqe::Shots;
use crate::{CMatrix, Error, Result};

/// Margin below the aliasing limit used by [`default_t0`].
pub const T0_SAFETY: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeaMode {
    /// Controlled dense `exp(-i H t0)`.
    ExactPropagator,
    /// Gate-level controlled Trotter circuit.
    Trotter,
}

impl PeaMode {
    pub fn name(self) -> &'static str {
        match self {
            PeaMode::ExactPropagator => "exact_propagator",
            PeaMode::Trotter => "trotter",
        }
    }
}

impl fmt::Display for PeaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PeaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact_propagator" => Ok(PeaMode::ExactPropagator),
            "trotter" => Ok(PeaMode::Trotter),
            _ => Err(Error::Parse(format!("unknown PEA mode {s:?}, expected exact_propagator or trotter"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeaOutcome {
    #[serde(rename = "R")]
    pub r_angstrom: f64,
    pub t0: f64,
    pub rho: u32,
    pub ordering: [TermLabel; 5],
    /// `bits[k] = j_k`, most significant first.
    pub bits: Vec<u8>,
    pub p1_per_bit: Vec<f64>,
    pub energy_hartree: f64,
    pub mode: PeaMode,
}

/// `E = -(pi / t0) sum_k j_k / 2^{k+1}`.
pub fn energy_from_bits(bits: &[u8], t0: f64) -> f64 {
    -(PI / t0) * bits.iter().enumerate().map(|(k, &j)| j as f64 / 2f64.powi(k as i32 + 1)).sum::<f64>()
}

/// `0.95 pi / sum |g|`: every eigenphase `E t0` then stays inside `(-pi, pi)`.
pub fn default_t0(h: &TwoQubitHamiltonian) -> f64 {
    T0_SAFETY * PI / h.coefficient_l1()
}

/// Phase already accounted for by the less significant bits `j_l`, `l > k`:
/// `pi sum_{l > k} j_l 2^{k - l}`.
pub fn kickback_phase(bits: &[u8], k: usize) -> f64 {
    PI * (k + 1..bits.len()).map(|l| bits[l] as f64 * 2f64.powi(k as i32 - l as i32)).sum::<f64>()
}

fn check_inputs(h: &TwoQubitHamiltonian, spec: &TrotterSpec) -> Result<()> {
    spec.validate()?;
    let reach = spec.t0 * h.coefficient_l1();
    if reach >= PI {
        return Err(Error::guard(format!(
            "t0 * sum|g| = {reach:.6} >= pi: eigenphases can alias; lower t0 below {:.6}",
            PI / h.coefficient_l1()
        )));
    }
    if h.ground_energy() > 0.0 {
        return Err(Error::guard("ground energy is positive, so its phase leaves (-pi, 0]"));
    }
    let (_, states) = hermitian_eigen(&h.to_dense())?;
    let hf = hartree_fock_state();
    let a0: f64 = states.column(0).iter().zip(hf.amplitudes()).map(|(v, r)| v.conj() * r).sum::<crate::C64>().norm_sqr();
    if a0 <= 0.5 {
        log::warn!("|<0|HF>|^2 = {a0:.4} <= 0.5: majority voting is not guaranteed to find the ground phase");
    }
    Ok(())
}

fn preparation() -> Circuit {
    Circuit::from_gates(3, [Gate::ry(ANCILLA, PI / 2.0), Gate::rx(0, PI)]).expect("three qubits")
}

/// Cancel `phi`, then rotate the X basis onto Z so that outcome 1 is `|->`.
fn readout(phi: f64) -> Circuit {
    Circuit::from_gates(3, [ancilla_phase(phi), Gate::ry(ANCILLA, -PI / 2.0)]).expect("three qubits")
}

fn ancilla_one(p: &[f64]) -> f64 {
    p.iter().enumerate().filter(|(i, _)| i >> ANCILLA & 1 == 1).map(|(_, x)| x).sum::<f64>().clamp(0.0, 1.0)
}

/// `U^{2^m}` for `m = 0..=max` by repeated squaring.
fn doubling_powers(u: &CMatrix, max: usize) -> Vec<CMatrix> {
    let mut out = vec![u.clone()];
    for m in 1..=max {
        let prev = &out[m - 1];
        out.push(prev * prev);
    }
    out
}

enum Engine {
    Pure(Vec<CMatrix>),
    Noisy { powers: Vec<Superoperator>, noise: NoiseModel },
}

impl Engine {
    /// Ancilla `P(1)` for the bit evolved `2^m` times with kickback `phi`.
    fn p1(&self, m: usize, phi: f64, seed: u64) -> Result<f64> {
        match self {
            Engine::Pure(powers) => {
                let psi = apply_circuit(StateVector::zero(3), &preparation())?.apply_matrix(&powers[m])?;
                Ok(ancilla_one(&apply_circuit(psi, &readout(phi))?.probabilities()))
            }
            Engine::Noisy { powers, noise } => {
                let rho = apply_circuit_noisy(DensityMatrix::zero(3), &preparation(), noise, derive_seed(seed, &[0]))?;
                let rho = powers[m].apply(&rho)?;
                let rho = apply_circuit_noisy(rho, &readout(phi), noise, derive_seed(seed, &[1]))?;
                Ok(ancilla_one(&rho.probabilities()))
            }
        }
    }
}

/// Iterative phase estimation with one ancilla.
///
/// Bits are measured from the least significant, `k = b-1`, evolving
/// `2^{k+1} t0`, down to `k = 0`. Before each readout the ancilla is rotated by
/// the kickback phase of the bits already known, so the remaining relative
/// phase is `pi j_k` plus the truncation remainder. Each bit is the majority of
/// `reps` ancilla measurements.
pub fn iterative_pea(
    h: &TwoQubitHamiltonian,
    r_angstrom: f64,
    spec: &TrotterSpec,
    mode: PeaMode,
    noise: Option<&NoiseModel>,
    seed: u64,
) -> Result<PeaOutcome> {
    check_inputs(h, spec)?;
    let b = spec.bits;
    let noise = noise.filter(|n| !n.is_noiseless());
    let engine = match (mode, noise) {
        (PeaMode::ExactPropagator, None) => Engine::Pure(doubling_powers(&controlled_unitary(&exact_unitary(h, spec.t0)?), b)),
        (PeaMode::ExactPropagator, Some(_)) => {
            return Err(Error::invalid("noise needs the gate-level trotter mode"));
        }
        (PeaMode::Trotter, None) => Engine::Pure(doubling_powers(&trotter_circuit(h, spec.t0, spec)?.unitary(), b)),
        (PeaMode::Trotter, Some(n)) => {
            n.validate()?;
            let n = n.clone().with_ancilla(ANCILLA);
            let s = Superoperator::from_noisy_circuit(&trotter_circuit(h, spec.t0, spec)?, &n, derive_seed(seed, &[u64::MAX]))?;
            let mut powers = vec![s];
            for m in 1..=b {
                let p = powers[m - 1].compose(&powers[m - 1]);
                powers.push(p);
            }
            Engine::Noisy { powers, noise: n }
        }
    };

    let mut bits = vec![0u8; b];
    let mut p1_per_bit = vec![0.0; b];
    for k in (0..b).rev() {
        let phi = kickback_phase(&bits, k);
        let p1 = engine.p1(k + 1, phi, derive_seed(seed, &[k as u64, 0]))?;
        let (freq, bit) = match spec.reps {
            Shots::Exact => (p1, p1 > 0.5),
            Shots::Count(n) => {
                let mut rng = stream_rng(seed, &[k as u64, 1]);
                let ones = Binomial::new(n, p1).map_err(|e| Error::invalid(e.to_string()))?.sample(&mut rng);
                (ones as f64 / n as f64, 2 * ones > n)
            }
        };
        p1_per_bit[k] = freq;
        bits[k] = bit as u8;
    }
    Ok(PeaOutcome {
        r_angstrom,
        t0: spec.t0,
        rho: spec.rho,
        ordering: spec.ordering,
        energy_hartree: energy_from_bits(&bits, spec.t0),
        bits,
        p1_per_bit,
        mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chemistry::H2Model;
    use crate::pea::trotter_unitary;
    use crate::C64;

    #[test]
    fn bits_to_energy() {
        assert!((energy_from_bits(&[1, 0], 1.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(energy_from_bits(&[0, 0, 0], 1.3), 0.0);
        assert!((energy_from_bits(&[1, 1, 1, 1], 2.0) + PI / 2.0 * 15.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn exact_propagator_meets_truncation_bound() {
        for r in [0.5, 0.75, 1.5, 2.5] {
            let h = H2Model::at(r).unwrap().hamiltonian;
            let t0 = default_t0(&h);
            for b in 4..=16 {
                let spec = TrotterSpec { bits: b, reps: Shots::Exact, ..TrotterSpec::new(t0) };
                let out = iterative_pea(&h, r, &spec, PeaMode::ExactPropagator, None, 1).unwrap();
                let bound = PI / (t0 * 2f64.powi(b as i32));
                assert!((out.energy_hartree - h.ground_energy()).abs() <= bound, "R = {r}, b = {b}");
            }
        }
    }

    #[test]
    fn three_quarters_identity() {
        let t0 = 1.0;
        let h = TwoQubitHamiltonian::new([-(PI / t0) * 0.75, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let spec = TrotterSpec { bits: 6, ..TrotterSpec::new(t0) };
        let out = iterative_pea(&h, 0.0, &spec, PeaMode::Trotter, None, 0).unwrap();
        assert_eq!(out.bits, vec![1, 1, 0, 0, 0, 0]);
        assert!((out.energy_hartree - h.ground_energy()).abs() < 1e-12);
    }

    #[test]
    fn simulated_p1_matches_analytic_value() {
        let h = H2Model::at(1.55).unwrap().hamiltonian;
        let t0 = default_t0(&h);
        let spec = TrotterSpec { bits: 8, reps: Shots::Exact, ..TrotterSpec::new(t0) };
        let out = iterative_pea(&h, 1.55, &spec, PeaMode::Trotter, None, 0).unwrap();
        let u = trotter_unitary(&h, t0, &spec.ordering, spec.rho).unwrap();
        let hf = hartree_fock_state();
        let v = nalgebra::DVector::from_column_slice(hf.amplitudes());
        for k in 0..spec.bits {
            let uk = crate::linalg::matrix_power(&u, 1 << (k + 1));
            let amp = v.dotc(&(&uk * &v)) * C64::from_polar(1.0, -kickback_phase(&out.bits, k));
            let analytic = (1.0 - amp.re) / 2.0;
            assert!((out.p1_per_bit[k] - analytic).abs() < 1e-8, "bit {k}");
        }
    }

    #[test]
    fn more_reps_never_change_noiseless_bits() {
        let h = H2Model::at(0.75).unwrap().hamiltonian;
        let t0 = default_t0(&h);
        let exact = iterative_pea(&h, 0.75, &TrotterSpec { reps: Shots::Exact, ..TrotterSpec::new(t0) }, PeaMode::ExactPropagator, None, 0).unwrap();
        for reps in [1u64, 1000] {
            let spec = TrotterSpec { reps: Shots::Count(reps), ..TrotterSpec::new(t0) };
            let out = iterative_pea(&h, 0.75, &spec, PeaMode::ExactPropagator, None, 4).unwrap();
            assert!(out.p1_per_bit.iter().all(|p| (0.0..=1.0).contains(p)));
            if reps == 1000 {
                assert_eq!(out.bits, exact.bits);
            }
        }
    }

    #[test]
    fn guards_and_errors() {
        let h = H2Model::at(0.75).unwrap().hamiltonian;
        let too_long = TrotterSpec::new(PI / h.coefficient_l1());
        assert!(matches!(iterative_pea(&h, 0.75, &too_long, PeaMode::ExactPropagator, None, 0), Err(Error::NumericalGuard(_))));
        let t0 = default_t0(&h);
        let zero_reps = TrotterSpec { reps: Shots::Count(0), ..TrotterSpec::new(t0) };
        assert!(iterative_pea(&h, 0.75, &zero_reps, PeaMode::Trotter, None, 0).is_err());
        let many_bits = TrotterSpec { bits: 25, ..TrotterSpec::new(t0) };
        assert!(iterative_pea(&h, 0.75, &many_bits, PeaMode::Trotter, None, 0).is_err());
        let noisy = NoiseModel::overrotation(0.01);
        assert!(iterative_pea(&h, 0.75, &TrotterSpec::new(t0), PeaMode::ExactPropagator, Some(&noisy), 0).is_err());
    }

    #[test]
    fn noisy_trotter_with_trivial_noise_matches_pure() {
        let h = H2Model::at(0.9).unwrap().hamiltonian;
        let t0 = default_t0(&h);
        let spec = TrotterSpec { bits: 6, reps: Shots::Exact, ..TrotterSpec::new(t0) };
        let pure = iterative_pea(&h, 0.9, &spec, PeaMode::Trotter, None, 0).unwrap();
        let mut faint = NoiseModel::noiseless();
        faint.t1 = Some(1e15);
        let noisy = iterative_pea(&h, 0.9, &spec, PeaMode::Trotter, Some(&faint), 0).unwrap();
        assert_eq!(pure.bits, noisy.bits);
        for (a, b) in pure.p1_per_bit.iter().zip(&noisy.p1_per_bit) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn outcome_json_fields() {
        let h = H2Model::at(0.75).unwrap().hamiltonian;
        let out = iterative_pea(&h, 0.75, &TrotterSpec { bits: 3, ..TrotterSpec::new(default_t0(&h)) }, PeaMode::Trotter, None, 0).unwrap();
        let v: serde_json::Value = serde_json::to_value(&out).unwrap();
        for key in ["R", "t0", "rho", "ordering", "bits", "p1_per_bit", "energy_hartree", "mode"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["mode"], "trotter");
        assert!((energy_from_bits(&out.bits, out.t0) - out.energy_hartree).abs() == 0.0);
    }
}
