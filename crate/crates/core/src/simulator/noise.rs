use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::circuit::Circuit;
use super::gate::{Gate, GateKind};
use super::state::{DensityMatrix, Mat2};
use crate::exec::stream_rng;
use crate::pauli::{Pauli, QuantumState};
use crate::{CMatrix, Error, Result, C64};

/// Hardware-calibrated range of a single physical CZ(phi).
pub const CZ_NATIVE_RANGE: (f64, f64) = (0.25, 5.0);

/// Per-gate noise model.
///
/// After each gate the model applies, in order: the gate unitary with its
/// angle scaled by `1 + overrotation` (plus optional Gaussian jitter), then
/// amplitude and phase damping on every qubit for the gate's duration, then
/// single-qubit depolarizing on the gate's targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseModel {
    /// Energy relaxation time in gate-duration units; `None` is infinite.
    pub t1: Option<f64>,
    /// Dephasing time; must satisfy `t2 <= 2 t1`. `None` means no dephasing
    /// beyond what relaxation implies.
    pub t2: Option<f64>,
    pub duration_1q: f64,
    pub duration_2q: f64,
    /// Fractional systematic scaling applied to every gate angle.
    pub overrotation: f64,
    pub depolarizing_1q: f64,
    pub depolarizing_2q: f64,
    /// Standard deviation (radians) of a random angle error per gate.
    pub angle_jitter: f64,
    /// Compile CZ(phi) outside the native range as CZ(pi) followed by CZ(phi - pi).
    pub split_cz: bool,
    /// Extra Rz on the ancilla after every two-qubit gate touching it.
    pub ancilla_phase_error: f64,
    #[serde(skip)]
    ancilla: Option<usize>,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel {
            t1: None,
            t2: None,
            duration_1q: 1.0,
            duration_2q: 2.0,
            overrotation: 0.0,
            depolarizing_1q: 0.0,
            depolarizing_2q: 0.0,
            angle_jitter: 0.0,
            split_cz: false,
            ancilla_phase_error: 0.0,
            ancilla: None,
        }
    }
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        Self::default()
    }

    pub fn overrotation(eps: f64) -> Self {
        NoiseModel {
            overrotation: eps,
            ..Self::default()
        }
    }

    /// Mark which qubit receives `ancilla_phase_error`.
    pub fn with_ancilla(mut self, q: usize) -> Self {
        self.ancilla = Some(q);
        self
    }

    pub fn ancilla(&self) -> Option<usize> {
        self.ancilla
    }

    pub fn is_noiseless(&self) -> bool {
        self.t1.is_none()
            && self.t2.is_none()
            && self.overrotation == 0.0
            && self.depolarizing_1q == 0.0
            && self.depolarizing_2q == 0.0
            && self.angle_jitter == 0.0
            && !self.split_cz
            && self.ancilla_phase_error == 0.0
    }

    /// Whether repeated runs of the same circuit can differ.
    pub fn is_stochastic(&self) -> bool {
        self.angle_jitter > 0.0
    }

    pub fn validate(&self) -> Result<()> {
        for (name, t) in [("t1", self.t1), ("t2", self.t2)] {
            if let Some(t) = t {
                if !(t > 0.0) {
                    return Err(Error::invalid(format!("noise.{name} must be positive, got {t}")));
                }
            }
        }
        if let (Some(t1), Some(t2)) = (self.t1, self.t2) {
            if t2 > 2.0 * t1 {
                return Err(Error::invalid(format!("noise.t2 = {t2} exceeds 2 * t1 = {}", 2.0 * t1)));
            }
        }
        for (name, d) in [("duration_1q", self.duration_1q), ("duration_2q", self.duration_2q)] {
            if !(d >= 0.0 && d.is_finite()) {
                return Err(Error::invalid(format!("noise.{name} must be finite and >= 0, got {d}")));
            }
        }
        for (name, p) in [("depolarizing_1q", self.depolarizing_1q), ("depolarizing_2q", self.depolarizing_2q)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid(format!("noise.{name} must lie in [0, 1], got {p}")));
            }
        }
        if !(self.angle_jitter >= 0.0 && self.angle_jitter.is_finite()) {
            return Err(Error::invalid("noise.angle_jitter must be finite and >= 0"));
        }
        if !self.overrotation.is_finite() || !self.ancilla_phase_error.is_finite() {
            return Err(Error::invalid("noise angles must be finite"));
        }
        Ok(())
    }

    /// Amplitude-damping probability and phase-damping parameter for `duration`.
    fn damping(&self, duration: f64) -> (f64, f64) {
        let gamma1 = self.t1.map_or(0.0, |t| 1.0 / t);
        let gamma2 = self.t2.map_or(0.0, |t| 1.0 / t);
        // pure dephasing rate; amplitude damping already contributes gamma1 / 2
        let gamma_phi = (gamma2 - gamma1 / 2.0).max(0.0);
        let p = 1.0 - (-duration * gamma1).exp();
        let lambda = 1.0 - (-2.0 * duration * gamma_phi).exp();
        (p, lambda)
    }

    /// Gates actually executed for one logical gate.
    fn compile(&self, gate: &Gate) -> Vec<Gate> {
        if self.split_cz && gate.kind == GateKind::CZ {
            let phi = gate.angle.rem_euclid(2.0 * PI);
            let (lo, hi) = CZ_NATIVE_RANGE;
            if phi != 0.0 && (phi < lo || phi > hi) {
                return vec![gate.with_angle(PI), gate.with_angle((phi - PI).rem_euclid(2.0 * PI))];
            }
        }
        vec![gate.clone()]
    }
}

pub fn amplitude_damping_kraus(p: f64) -> [Mat2; 2] {
    let z = C64::new(0.0, 0.0);
    let r = |x: f64| C64::new(x, 0.0);
    [[[r(1.0), z], [z, r((1.0 - p).sqrt())]], [[z, r(p.sqrt())], [z, z]]]
}

pub fn phase_damping_kraus(lambda: f64) -> [Mat2; 2] {
    let z = C64::new(0.0, 0.0);
    let r = |x: f64| C64::new(x, 0.0);
    [[[r(1.0), z], [z, r((1.0 - lambda).sqrt())]], [[z, z], [z, r(lambda.sqrt())]]]
}

/// `rho -> (1 - p) rho + p I/2`.
pub fn depolarizing_kraus(p: f64) -> [Mat2; 4] {
    let scale = |m: [[C64; 2]; 2], s: f64| [[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]];
    let id = [[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]];
    [
        scale(id, (1.0 - 0.75 * p).sqrt()),
        scale(Pauli::X.matrix(), (p / 4.0).sqrt()),
        scale(Pauli::Y.matrix(), (p / 4.0).sqrt()),
        scale(Pauli::Z.matrix(), (p / 4.0).sqrt()),
    ]
}

impl DensityMatrix {
    /// Ideal `rho -> U rho U^dagger`.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits())?;
        self.apply_unchecked(gate);
        Ok(())
    }

    fn apply_unchecked(&mut self, gate: &Gate) {
        match gate.kind.arity() {
            1 => self.conjugate_1q(gate.targets[0], &Gate::single_qubit_matrix(gate.kind, gate.angle)),
            _ => self.conjugate_diag_2q(
                gate.targets[0],
                gate.targets[1],
                &Gate::two_qubit_diagonal(gate.kind, gate.angle),
            ),
        }
    }

    pub fn apply_circuit(mut self, circuit: &Circuit) -> Result<DensityMatrix> {
        check_dims(self.n_qubits(), circuit)?;
        for g in circuit.gates() {
            self.apply_unchecked(g);
        }
        Ok(self)
    }
}

fn check_dims(n: usize, circuit: &Circuit) -> Result<()> {
    if n != circuit.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: circuit.n_qubits(),
            found: n,
        });
    }
    Ok(())
}

fn noisy_step<R: Rng>(rho: &mut DensityMatrix, gate: &Gate, noise: &NoiseModel, jitter: Option<&Normal<f64>>, rng: &mut R) {
    let n = rho.n_qubits();
    let mut angle = gate.angle * (1.0 + noise.overrotation);
    if let Some(dist) = jitter {
        angle += dist.sample(rng);
    }
    rho.apply_unchecked(&gate.with_angle(angle));

    let two_qubit = gate.kind.arity() == 2;
    let duration = if two_qubit { noise.duration_2q } else { noise.duration_1q };
    let (p, lambda) = noise.damping(duration);
    for q in 0..n {
        if p > 0.0 {
            rho.apply_kraus_1q(q, &amplitude_damping_kraus(p));
        }
        if lambda > 0.0 {
            rho.apply_kraus_1q(q, &phase_damping_kraus(lambda));
        }
    }
    let depol = if two_qubit { noise.depolarizing_2q } else { noise.depolarizing_1q };
    if depol > 0.0 {
        for &q in &gate.targets {
            rho.apply_kraus_1q(q, &depolarizing_kraus(depol));
        }
    }
    if let Some(a) = noise.ancilla {
        if two_qubit && noise.ancilla_phase_error != 0.0 && gate.targets.contains(&a) && a < n {
            rho.apply_unchecked(&Gate::rz(a, noise.ancilla_phase_error));
        }
    }
}

/// Run `circuit` on `rho` under `noise`. The seed only matters when the model
/// has angle jitter.
pub fn apply_circuit_noisy(mut rho: DensityMatrix, circuit: &Circuit, noise: &NoiseModel, rng_seed: u64) -> Result<DensityMatrix> {
    check_dims(rho.n_qubits(), circuit)?;
    noise.validate()?;
    let mut rng = stream_rng(rng_seed, &[0x006e_6f69_7365]);
    let jitter = (noise.angle_jitter > 0.0).then(|| Normal::new(0.0, noise.angle_jitter).expect("validated jitter"));
    for g in circuit.gates() {
        for physical in noise.compile(g) {
            noisy_step(&mut rho, &physical, noise, jitter.as_ref(), &mut rng);
        }
    }
    Ok(rho)
}

/// Matrix of the linear map `vec(rho) -> vec(channel(rho))` on the row-major
/// flattening of the density matrix.
#[derive(Debug, Clone)]
pub struct Superoperator {
    n_qubits: usize,
    matrix: CMatrix,
}

impl Superoperator {
    /// Channel of one noisy run of `circuit`. With jitter the sampled angles
    /// are frozen into the map.
    pub fn from_noisy_circuit(circuit: &Circuit, noise: &NoiseModel, rng_seed: u64) -> Result<Self> {
        let n = circuit.n_qubits();
        let dim = 1usize << n;
        let mut matrix = CMatrix::zeros(dim * dim, dim * dim);
        for col in 0..dim * dim {
            let mut rho = DensityMatrix::zero(n);
            rho.data_mut().iter_mut().for_each(|x| *x = C64::new(0.0, 0.0));
            rho.data_mut()[col] = C64::new(1.0, 0.0);
            let out = apply_circuit_noisy(rho, circuit, noise, rng_seed)?;
            for (row, v) in out.data().iter().enumerate() {
                matrix[(row, col)] = *v;
            }
        }
        Ok(Superoperator { n_qubits: n, matrix })
    }

    pub fn power(&self, exp: u64) -> Superoperator {
        Superoperator {
            n_qubits: self.n_qubits,
            matrix: crate::linalg::matrix_power(&self.matrix, exp),
        }
    }

    pub fn compose(&self, first: &Superoperator) -> Superoperator {
        Superoperator {
            n_qubits: self.n_qubits,
            matrix: &self.matrix * &first.matrix,
        }
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: rho.n_qubits(),
            });
        }
        let v = &self.matrix * nalgebra::DVector::from_column_slice(rho.data());
        let mut out = rho.clone();
        out.data_mut().copy_from_slice(v.as_slice());
        Ok(out)
    }
}
