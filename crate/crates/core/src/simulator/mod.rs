//! Pure-state and density-matrix simulation of the native gate set
//! `{Rx, Ry, Rz, CZ(phi), CRz}`, Z-basis shot sampling and a per-gate noise
//! model.

mod circuit;
mod gate;
mod noise;
mod sampling;
mod state;

pub use circuit::{apply_circuit, Circuit};
pub use gate::{apply_gate, Gate, GateKind};
pub use noise::{
    amplitude_damping_kraus, apply_circuit_noisy, depolarizing_kraus, phase_damping_kraus, NoiseModel, Superoperator,
    CZ_NATIVE_RANGE,
};
pub use sampling::{sample_multinomial, sample_pauli, Measurable, MeasurementCounts};
pub use state::{DensityMatrix, StateVector};

use rand_distr::{Distribution, StandardNormal};

use crate::C64;

/// Haar-like random state from a seed, handy for tests and benches.
pub fn random_state(n_qubits: usize, seed: u64) -> StateVector {
    let mut rng = crate::exec::stream_rng(seed, &[0x0073_7461_7465]);
    let amps = (0..1usize << n_qubits)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            C64::new(re, im)
        })
        .collect();
    StateVector::from_amplitudes(amps).expect("nonzero Gaussian vector")
}
