//! Variational eigensolver with the one-parameter UCC ansatz
//! `exp(-i theta X0 Y1)|01>`: term-wise partial tomography, theta scans,
//! gauge averaging and minimization.

mod ansatz;
mod estimate;
mod scan;

pub use ansatz::{build_ansatz_circuit, cnot_gates, exp_x0y1_gates, AnsatzConfig, Gauge};
pub use estimate::{estimate_energy, estimate_point, EnergySurfacePoint, EstimateOptions, Shots, TermEstimate};
pub use scan::{
    averaged_energy, find_minimum, gauge_average, golden_section, noise_study_point, refine_from, run_vqe, scan_theta,
    theta_grid, AveragedPoint, HasEnergy, NoiseStudyRow, VqeMinimum, VqeRun, VqeSettings, THETA_TOLERANCE,
};
