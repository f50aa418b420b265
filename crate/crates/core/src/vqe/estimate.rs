use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ansatz::{build_ansatz_circuit, AnsatzConfig, Gauge};
use crate::exec::{derive_seed, stream_rng};
use crate::hamiltonian::{TermLabel, TwoQubitHamiltonian};
use crate::pauli::QubitOperator;
use crate::simulator::{apply_circuit, apply_circuit_noisy, sample_multinomial, Circuit, DensityMatrix, Gate, NoiseModel, StateVector};
use crate::{Error, Result};

/// Number of measurement repetitions per setting, or exact expectation values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Shots {
    #[default]
    Exact,
    Count(u64),
}

impl fmt::Display for Shots {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shots::Exact => f.write_str("exact"),
            Shots::Count(n) => write!(f, "{n}"),
        }
    }
}

impl FromStr for Shots {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("exact") {
            return Ok(Shots::Exact);
        }
        match s.parse::<u64>() {
            Ok(0) => Err(Error::invalid("shots must be at least 1")),
            Ok(n) => Ok(Shots::Count(n)),
            Err(_) => Err(Error::Parse(format!("shots must be \"exact\" or a positive integer, got {s:?}"))),
        }
    }
}

impl Serialize for Shots {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Shots::Exact => s.serialize_str("exact"),
            Shots::Count(n) => s.serialize_u64(*n),
        }
    }
}

impl<'de> Deserialize<'de> for Shots {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(0) => Err(serde::de::Error::custom("shots must be at least 1")),
            Raw::N(n) => Ok(Shots::Count(n)),
            Raw::S(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EstimateOptions {
    pub shots: Shots,
    pub noise: Option<NoiseModel>,
    pub seed: u64,
    /// Use the Hartree-Fock value of `Z0Z1` instead of measuring it; the
    /// term commutes with the rest of the Hamiltonian.
    pub substitute_z0z1: bool,
}

/// Measured mean and binomial standard error of one term.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TermEstimate {
    pub mean: f64,
    pub stderr: f64,
}

/// One evaluation of the ansatz energy.
///
/// `terms` holds raw expectations in the gauge's own frame, ordered as
/// [`TermLabel::NON_IDENTITY`]; `energy` is `g0 + sum_gamma g_gamma s_gamma <H_gamma>`
/// with the gauge signs `s_gamma`, i.e. the physical energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergySurfacePoint {
    pub r_angstrom: f64,
    pub theta: f64,
    pub gauge: Gauge,
    pub terms: [TermEstimate; 5],
    pub energy: f64,
    pub stderr: f64,
}

impl EnergySurfacePoint {
    /// Expectations with gauge signs removed, ordered as [`TermLabel::NON_IDENTITY`].
    pub fn corrected(&self) -> [f64; 5] {
        let mut out = [0.0; 5];
        for (k, t) in TermLabel::NON_IDENTITY.into_iter().enumerate() {
            out[k] = self.gauge.sign(t) * self.terms[k].mean;
        }
        out
    }

    /// Recombine stored expectations into `(energy, stderr)`.
    pub fn recombine(&self, h: &TwoQubitHamiltonian) -> (f64, f64) {
        combine(h, self.gauge, &self.terms)
    }
}

fn combine(h: &TwoQubitHamiltonian, gauge: Gauge, terms: &[TermEstimate; 5]) -> (f64, f64) {
    let mut e = h.coefficient(TermLabel::I);
    let mut var = 0.0;
    for (k, t) in TermLabel::NON_IDENTITY.into_iter().enumerate() {
        let g = h.coefficient(t) * gauge.sign(t);
        e += g * terms[k].mean;
        var += (g * terms[k].stderr).powi(2);
    }
    (e, var.sqrt())
}

/// Readout settings: computational basis (Z0, Z1, Z0Z1), then X and Y pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Setting {
    Z,
    XX,
    YY,
}

impl Setting {
    pub(crate) const ALL: [Setting; 3] = [Setting::Z, Setting::XX, Setting::YY];

    pub(crate) fn basis_change(self) -> Vec<Gate> {
        match self {
            Setting::Z => vec![],
            // Ry(pi/2) maps X to -Z on each qubit; the signs cancel in the pair
            Setting::XX => vec![Gate::ry(0, PI / 2.0), Gate::ry(1, PI / 2.0)],
            Setting::YY => vec![Gate::rx(0, PI / 2.0), Gate::rx(1, PI / 2.0)],
        }
    }
}

/// `(<Z0>, <Z1>, <Z0Z1>)` of a Z-basis distribution over two qubits.
fn z_moments(p: &[f64]) -> [f64; 3] {
    [p[0] - p[1] + p[2] - p[3], p[0] + p[1] - p[2] - p[3], p[0] - p[1] - p[2] + p[3]]
}

fn from_distribution(p: &[f64], shots: Shots, rng_seed: u64) -> [TermEstimate; 3] {
    match shots {
        Shots::Exact => z_moments(p).map(|mean| TermEstimate { mean, stderr: 0.0 }),
        Shots::Count(n) => {
            let mut rng = stream_rng(rng_seed, &[]);
            let counts = sample_multinomial(p, n, &mut rng);
            let freq: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
            z_moments(&freq).map(|mean| TermEstimate {
                mean,
                stderr: ((1.0 - mean * mean).max(0.0) / n as f64).sqrt(),
            })
        }
    }
}

/// Z-basis distribution after the ansatz and one readout setting.
fn distribution(cfg: &AnsatzConfig, setting: Setting, noise: Option<&NoiseModel>, seed: u64, pure: &Option<StateVector>) -> Result<Vec<f64>> {
    let basis = Circuit::from_gates(2, setting.basis_change())?;
    match (noise, pure) {
        (None, Some(psi)) => Ok(apply_circuit(psi.clone(), &basis)?.probabilities()),
        (Some(noise), _) => {
            let mut c = build_ansatz_circuit(cfg);
            c.append(&basis)?;
            let rho = apply_circuit_noisy(DensityMatrix::zero(2), &c, noise, seed)?;
            Ok(rho.probabilities())
        }
        (None, None) => unreachable!("pure state prepared when noise is off"),
    }
}

/// Energy of the ansatz state by term-wise partial tomography.
pub fn estimate_point(cfg: &AnsatzConfig, h: &TwoQubitHamiltonian, r_angstrom: f64, opts: &EstimateOptions) -> Result<EnergySurfacePoint> {
    if let Shots::Count(0) = opts.shots {
        return Err(Error::invalid("shots must be at least 1"));
    }
    let noise = opts.noise.as_ref().filter(|n| !n.is_noiseless());
    let pure = match noise {
        None => Some(apply_circuit(StateVector::zero(2), &build_ansatz_circuit(cfg))?),
        Some(_) => None,
    };
    let mut terms = [TermEstimate::default(); 5];
    for (k, setting) in Setting::ALL.into_iter().enumerate() {
        let noise_seed = derive_seed(opts.seed, &[k as u64, 0]);
        let shot_seed = derive_seed(opts.seed, &[k as u64, 1]);
        let p = distribution(cfg, setting, noise, noise_seed, &pure)?;
        let est = from_distribution(&p, opts.shots, shot_seed);
        match setting {
            Setting::Z => {
                terms[0] = est[0];
                terms[1] = est[1];
                terms[2] = est[2];
            }
            Setting::XX => terms[3] = est[2],
            Setting::YY => terms[4] = est[2],
        }
    }
    if opts.substitute_z0z1 {
        // <Z0Z1> on the gauge's own Hartree-Fock basis state
        let hf = cfg.gauge.hartree_fock_index();
        let parity = (hf & 1) ^ (hf >> 1 & 1);
        terms[2] = TermEstimate {
            mean: if parity == 1 { -1.0 } else { 1.0 },
            stderr: 0.0,
        };
    }
    let (energy, stderr) = combine(h, cfg.gauge, &terms);
    Ok(EnergySurfacePoint {
        r_angstrom,
        theta: cfg.theta,
        gauge: cfg.gauge,
        terms,
        energy,
        stderr,
    })
}

/// As [`estimate_point`] for a general operator, which must fit the
/// six-term template.
pub fn estimate_energy(cfg: &AnsatzConfig, hamiltonian: &QubitOperator, opts: &EstimateOptions) -> Result<EnergySurfacePoint> {
    let h = TwoQubitHamiltonian::from_operator(hamiltonian)?;
    estimate_point(cfg, &h, f64::NAN, opts)
}
