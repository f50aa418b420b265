use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::hamiltonian::TermLabel;
use crate::simulator::{Circuit, Gate};
use crate::{Error, Result};

/// Relabeling of the Bravyi-Kitaev register by X on some qubits. Each gauge
/// prepares `X_f |psi(theta)>` and measures the same observables, so
/// per-term results differ only by known signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gauge {
    Neither,
    FlipQ0,
    FlipQ1,
    Both,
}

impl Gauge {
    pub const ALL: [Gauge; 4] = [Gauge::Neither, Gauge::FlipQ0, Gauge::FlipQ1, Gauge::Both];

    /// `(q0 flipped, q1 flipped)`.
    pub fn flips(self) -> (bool, bool) {
        match self {
            Gauge::Neither => (false, false),
            Gauge::FlipQ0 => (true, false),
            Gauge::FlipQ1 => (false, true),
            Gauge::Both => (true, true),
        }
    }

    /// `X_f H_gamma X_f = sign * H_gamma`.
    pub fn sign(self, term: TermLabel) -> f64 {
        let (f0, f1) = self.flips();
        let s = |b: bool| if b { -1.0 } else { 1.0 };
        match term {
            TermLabel::I | TermLabel::X0X1 => 1.0,
            TermLabel::Z0 => s(f0),
            TermLabel::Z1 => s(f1),
            TermLabel::Z0Z1 | TermLabel::Y0Y1 => s(f0) * s(f1),
        }
    }

    /// Basis index of the gauge's Hartree-Fock state.
    pub fn hartree_fock_index(self) -> usize {
        let (f0, f1) = self.flips();
        (0b01 ^ f0 as usize) | ((f1 as usize) << 1)
    }

    pub fn name(self) -> &'static str {
        match self {
            Gauge::Neither => "neither",
            Gauge::FlipQ0 => "flip_q0",
            Gauge::FlipQ1 => "flip_q1",
            Gauge::Both => "both",
        }
    }
}

impl fmt::Display for Gauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Gauge {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Gauge::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown gauge {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnsatzConfig {
    pub theta: f64,
    pub gauge: Gauge,
}

impl AnsatzConfig {
    pub fn new(theta: f64, gauge: Gauge) -> Result<Self> {
        if !(-PI..PI).contains(&theta) {
            return Err(Error::invalid(format!("theta = {theta} outside [-pi, pi)")));
        }
        Ok(AnsatzConfig { theta, gauge })
    }

    /// Wrap any finite angle into `[-pi, pi)` first.
    pub fn wrapped(theta: f64, gauge: Gauge) -> Self {
        let t = (theta + PI).rem_euclid(2.0 * PI) - PI;
        AnsatzConfig { theta: t, gauge }
    }
}

/// CNOT from `control` to `target` as `Ry_t(-pi/2) CZ(pi) Ry_t(pi/2)`.
pub fn cnot_gates(control: usize, target: usize) -> [Gate; 3] {
    [Gate::ry(target, -PI / 2.0), Gate::cz(control, target, PI), Gate::ry(target, PI / 2.0)]
}

/// `exp(-i theta X0 Y1)` compiled to `{Rx, Ry, Rz, CZ(pi)}`: rotate `X0 -> Z0`
/// and `Y1 -> Z1`, apply `exp(-i theta Z0 Z1)` as CNOT, `Rz(2 theta)`, CNOT,
/// then rotate back.
pub fn exp_x0y1_gates(theta: f64) -> Vec<Gate> {
    let mut g = vec![Gate::ry(0, -PI / 2.0), Gate::rx(1, PI / 2.0)];
    g.extend(cnot_gates(0, 1));
    g.push(Gate::rz(1, 2.0 * theta));
    g.extend(cnot_gates(0, 1));
    g.extend([Gate::ry(0, PI / 2.0), Gate::rx(1, -PI / 2.0)]);
    g
}

/// Gauge Hartree-Fock preparation followed by the UCC rotation. In the
/// standard gauge the output is `cos(theta)|01> + sin(theta)|10>` up to a
/// global phase.
pub fn build_ansatz_circuit(cfg: &AnsatzConfig) -> Circuit {
    let (f0, f1) = cfg.gauge.flips();
    let mut c = Circuit::new(2);
    // |00> -> |01> needs X on q0, unless the gauge flips it back
    if !f0 {
        c.push(Gate::rx(0, PI)).expect("valid");
    }
    if f1 {
        c.push(Gate::rx(1, PI)).expect("valid");
    }
    // X1 Y1 X1 = -Y1, so flipping q1 reverses the rotation sense
    let theta = if f1 { -cfg.theta } else { cfg.theta };
    c.extend(exp_x0y1_gates(theta)).expect("valid");
    c
}
