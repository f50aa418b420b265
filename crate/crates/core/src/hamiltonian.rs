//! The six-term two-qubit effective Hamiltonian
//! `g0 I + g1 Z0 + g2 Z1 + g3 Z0Z1 + g4 X0X1 + g5 Y0Y1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::pauli::{parse_key, PauliKey, QubitOperator};
use crate::{CMatrix, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TermLabel {
    I,
    Z0,
    Z1,
    Z0Z1,
    X0X1,
    Y0Y1,
}

impl TermLabel {
    pub const ALL: [TermLabel; 6] = [
        TermLabel::I,
        TermLabel::Z0,
        TermLabel::Z1,
        TermLabel::Z0Z1,
        TermLabel::X0X1,
        TermLabel::Y0Y1,
    ];

    /// The five terms that need a circuit.
    pub const NON_IDENTITY: [TermLabel; 5] =
        [TermLabel::Z0, TermLabel::Z1, TermLabel::Z0Z1, TermLabel::X0X1, TermLabel::Y0Y1];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn pauli_label(self) -> &'static str {
        match self {
            TermLabel::I => "I",
            TermLabel::Z0 => "Z0",
            TermLabel::Z1 => "Z1",
            TermLabel::Z0Z1 => "Z0 Z1",
            TermLabel::X0X1 => "X0 X1",
            TermLabel::Y0Y1 => "Y0 Y1",
        }
    }

    pub fn key(self) -> PauliKey {
        parse_key(self.pauli_label()).expect("static label")
    }

    pub fn name(self) -> &'static str {
        match self {
            TermLabel::I => "I",
            TermLabel::Z0 => "Z0",
            TermLabel::Z1 => "Z1",
            TermLabel::Z0Z1 => "Z0Z1",
            TermLabel::X0X1 => "X0X1",
            TermLabel::Y0Y1 => "Y0Y1",
        }
    }
}

impl fmt::Display for TermLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TermLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        TermLabel::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(&compact))
            .ok_or_else(|| Error::Parse(format!("unknown term label {s:?} (expected one of Z0, Z1, Z0Z1, X0X1, Y0Y1)")))
    }
}

/// Coefficients `g[0..6]` in Hartree, ordered as [`TermLabel::ALL`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitHamiltonian {
    pub g: [f64; 6],
}

impl TwoQubitHamiltonian {
    pub fn new(g: [f64; 6]) -> Self {
        TwoQubitHamiltonian { g }
    }

    /// Read the template coefficients off a general operator, rejecting any
    /// term outside it and any complex coefficient.
    pub fn from_operator(op: &QubitOperator) -> Result<Self> {
        let mut g = [0.0; 6];
        for term in op.terms() {
            let key = term.key();
            let label = TermLabel::ALL
                .into_iter()
                .find(|t| t.key() == key)
                .ok_or_else(|| Error::TemplateMismatch(format!("unexpected term {term}")))?;
            if term.coeff.im.abs() > 1e-12 {
                return Err(Error::NonHermitian(term.coeff.im.abs()));
            }
            g[label.index()] = term.coeff.re;
        }
        Ok(TwoQubitHamiltonian { g })
    }

    pub fn coefficient(&self, t: TermLabel) -> f64 {
        self.g[t.index()]
    }

    pub fn to_operator(&self) -> QubitOperator {
        QubitOperator::from_labels(TermLabel::ALL.into_iter().map(|t| (t.pauli_label(), self.g[t.index()])))
            .expect("static labels")
    }

    pub fn to_dense(&self) -> CMatrix {
        self.to_operator().to_dense(2).expect("two-qubit operator")
    }

    /// `sum_gamma g_gamma <H_gamma>` with `exps` ordered as [`TermLabel::ALL`]
    /// (the identity entry is ignored and taken as 1).
    pub fn energy(&self, exps: &[f64; 6]) -> f64 {
        self.g[0] + (1..6).map(|i| self.g[i] * exps[i]).sum::<f64>()
    }

    /// `<01|H|01>`: qubit 0 occupied, qubit 1 empty.
    pub fn hartree_fock_energy(&self) -> f64 {
        self.g[0] - self.g[1] + self.g[2] - self.g[3]
    }

    /// `sum |g|` over all six terms, an upper bound on the spectral radius.
    pub fn coefficient_l1(&self) -> f64 {
        self.g.iter().map(|x| x.abs()).sum()
    }

    /// Dense eigenvalues, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        crate::linalg::hermitian_eigen(&self.to_dense()).expect("real coefficients").0
    }

    pub fn ground_energy(&self) -> f64 {
        self.spectrum()[0]
    }
}
