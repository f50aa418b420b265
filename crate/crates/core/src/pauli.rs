//! Exact algebra of multi-qubit Pauli operators.
//!
//! A [`PauliString`] is a coefficient times a tensor product of single-qubit
//! Paulis, with identity factors left implicit. A [`QubitOperator`] is a
//! canonical sum of Pauli strings: like terms are merged, coefficients with
//! magnitude below [`PRUNE_TOLERANCE`] are dropped, and terms are ordered
//! lexicographically by `(qubit index, letter)` with `X < Y < Z`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{CMatrix, Error, Result, C64};

pub const PRUNE_TOLERANCE: f64 = 1e-12;

/// Imaginary residue of an expectation value that is silently discarded.
pub const IMAG_RESIDUE_TOLERANCE: f64 = 1e-10;

const I: C64 = C64::new(0.0, 1.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    /// Product of two single-qubit Paulis: `(phase, result)`, `None` meaning identity.
    pub fn multiply(self, other: Pauli) -> (C64, Option<Pauli>) {
        use Pauli::*;
        match (self, other) {
            (a, b) if a == b => (ONE, None),
            (X, Y) => (I, Some(Z)),
            (Y, Z) => (I, Some(X)),
            (Z, X) => (I, Some(Y)),
            (Y, X) => (-I, Some(Z)),
            (Z, Y) => (-I, Some(X)),
            (X, Z) => (-I, Some(Y)),
            _ => unreachable!(),
        }
    }

    pub fn matrix(self) -> [[C64; 2]; 2] {
        let z = C64::new(0.0, 0.0);
        match self {
            Pauli::X => [[z, ONE], [ONE, z]],
            Pauli::Y => [[z, -I], [I, z]],
            Pauli::Z => [[ONE, z], [z, -ONE]],
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Ordered factor list, the canonical key of a term.
pub type PauliKey = Vec<(usize, Pauli)>;

#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    factors: BTreeMap<usize, Pauli>,
    pub coeff: C64,
}

impl PauliString {
    pub fn new(factors: impl IntoIterator<Item = (usize, Pauli)>, coeff: C64) -> Self {
        let mut s = PauliString::identity(coeff);
        for (q, p) in factors {
            s = s.multiply(&PauliString {
                factors: BTreeMap::from([(q, p)]),
                coeff: ONE,
            });
        }
        s
    }

    pub fn identity(coeff: C64) -> Self {
        PauliString {
            factors: BTreeMap::new(),
            coeff,
        }
    }

    pub fn single(qubit: usize, p: Pauli, coeff: f64) -> Self {
        PauliString {
            factors: BTreeMap::from([(qubit, p)]),
            coeff: C64::new(coeff, 0.0),
        }
    }

    pub fn factors(&self) -> impl Iterator<Item = (usize, Pauli)> + '_ {
        self.factors.iter().map(|(&q, &p)| (q, p))
    }

    pub fn factor(&self, qubit: usize) -> Option<Pauli> {
        self.factors.get(&qubit).copied()
    }

    pub fn key(&self) -> PauliKey {
        self.factors().collect()
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// Smallest register size this string fits in.
    pub fn min_qubits(&self) -> usize {
        self.factors.keys().next_back().map_or(0, |q| q + 1)
    }

    /// Product `self * other`, phase included.
    pub fn multiply(&self, other: &PauliString) -> PauliString {
        let mut factors = self.factors.clone();
        let mut coeff = self.coeff * other.coeff;
        for (&q, &p) in &other.factors {
            match factors.get(&q) {
                None => {
                    factors.insert(q, p);
                }
                Some(&mine) => {
                    let (phase, res) = mine.multiply(p);
                    coeff *= phase;
                    match res {
                        Some(r) => {
                            factors.insert(q, r);
                        }
                        None => {
                            factors.remove(&q);
                        }
                    }
                }
            }
        }
        PauliString { factors, coeff }
    }

    /// Bit masks `(x, z)`: X sets x, Z sets z, Y sets both.
    pub fn masks(&self) -> (usize, usize) {
        self.factors.iter().fold((0, 0), |(x, z), (&q, &p)| match p {
            Pauli::X => (x | 1 << q, z),
            Pauli::Y => (x | 1 << q, z | 1 << q),
            Pauli::Z => (x, z | 1 << q),
        })
    }

    /// Action on a computational basis state, ignoring the coefficient:
    /// `P|j> = phase |j ^ x_mask>`.
    pub fn apply_to_basis(&self, j: usize) -> (C64, usize) {
        let (x, z) = self.masks();
        let n_y = (x & z).count_ones();
        let mut phase = match n_y % 4 {
            0 => ONE,
            1 => I,
            2 => -ONE,
            _ => -I,
        };
        if (j & z).count_ones() % 2 == 1 {
            phase = -phase;
        }
        (phase, j ^ x)
    }

    pub fn check_fits(&self, n_qubits: usize) -> Result<()> {
        match self.factors.keys().find(|&&q| q >= n_qubits) {
            Some(&index) => Err(Error::QubitOutOfRange { index, n_qubits }),
            None => Ok(()),
        }
    }

    /// Dense `2^n` matrix including the coefficient.
    pub fn to_dense(&self, n_qubits: usize) -> Result<CMatrix> {
        self.check_fits(n_qubits)?;
        let dim = 1usize << n_qubits;
        let mut m = CMatrix::zeros(dim, dim);
        for j in 0..dim {
            let (phase, i) = self.apply_to_basis(j);
            m[(i, j)] = phase * self.coeff;
        }
        Ok(m)
    }
}

fn key_label(key: &[(usize, Pauli)]) -> String {
    if key.is_empty() {
        return "I".to_string();
    }
    key.iter()
        .map(|(q, p)| format!("{}{}", p.letter(), q))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parse `"X0 Y1"` (or `"I"`) into a key.
pub fn parse_key(s: &str) -> Result<PauliKey> {
    let s = s.trim();
    if s.is_empty() || s == "I" {
        return Ok(Vec::new());
    }
    let mut factors = BTreeMap::new();
    for tok in s.split_whitespace() {
        let mut chars = tok.chars();
        let p = match chars.next() {
            Some('X') => Pauli::X,
            Some('Y') => Pauli::Y,
            Some('Z') => Pauli::Z,
            _ => return Err(Error::Parse(format!("bad Pauli factor {tok:?}"))),
        };
        let q: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::Parse(format!("bad qubit index in {tok:?}")))?;
        if factors.insert(q, p).is_some() {
            return Err(Error::Parse(format!("qubit {q} repeated in {s:?}")));
        }
    }
    Ok(factors.into_iter().collect())
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", self.coeff, key_label(&self.key()))
    }
}

/// Anything whose Pauli-string expectation values can be evaluated.
pub trait QuantumState {
    fn n_qubits(&self) -> usize;
    /// `<P>` for the bare string (coefficient ignored).
    fn pauli_expectation(&self, p: &PauliString) -> C64;
}

/// Canonical weighted sum of Pauli strings.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QubitOperator {
    terms: BTreeMap<PauliKey, C64>,
}

impl QubitOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity(coeff: f64) -> Self {
        Self::from_terms([PauliString::identity(C64::new(coeff, 0.0))])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = PauliString>) -> Self {
        let mut op = QubitOperator::zero();
        for t in terms {
            op.accumulate(t.key(), t.coeff);
        }
        op.prune();
        op
    }

    /// Build from `("X0 Y1", coeff)` pairs.
    pub fn from_labels<'a>(terms: impl IntoIterator<Item = (&'a str, f64)>) -> Result<Self> {
        let mut op = QubitOperator::zero();
        for (label, c) in terms {
            op.accumulate(parse_key(label)?, C64::new(c, 0.0));
        }
        op.prune();
        Ok(op)
    }

    fn accumulate(&mut self, key: PauliKey, coeff: C64) {
        *self.terms.entry(key).or_insert(C64::new(0.0, 0.0)) += coeff;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= PRUNE_TOLERANCE);
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = PauliString> + '_ {
        self.terms.iter().map(|(k, &c)| PauliString::new(k.iter().copied(), c))
    }

    pub fn keys(&self) -> impl Iterator<Item = &PauliKey> {
        self.terms.keys()
    }

    pub fn coefficient(&self, key: &[(usize, Pauli)]) -> C64 {
        self.terms.get(key).copied().unwrap_or_default()
    }

    /// Coefficient of a term given by label, e.g. `"Z0 Z1"`.
    pub fn coefficient_of(&self, label: &str) -> Result<C64> {
        Ok(self.coefficient(&parse_key(label)?))
    }

    pub fn min_qubits(&self) -> usize {
        self.terms
            .keys()
            .filter_map(|k| k.last().map(|(q, _)| q + 1))
            .max()
            .unwrap_or(0)
    }

    pub fn max_imag(&self) -> f64 {
        self.terms.values().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    /// Canonical Pauli sums are Hermitian exactly when every coefficient is real.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_imag() < tol
    }

    pub fn scale(&self, s: C64) -> QubitOperator {
        let mut op = self.clone();
        op.terms.values_mut().for_each(|c| *c *= s);
        op.prune();
        op
    }

    pub fn adjoint(&self) -> QubitOperator {
        let mut op = self.clone();
        op.terms.values_mut().for_each(|c| *c = c.conj());
        op
    }

    /// Map every term through `f`, which may rewrite or drop it.
    pub fn map_terms<F>(&self, mut f: F) -> Result<QubitOperator>
    where
        F: FnMut(PauliString) -> Result<Option<PauliString>>,
    {
        let mut out = QubitOperator::zero();
        for t in self.terms() {
            if let Some(t) = f(t)? {
                out.accumulate(t.key(), t.coeff);
            }
        }
        out.prune();
        Ok(out)
    }

    pub fn to_dense(&self, n_qubits: usize) -> Result<CMatrix> {
        let dim = 1usize << n_qubits;
        let mut m = CMatrix::zeros(dim, dim);
        for t in self.terms() {
            t.check_fits(n_qubits)?;
            for j in 0..dim {
                let (phase, i) = t.apply_to_basis(j);
                m[(i, j)] += phase * t.coeff;
            }
        }
        Ok(m)
    }

    /// `<psi|H|psi>` or `tr(rho H)` for a Hermitian operator.
    pub fn expectation<S: QuantumState + ?Sized>(&self, state: &S) -> Result<f64> {
        let herm = self.max_imag();
        if herm >= IMAG_RESIDUE_TOLERANCE {
            return Err(Error::NonHermitian(herm));
        }
        let n = state.n_qubits();
        let mut total = C64::new(0.0, 0.0);
        for t in self.terms() {
            t.check_fits(n)?;
            total += t.coeff * state.pauli_expectation(&t);
        }
        if total.im.abs() >= IMAG_RESIDUE_TOLERANCE {
            return Err(Error::NonHermitian(total.im.abs()));
        }
        Ok(total.re)
    }
}

impl fmt::Display for QubitOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                if c.im == 0.0 {
                    format!("{:+.10} {}", c.re, key_label(k))
                } else {
                    format!("({:.10}) {}", c, key_label(k))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Add for &QubitOperator {
    type Output = QubitOperator;
    fn add(self, rhs: &QubitOperator) -> QubitOperator {
        let mut out = self.clone();
        for (k, &c) in &rhs.terms {
            out.accumulate(k.clone(), c);
        }
        out.prune();
        out
    }
}

impl Sub for &QubitOperator {
    type Output = QubitOperator;
    fn sub(self, rhs: &QubitOperator) -> QubitOperator {
        self + &(-rhs)
    }
}

impl Neg for &QubitOperator {
    type Output = QubitOperator;
    fn neg(self) -> QubitOperator {
        self.scale(-ONE)
    }
}

impl Mul for &QubitOperator {
    type Output = QubitOperator;
    fn mul(self, rhs: &QubitOperator) -> QubitOperator {
        let mut out = QubitOperator::zero();
        for a in self.terms() {
            for b in rhs.terms() {
                let p = a.multiply(&b);
                out.accumulate(p.key(), p.coeff);
            }
        }
        out.prune();
        out
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    term: String,
    coeff: [f64; 2],
}

impl Serialize for QubitOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let records: Vec<TermRecord> = self
            .terms
            .iter()
            .map(|(k, c)| TermRecord {
                term: key_label(k),
                coeff: [c.re, c.im],
            })
            .collect();
        records.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QubitOperator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let records = Vec::<TermRecord>::deserialize(d)?;
        let mut op = QubitOperator::zero();
        for r in records {
            let key = parse_key(&r.term).map_err(serde::de::Error::custom)?;
            op.accumulate(key, C64::new(r.coeff[0], r.coeff[1]));
        }
        op.prune();
        Ok(op)
    }
}

impl FromStr for QubitOperator {
    type Err = Error;

    /// Parses the JSON term-list form.
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}
