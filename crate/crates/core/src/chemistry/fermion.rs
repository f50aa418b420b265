//! Second-quantized operators on a handful of spin orbitals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use super::integrals::MolecularIntegrals;
use crate::{CMatrix, Error, Result, C64};

/// `(mode, true)` is a creation operator, `(mode, false)` an annihilation.
pub type Ladder = (usize, bool);

const PRUNE: f64 = 1e-12;

/// Spin orbital `2 * spatial + spin` (spin 0 = up, 1 = down), so spatial
/// orbital `k` occupies modes `2k` and `2k + 1`.
pub fn spin_orbital(spatial: usize, spin: usize) -> usize {
    2 * spatial + spin
}

/// Real linear combination of ladder-operator products, kept normal ordered:
/// creations left of annihilations, each group in descending mode order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FermionOperator {
    terms: BTreeMap<Vec<Ladder>, f64>,
}

impl FermionOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity(c: f64) -> Self {
        Self::term(&[], c)
    }

    /// A single product, normal ordered on construction.
    pub fn term(ops: &[Ladder], coeff: f64) -> Self {
        let mut out = FermionOperator::zero();
        for (word, c) in normal_order(ops.to_vec(), coeff) {
            *out.terms.entry(word).or_insert(0.0) += c;
        }
        out.prune();
        out
    }

    /// `a+_p a_q`.
    pub fn hopping(p: usize, q: usize, coeff: f64) -> Self {
        Self::term(&[(p, true), (q, false)], coeff)
    }

    pub fn number(p: usize) -> Self {
        Self::hopping(p, p, 1.0)
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.abs() >= PRUNE);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Ladder>, f64)> {
        self.terms.iter().map(|(k, &c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_mode(&self) -> Option<usize> {
        self.terms.keys().flat_map(|w| w.iter().map(|&(m, _)| m)).max()
    }

    pub fn adjoint(&self) -> FermionOperator {
        let mut out = FermionOperator::zero();
        for (word, &c) in &self.terms {
            let rev: Vec<Ladder> = word.iter().rev().map(|&(m, d)| (m, !d)).collect();
            out = &out + &FermionOperator::term(&rev, c);
        }
        out
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let d = self - &self.adjoint();
        d.terms.values().all(|c| c.abs() < tol)
    }

    pub fn commutator(&self, other: &FermionOperator) -> FermionOperator {
        &(self * other) - &(other * self)
    }

    /// Dense matrix on occupation-number states: mode `p` is bit `p` of the
    /// basis index, and `a+_p` picks up `(-1)^(occupied modes below p)`.
    pub fn to_dense(&self, n_modes: usize) -> Result<CMatrix> {
        if let Some(m) = self.max_mode() {
            if m >= n_modes {
                return Err(Error::QubitOutOfRange { index: m, n_qubits: n_modes });
            }
        }
        let dim = 1usize << n_modes;
        let mut out = CMatrix::zeros(dim, dim);
        for (word, &c) in &self.terms {
            for col in 0..dim {
                if let Some((sign, row)) = apply_word(word, col) {
                    out[(row, col)] += C64::new(sign * c, 0.0);
                }
            }
        }
        Ok(out)
    }
}

/// Act with a ladder word (rightmost first) on an occupation bitmask.
fn apply_word(word: &[Ladder], mut state: usize) -> Option<(f64, usize)> {
    let mut sign = 1.0;
    for &(mode, dagger) in word.iter().rev() {
        let bit = 1usize << mode;
        let occupied = state & bit != 0;
        if occupied == dagger {
            return None;
        }
        if (state & (bit - 1)).count_ones() % 2 == 1 {
            sign = -sign;
        }
        state ^= bit;
    }
    Some((sign, state))
}

/// Bubble a word into normal order, expanding `a_p a+_p = 1 - a+_p a_p`.
fn normal_order(word: Vec<Ladder>, coeff: f64) -> Vec<(Vec<Ladder>, f64)> {
    let mut out = Vec::new();
    let mut stack = vec![(word, coeff)];
    'next: while let Some((mut w, c)) = stack.pop() {
        let mut c = c;
        // insertion sort with sign tracking; any swap of equal modes spawns a contraction
        for i in 1..w.len() {
            let mut j = i;
            while j > 0 {
                let (lm, ld) = w[j - 1];
                let (rm, rd) = w[j];
                let out_of_order = match (ld, rd) {
                    (false, true) => true,
                    (true, true) | (false, false) => lm < rm,
                    (true, false) => false,
                };
                if lm == rm && ld == rd {
                    // a_p a_p = a+_p a+_p = 0
                    continue 'next;
                }
                if !out_of_order {
                    break;
                }
                if lm == rm {
                    // a_p a+_p = 1 - a+_p a_p
                    let mut contracted = w.clone();
                    contracted.drain(j - 1..=j);
                    stack.push((contracted, c));
                }
                w.swap(j - 1, j);
                c = -c;
                j -= 1;
            }
        }
        // equal neighbors can also appear after sorting
        if w.windows(2).any(|p| p[0] == p[1]) {
            continue;
        }
        out.push((w, c));
    }
    out
}

impl Add for &FermionOperator {
    type Output = FermionOperator;

    fn add(self, rhs: &FermionOperator) -> FermionOperator {
        let mut out = self.clone();
        for (k, &c) in &rhs.terms {
            *out.terms.entry(k.clone()).or_insert(0.0) += c;
        }
        out.prune();
        out
    }
}

impl Sub for &FermionOperator {
    type Output = FermionOperator;

    fn sub(self, rhs: &FermionOperator) -> FermionOperator {
        let mut neg = rhs.clone();
        neg.terms.values_mut().for_each(|c| *c = -*c);
        self + &neg
    }
}

impl Mul for &FermionOperator {
    type Output = FermionOperator;

    fn mul(self, rhs: &FermionOperator) -> FermionOperator {
        let mut out = FermionOperator::zero();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &rhs.terms {
                let word: Vec<Ladder> = a.iter().chain(b.iter()).copied().collect();
                for (w, c) in normal_order(word, ca * cb) {
                    *out.terms.entry(w).or_insert(0.0) += c;
                }
            }
        }
        out.prune();
        out
    }
}

impl Mul<f64> for &FermionOperator {
    type Output = FermionOperator;

    fn mul(self, s: f64) -> FermionOperator {
        let mut out = self.clone();
        out.terms.values_mut().for_each(|c| *c *= s);
        out.prune();
        out
    }
}

impl fmt::Display for FermionOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let ops: Vec<String> = w.iter().map(|&(m, d)| if d { format!("{m}^") } else { format!("{m}") }).collect();
                format!("{c:+.10} [{}]", ops.join(" "))
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Total number operator on `n_modes` modes.
pub fn number_operator(n_modes: usize) -> FermionOperator {
    (0..n_modes).fold(FermionOperator::zero(), |acc, p| &acc + &FermionOperator::number(p))
}

/// `sum h_pq a+_p a_q + 1/2 sum h_pqrs a+_p a+_q a_r a_s + e_nuc` over the
/// four spin orbitals (interleaved g-up, g-down, u-up, u-down).
pub fn second_quantized(ints: &MolecularIntegrals) -> FermionOperator {
    let spatial = |p: usize| p / 2;
    let spin = |p: usize| p % 2;
    let mut h = FermionOperator::identity(ints.e_nuc);
    for p in 0..4 {
        for q in 0..4 {
            if spin(p) == spin(q) {
                h = &h + &FermionOperator::hopping(p, q, ints.one_body[spatial(p)][spatial(q)]);
            }
        }
    }
    for p in 0..4 {
        for q in 0..4 {
            for r in 0..4 {
                for s in 0..4 {
                    // electron 1 goes s -> p, electron 2 goes r -> q
                    if spin(p) != spin(s) || spin(q) != spin(r) {
                        continue;
                    }
                    let v = ints.two_body[spatial(p)][spatial(q)][spatial(r)][spatial(s)];
                    if v != 0.0 {
                        let t = FermionOperator::term(&[(p, true), (q, true), (r, false), (s, false)], 0.5 * v);
                        h = &h + &t;
                    }
                }
            }
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chemistry::integrals::compute_integrals;
    use crate::linalg::{hermiticity_defect, max_abs_diff};

    #[test]
    fn anticommutation_relations() {
        for p in 0..3 {
            for q in 0..3 {
                let ap = FermionOperator::term(&[(p, false)], 1.0);
                let aq_dag = FermionOperator::term(&[(q, true)], 1.0);
                let anti = &(&ap * &aq_dag) + &(&aq_dag * &ap);
                let expect = if p == q { FermionOperator::identity(1.0) } else { FermionOperator::zero() };
                assert_eq!(anti, expect, "p={p} q={q}");
                let aq = FermionOperator::term(&[(q, false)], 1.0);
                assert!((&(&ap * &aq) + &(&aq * &ap)).is_empty());
            }
        }
    }

    #[test]
    fn normal_ordering_preserves_dense_form() {
        let word = [(1, false), (0, true), (2, false), (1, true), (2, true)];
        // dense product of single ladders vs dense of the normal-ordered word
        let mut prod = CMatrix::identity(8, 8);
        for &l in &word {
            let single = FermionOperator { terms: BTreeMap::from([(vec![l], 1.0)]) };
            prod *= single.to_dense(3).unwrap();
        }
        let ordered = FermionOperator::term(&word, 1.0).to_dense(3).unwrap();
        assert!(max_abs_diff(&prod, &ordered) < 1e-14);
    }

    #[test]
    fn hamiltonian_is_hermitian_and_number_conserving() {
        let ints = compute_integrals(0.7414).unwrap();
        let h = second_quantized(&ints);
        assert!(h.is_hermitian(1e-12));
        let hd = h.to_dense(4).unwrap();
        assert!(hermiticity_defect(&hd) < 1e-12);
        let n = number_operator(4).to_dense(4).unwrap();
        let comm = &hd * &n - &n * &hd;
        assert!(comm.iter().all(|x| x.norm() < 1e-10));
        assert!(h.commutator(&number_operator(4)).is_empty());
    }

    #[test]
    fn hf_determinant_energy() {
        let ints = compute_integrals(0.7414).unwrap();
        let hd = second_quantized(&ints).to_dense(4).unwrap();
        // modes 0 and 1 (sigma_g up and down) occupied
        assert!((hd[(0b0011, 0b0011)].re - ints.hartree_fock_energy()).abs() < 1e-12);
        assert!((hd[(0, 0)].re - ints.e_nuc).abs() < 1e-14);
    }
}
