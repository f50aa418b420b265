//! Second-order Moller-Plesset starting amplitudes for the UCC ansatz.

use super::integrals::MolecularIntegrals;
use crate::{Error, Result};

/// Below this the MP2 denominator is treated as degenerate.
pub const DENOMINATOR_GUARD: f64 = 1e-8;

/// Spin-orbital integral `h_pqrs` over the interleaved ordering
/// (mode `2k + s` is spatial orbital `k`, spin `s`).
pub fn spin_orbital_two_body(ints: &MolecularIntegrals, p: usize, q: usize, r: usize, s: usize) -> f64 {
    if p % 2 != s % 2 || q % 2 != r % 2 {
        return 0.0;
    }
    ints.two_body[p / 2][q / 2][r / 2][s / 2]
}

/// Spin-orbital energies `eps_p`.
pub fn spin_orbital_energy(ints: &MolecularIntegrals, p: usize) -> f64 {
    ints.orbital_energies[p / 2]
}

/// `theta_ij^ab = (h_ijba - h_ijab) / (eps_i + eps_j - eps_a - eps_b)`.
pub fn doubles_amplitude(h_ijba: f64, h_ijab: f64, eps: [f64; 4]) -> Result<f64> {
    let den = eps[0] + eps[1] - eps[2] - eps[3];
    if den.abs() < DENOMINATOR_GUARD {
        return Err(Error::guard(format!("degenerate MP2 denominator {den:e}")));
    }
    Ok((h_ijba - h_ijab) / den)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mp2Guess {
    /// Amplitude of `a+_2 a+_3 a_1 a_0`, the only double excitation.
    pub doubles: f64,
    /// `t_i^a` for `i in {0, 1}`, `a in {2, 3}`; zero by symmetry.
    pub singles: [[f64; 2]; 2],
}

/// MP2 amplitudes for the `sigma_g^2 -> sigma_u^2` excitation.
pub fn mp2_initial_amplitude(ints: &MolecularIntegrals) -> Result<Mp2Guess> {
    let (i, j, a, b) = (0, 1, 2, 3);
    let eps = [i, j, a, b].map(|p| spin_orbital_energy(ints, p));
    let doubles = doubles_amplitude(
        spin_orbital_two_body(ints, i, j, b, a),
        spin_orbital_two_body(ints, i, j, a, b),
        eps,
    )?;
    let fock = ints.fock();
    let mut singles = [[0.0; 2]; 2];
    for (ii, occ) in [i, j].into_iter().enumerate() {
        for (aa, vir) in [a, b].into_iter().enumerate() {
            if occ % 2 == vir % 2 {
                let den = spin_orbital_energy(ints, occ) - spin_orbital_energy(ints, vir);
                singles[ii][aa] = fock[occ / 2][vir / 2] / den;
            }
        }
    }
    Ok(Mp2Guess { doubles, singles })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chemistry::integrals::compute_integrals;

    #[test]
    fn arithmetic_example() {
        let t = doubles_amplitude(0.2, 0.1, [-0.6, -0.6, 0.7, 0.7]).unwrap();
        assert!((t - (0.1 / -2.6)).abs() < 1e-15);
        assert!((t + 0.03846).abs() < 1e-5);
    }

    #[test]
    fn degenerate_denominator() {
        assert!(matches!(doubles_amplitude(0.2, 0.1, [0.5, 0.5, 0.5, 0.5]), Err(Error::NumericalGuard(_))));
    }

    #[test]
    fn singles_vanish_and_doubles_negative() {
        for &r in &[0.5, 0.7414, 1.5, 2.85] {
            let g = mp2_initial_amplitude(&compute_integrals(r).unwrap()).unwrap();
            assert!(g.singles.iter().flatten().all(|&s| s.abs() < 1e-10));
            assert!(g.doubles < 0.0);
        }
    }
}
