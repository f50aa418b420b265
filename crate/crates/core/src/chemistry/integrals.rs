//! Molecular-orbital integrals for H2 in a minimal basis.

use serde::{Deserialize, Serialize};

use super::basis::{electron_repulsion, kinetic, nuclear_attraction, overlap, GaussianBasisFunction};
use crate::units::{angstrom_to_bohr, bohr_to_angstrom};
use crate::{Error, Result};

/// Largest allowed off-diagonal Fock element in the g/u basis.
pub const FOCK_GUARD: f64 = 1e-8;

/// Spatial-orbital index: 0 = bonding sigma_g, 1 = antibonding sigma_u.
pub type Orbital = usize;

pub type TwoBody = [[[[f64; 2]; 2]; 2]; 2];

/// Integrals over the symmetry-adapted orbitals
/// `sigma_g = (A + B) / sqrt(2 + 2S)` and `sigma_u = (A - B) / sqrt(2 - 2S)`.
///
/// `two_body[p][q][r][s]` is `int phi_p(1) phi_q(2) phi_r(2) phi_s(1) / r12`,
/// i.e. the chemist integral `(ps|qr)`; this is the index order that enters
/// `1/2 sum h_pqrs a+_p a+_q a_r a_s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MolecularIntegrals {
    pub r_bohr: f64,
    pub one_body: [[f64; 2]; 2],
    pub two_body: TwoBody,
    pub e_nuc: f64,
    pub orbital_energies: [f64; 2],
    /// Atomic-orbital overlap `<A|B>`.
    pub overlap: f64,
}

impl MolecularIntegrals {
    pub fn r_angstrom(&self) -> f64 {
        bohr_to_angstrom(self.r_bohr)
    }

    /// Chemist-notation `(ab|cd)`.
    pub fn chemist(&self, a: Orbital, b: Orbital, c: Orbital, d: Orbital) -> f64 {
        self.two_body[a][c][d][b]
    }

    /// Closed-shell energy with sigma_g doubly occupied.
    pub fn hartree_fock_energy(&self) -> f64 {
        2.0 * self.one_body[0][0] + self.chemist(0, 0, 0, 0) + self.e_nuc
    }

    /// Fock matrix of the closed-shell sigma_g^2 determinant.
    pub fn fock(&self) -> [[f64; 2]; 2] {
        let mut f = [[0.0; 2]; 2];
        for (p, row) in f.iter_mut().enumerate() {
            for (q, x) in row.iter_mut().enumerate() {
                *x = self.one_body[p][q] + 2.0 * self.chemist(p, q, 0, 0) - self.chemist(p, 0, 0, q);
            }
        }
        f
    }
}

/// STO-6G integrals for H2 with bond length `r_angstrom`, nuclei on the z axis.
pub fn compute_integrals(r_angstrom: f64) -> Result<MolecularIntegrals> {
    if !(r_angstrom > 0.0) || !r_angstrom.is_finite() {
        return Err(Error::invalid(format!("bond length must be positive and finite, got {r_angstrom}")));
    }
    let r = angstrom_to_bohr(r_angstrom);
    let nuclei = [[0.0, 0.0, 0.0], [0.0, 0.0, r]];
    let ao = [
        GaussianBasisFunction::sto6g_hydrogen(nuclei[0]),
        GaussianBasisFunction::sto6g_hydrogen(nuclei[1]),
    ];

    let s = overlap(&ao[0], &ao[1]);
    // As the atoms merge A - B vanishes and sigma_u is undefined.
    if 2.0 - 2.0 * s < 1e-10 {
        return Err(Error::guard(format!(
            "sigma_u normalization 2 - 2S = {:e} underflows at R = {r_angstrom} Angstrom",
            2.0 - 2.0 * s
        )));
    }
    let coeffs = [
        [1.0 / (2.0 + 2.0 * s).sqrt(), 1.0 / (2.0 + 2.0 * s).sqrt()],
        [1.0 / (2.0 - 2.0 * s).sqrt(), -1.0 / (2.0 - 2.0 * s).sqrt()],
    ];

    let mut h_ao = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            h_ao[i][j] = kinetic(&ao[i], &ao[j])
                + nuclear_attraction(&ao[i], &ao[j], &nuclei[0], 1.0)
                + nuclear_attraction(&ao[i], &ao[j], &nuclei[1], 1.0);
        }
    }
    let mut eri_ao = [[[[0.0; 2]; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    eri_ao[i][j][k][l] = electron_repulsion(&ao[i], &ao[j], &ao[k], &ao[l]);
                }
            }
        }
    }

    let mut one_body = [[0.0; 2]; 2];
    for p in 0..2 {
        for q in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    one_body[p][q] += coeffs[p][i] * coeffs[q][j] * h_ao[i][j];
                }
            }
        }
    }
    let mut chem = [[[[0.0; 2]; 2]; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    let mut v = 0.0;
                    for i in 0..2 {
                        for j in 0..2 {
                            for k in 0..2 {
                                for l in 0..2 {
                                    v += coeffs[a][i] * coeffs[b][j] * coeffs[c][k] * coeffs[d][l] * eri_ao[i][j][k][l];
                                }
                            }
                        }
                    }
                    chem[a][b][c][d] = v;
                }
            }
        }
    }
    let mut two_body = [[[[0.0; 2]; 2]; 2]; 2];
    for p in 0..2 {
        for q in 0..2 {
            for r in 0..2 {
                for s in 0..2 {
                    two_body[p][q][r][s] = chem[p][s][q][r];
                }
            }
        }
    }

    let mut ints = MolecularIntegrals {
        r_bohr: r,
        one_body,
        two_body,
        e_nuc: 1.0 / r,
        orbital_energies: [0.0; 2],
        overlap: s,
    };
    let f = ints.fock();
    if f[0][1].abs() > FOCK_GUARD || f[1][0].abs() > FOCK_GUARD {
        return Err(Error::guard(format!("Fock matrix not diagonal in the g/u basis: F_gu = {:e}", f[0][1])));
    }
    ints.orbital_energies = [f[0][0], f[1][1]];
    Ok(ints)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nuclear_repulsion_at_equilibrium() {
        let ints = compute_integrals(0.7414).unwrap();
        assert!((ints.r_bohr - 1.40105).abs() < 1e-5);
        assert!((ints.e_nuc - 0.71375).abs() < 1e-5);
    }

    #[test]
    fn symmetry_forbids_gu_mixing() {
        for &r in &[0.3, 0.7414, 1.5, 2.85] {
            let ints = compute_integrals(r).unwrap();
            assert!(ints.one_body[0][1].abs() < 1e-10);
            assert!((ints.one_body[0][1] - ints.one_body[1][0]).abs() < 1e-14);
        }
    }

    #[test]
    fn eightfold_symmetry() {
        let h = compute_integrals(1.1).unwrap().two_body;
        for p in 0..2 {
            for q in 0..2 {
                for r in 0..2 {
                    for s in 0..2 {
                        let x = h[p][q][r][s];
                        for y in [h[s][q][r][p], h[p][r][q][s], h[q][p][s][r], h[r][s][p][q], h[s][r][q][p]] {
                            assert!((x - y).abs() < 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn orbital_energies_ordered() {
        let mut r = 0.3;
        while r < 2.86 {
            let ints = compute_integrals(r).unwrap();
            assert!(ints.orbital_energies[0] < ints.orbital_energies[1], "R = {r}");
            r += 0.05;
        }
    }

    #[test]
    fn bad_geometry_errors() {
        assert!(matches!(compute_integrals(0.0), Err(Error::InvalidInput(_))));
        assert!(matches!(compute_integrals(-1.0), Err(Error::InvalidInput(_))));
        assert!(matches!(compute_integrals(1e-7), Err(Error::NumericalGuard(_))));
        assert!(compute_integrals(50.0).is_ok());
    }
}
