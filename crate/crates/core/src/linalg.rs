//! Small dense linear-algebra helpers on complex matrices (dimension <= 64).

use nalgebra::linalg::{Schur, SymmetricEigen};

use crate::{CMatrix, Error, Result, C64};

/// Largest deviation of `m` from Hermiticity.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Eigenpairs of a Hermitian matrix, ascending. Columns of the returned matrix
/// are the normalized eigenvectors.
pub fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let defect = hermiticity_defect(m);
    if defect > 1e-9 {
        return Err(Error::NonHermitian(defect));
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Eigen-decomposition of a normal (e.g. unitary) matrix through its complex
/// Schur form. For normal matrices the triangular factor is diagonal.
pub fn normal_eigen(m: &CMatrix) -> (Vec<C64>, CMatrix) {
    let (q, t) = Schur::new(m.clone()).unpack();
    let values = (0..m.nrows()).map(|i| t[(i, i)]).collect();
    (values, q)
}

/// `exp(-i H t)` for Hermitian `H`.
pub fn propagator(h: &CMatrix, t: f64) -> Result<CMatrix> {
    let (values, vectors) = hermitian_eigen(h)?;
    let phases = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        values.len(),
        values.iter().map(|e| C64::from_polar(1.0, -e * t)),
    ));
    Ok(&vectors * phases * vectors.adjoint())
}

/// Operator (spectral) norm.
pub fn operator_norm(m: &CMatrix) -> f64 {
    m.clone().singular_values().max()
}

/// `min_phi max|a - e^{i phi} b|`, with the phase fixed from the overlap
/// `tr(b^dagger a)`. Used to compare circuits up to a global phase.
pub fn distance_up_to_phase(a: &CMatrix, b: &CMatrix) -> f64 {
    let overlap = (b.adjoint() * a).trace();
    let phase = if overlap.norm() > 1e-300 {
        overlap / overlap.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    max_abs_diff(a, &(b * phase))
}

/// Integer power by repeated squaring.
pub fn matrix_power(m: &CMatrix, mut exp: u64) -> CMatrix {
    let mut result = CMatrix::identity(m.nrows(), m.ncols());
    let mut base = m.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            result = &result * &base;
        }
        exp >>= 1;
        if exp > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Wrap an angle to `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut y = x.rem_euclid(TAU);
    if y > PI {
        y -= TAU;
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn hermitian_eigen_is_sorted_and_reconstructs() {
        let m = CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(-1.0, 0.0)]);
        let (vals, vecs) = hermitian_eigen(&m).unwrap();
        assert!(vals[0] < vals[1]);
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(2, vals.iter().map(|&v| c(v, 0.0))));
        assert!(max_abs_diff(&(&vecs * d * vecs.adjoint()), &m) < 1e-12);
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(hermitian_eigen(&m), Err(Error::NonHermitian(_))));
    }

    #[test]
    fn normal_eigen_of_unitary_has_unit_modulus() {
        let h = CMatrix::from_row_slice(2, 2, &[c(0.3, 0.0), c(0.5, 0.2), c(0.5, -0.2), c(-0.7, 0.0)]);
        let u = propagator(&h, 1.3).unwrap();
        let (vals, q) = normal_eigen(&u);
        for v in &vals {
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vals));
        assert!(max_abs_diff(&(&q * d * q.adjoint()), &u) < 1e-12);
    }

    #[test]
    fn power_and_phase_distance() {
        let h = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.2, 0.0), c(0.2, 0.0), c(-0.4, 0.0)]);
        let u = propagator(&h, 0.7).unwrap();
        let u8 = matrix_power(&u, 8);
        assert!(max_abs_diff(&u8, &propagator(&h, 5.6).unwrap()) < 1e-12);
        let shifted = &u * C64::from_polar(1.0, 0.9);
        assert!(distance_up_to_phase(&shifted, &u) < 1e-12);
        assert!((wrap_angle(3.0 * std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-12);
    }
}
