//! Contracted s-type Gaussians and their closed-form integrals.

use std::f64::consts::PI;

use crate::{Error, Result};

const STO6G_H: &str = include_str!("../../data/sto-6g-h.txt");

pub type Vec3 = [f64; 3];

fn dist2(a: &Vec3, b: &Vec3) -> f64 {
    (0..3).map(|i| (a[i] - b[i]).powi(2)).sum()
}

fn weighted_center(a: f64, pa: &Vec3, b: f64, pb: &Vec3) -> Vec3 {
    let p = a + b;
    [(a * pa[0] + b * pb[0]) / p, (a * pa[1] + b * pb[1]) / p, (a * pa[2] + b * pb[2]) / p]
}

/// Boys function of order zero, `F0(t) = int_0^1 exp(-t u^2) du`.
pub fn boys_f0(t: f64) -> f64 {
    if t < 1e-8 {
        // Taylor series; the closed form loses digits near t = 0
        1.0 - t / 3.0 + t * t / 10.0
    } else {
        0.5 * (PI / t).sqrt() * statrs::function::erf::erf(t.sqrt())
    }
}

/// `N(alpha) = (2 alpha / pi)^{3/4}` for a normalized s primitive.
fn primitive_norm(alpha: f64) -> f64 {
    (2.0 * alpha / PI).powf(0.75)
}

/// Contracted s function `sum_k d_k N(alpha_k) exp(-alpha_k |r - center|^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianBasisFunction {
    pub center: Vec3,
    pub exponents: Vec<f64>,
    pub contraction_coeffs: Vec<f64>,
    /// Primitive weights including `N(alpha)` and the contraction renormalization.
    weights: Vec<f64>,
}

impl GaussianBasisFunction {
    pub fn new(center: Vec3, exponents: Vec<f64>, contraction_coeffs: Vec<f64>) -> Result<Self> {
        if exponents.len() != contraction_coeffs.len() || exponents.is_empty() {
            return Err(Error::invalid("exponent and coefficient lists must be equal and nonempty"));
        }
        if exponents.iter().any(|&a| !(a > 0.0)) {
            return Err(Error::invalid("Gaussian exponents must be positive"));
        }
        let mut f = GaussianBasisFunction {
            center,
            weights: exponents.iter().zip(&contraction_coeffs).map(|(&a, &d)| d * primitive_norm(a)).collect(),
            exponents,
            contraction_coeffs,
        };
        let s = overlap(&f, &f);
        f.weights.iter_mut().for_each(|w| *w /= s.sqrt());
        Ok(f)
    }

    /// Hydrogen 1s in STO-6G at `center` (Bohr).
    pub fn sto6g_hydrogen(center: Vec3) -> Self {
        let (exps, coeffs) = sto6g_table();
        Self::new(center, exps, coeffs).expect("embedded basis data is valid")
    }

    /// Primitives as `(exponent, weight)`.
    pub fn primitives(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.exponents.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn value(&self, r: &Vec3) -> f64 {
        let d2 = dist2(r, &self.center);
        self.primitives().map(|(a, w)| w * (-a * d2).exp()).sum()
    }
}

fn sto6g_table() -> (Vec<f64>, Vec<f64>) {
    STO6G_H
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let mut it = l.split_whitespace().map(|x| x.parse::<f64>().expect("numeric basis data"));
            (it.next().unwrap(), it.next().unwrap())
        })
        .unzip()
}

pub fn overlap(a: &GaussianBasisFunction, b: &GaussianBasisFunction) -> f64 {
    let r2 = dist2(&a.center, &b.center);
    let mut s = 0.0;
    for (al, wa) in a.primitives() {
        for (be, wb) in b.primitives() {
            let p = al + be;
            s += wa * wb * (PI / p).powf(1.5) * (-al * be / p * r2).exp();
        }
    }
    s
}

pub fn kinetic(a: &GaussianBasisFunction, b: &GaussianBasisFunction) -> f64 {
    let r2 = dist2(&a.center, &b.center);
    let mut t = 0.0;
    for (al, wa) in a.primitives() {
        for (be, wb) in b.primitives() {
            let p = al + be;
            let mu = al * be / p;
            t += wa * wb * mu * (3.0 - 2.0 * mu * r2) * (PI / p).powf(1.5) * (-mu * r2).exp();
        }
    }
    t
}

/// `<a| -Z / |r - C| |b>`.
pub fn nuclear_attraction(a: &GaussianBasisFunction, b: &GaussianBasisFunction, c: &Vec3, charge: f64) -> f64 {
    let r2 = dist2(&a.center, &b.center);
    let mut v = 0.0;
    for (al, wa) in a.primitives() {
        for (be, wb) in b.primitives() {
            let p = al + be;
            let pc = weighted_center(al, &a.center, be, &b.center);
            v -= wa * wb * 2.0 * PI / p * (-al * be / p * r2).exp() * boys_f0(p * dist2(&pc, c));
        }
    }
    charge * v
}

/// Chemist-notation repulsion integral `(ab|cd)`.
pub fn electron_repulsion(
    a: &GaussianBasisFunction,
    b: &GaussianBasisFunction,
    c: &GaussianBasisFunction,
    d: &GaussianBasisFunction,
) -> f64 {
    let rab = dist2(&a.center, &b.center);
    let rcd = dist2(&c.center, &d.center);
    let mut total = 0.0;
    for (al, wa) in a.primitives() {
        for (be, wb) in b.primitives() {
            let p = al + be;
            let pc = weighted_center(al, &a.center, be, &b.center);
            let kab = wa * wb * (-al * be / p * rab).exp();
            for (ga, wc) in c.primitives() {
                for (de, wd) in d.primitives() {
                    let q = ga + de;
                    let qc = weighted_center(ga, &c.center, de, &d.center);
                    let kcd = wc * wd * (-ga * de / q * rcd).exp();
                    let pre = 2.0 * PI.powf(2.5) / (p * q * (p + q).sqrt());
                    total += kab * kcd * pre * boys_f0(p * q / (p + q) * dist2(&pc, &qc));
                }
            }
        }
    }
    total
}
