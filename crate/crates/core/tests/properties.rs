use std::f64::consts::PI;

use h2sim::chemistry::{default_grid, exact_curve, H2Model};
use h2sim::exec::Execution;
use h2sim::simulator::NoiseModel;
use h2sim::vqe::{estimate_point, AnsatzConfig, EstimateOptions, Gauge, Shots};
use h2sim::TermLabel;
use proptest::prelude::*;

fn gauge() -> impl Strategy<Value = Gauge> {
    prop::sample::select(Gauge::ALL.to_vec())
}

fn noise() -> impl Strategy<Value = NoiseModel> {
    (0.0..0.1f64, prop::option::of(20.0..500.0f64), 0.0..0.02f64, 0.0..0.05f64, any::<bool>()).prop_map(
        |(over, t1, d1, d2, split)| {
            let mut n = NoiseModel::overrotation(over);
            n.t1 = t1;
            n.t2 = t1.map(|t| 1.5 * t);
            n.depolarizing_1q = d1;
            n.depolarizing_2q = d2;
            n.split_cz = split;
            n
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_energy_is_variational(r in 0.3..2.85f64, theta in -PI..PI, g in gauge()) {
        let m = H2Model::at(r).unwrap();
        let p = estimate_point(&AnsatzConfig::new(theta, g).unwrap(), &m.hamiltonian, r, &EstimateOptions::default()).unwrap();
        prop_assert!(p.energy >= m.ground_energy() - 1e-12);
        let (e, _) = p.recombine(&m.hamiltonian);
        prop_assert!((e - p.energy).abs() < 1e-12);
    }

    #[test]
    fn noisy_energy_is_variational(r in 0.3..2.85f64, theta in -PI..PI, g in gauge(), n in noise(), seed in any::<u64>()) {
        let m = H2Model::at(r).unwrap();
        let opts = EstimateOptions { noise: Some(n), seed, ..Default::default() };
        let p = estimate_point(&AnsatzConfig::new(theta, g).unwrap(), &m.hamiltonian, r, &opts).unwrap();
        prop_assert!(p.energy >= m.ground_energy() - 1e-10);
    }

    #[test]
    fn reduced_hamiltonians_are_hermitian(r in 0.2..4.0f64) {
        let m = H2Model::at(r).unwrap();
        prop_assert!(m.bk4.max_imag() < 1e-12);
        prop_assert!(m.jordan_wigner().max_imag() < 1e-12);
        prop_assert!((m.hamiltonian.coefficient(TermLabel::X0X1) - m.hamiltonian.coefficient(TermLabel::Y0Y1)).abs() < 1e-10);
        prop_assert!(m.hartree_fock_energy() >= m.ground_energy() - 1e-12);
    }
}

#[test]
fn shot_error_scales_as_inverse_root() {
    let m = H2Model::at(0.75).unwrap();
    let cfg = AnsatzConfig::new(0.4, Gauge::Neither).unwrap();
    let exact = estimate_point(&cfg, &m.hamiltonian, 0.75, &EstimateOptions::default()).unwrap();
    let rms = |shots: u64| -> [f64; 5] {
        let trials = 400;
        let mut acc = [0.0; 5];
        for seed in 0..trials {
            let o = EstimateOptions { shots: Shots::Count(shots), seed, ..Default::default() };
            let p = estimate_point(&cfg, &m.hamiltonian, 0.75, &o).unwrap();
            for k in 0..5 {
                acc[k] += (p.terms[k].mean - exact.terms[k].mean).powi(2);
            }
        }
        acc.map(|a| (a / trials as f64).sqrt())
    };
    let lo = rms(100);
    let hi = rms(10_000);
    for k in 0..5 {
        // Z0Z1 is deterministic on this state
        if exact.terms[k].mean.abs() > 1.0 - 1e-12 {
            assert!(hi[k] < 1e-12);
            continue;
        }
        let slope = (hi[k] / lo[k]).ln() / 100f64.ln();
        assert!((slope + 0.5).abs() < 0.1, "term {k}: slope {slope}");
    }
}

#[test]
fn exact_curve_shape() {
    let grid = default_grid();
    let curve = exact_curve(&grid, Execution::Parallel).unwrap();
    let (imin, _) = curve
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.ground.total_cmp(&b.1.ground))
        .unwrap();
    let r_min = curve[imin].r_angstrom;
    assert!((0.70..=0.75).contains(&r_min), "argmin at {r_min}");
    for w in curve[imin..].windows(2) {
        assert!(w[1].ground > w[0].ground);
    }
    for p in &curve {
        assert!(p.hartree_fock >= p.ground - 1e-12);
        assert!(p.ground_weight > 0.5, "R = {}", p.r_angstrom);
    }
}

#[test]
fn transforms_agree_and_reduction_is_contained() {
    for r in [0.4, 0.7414, 1.2, 2.0, 2.85] {
        let m = H2Model::at(r).unwrap();
        let spectrum = |op: &h2sim::QubitOperator, n| h2sim::linalg::hermitian_eigen(&op.to_dense(n).unwrap()).unwrap().0;
        let jw = spectrum(&m.jordan_wigner(), 4);
        let bk = spectrum(&m.bk4, 4);
        for (a, b) in jw.iter().zip(&bk) {
            assert!((a - b).abs() < 1e-10);
        }
        for e in m.hamiltonian.spectrum() {
            assert!(bk.iter().any(|x| (x - e).abs() < 1e-10), "R = {r}: {e} not in the 4-qubit spectrum");
        }
    }
}
