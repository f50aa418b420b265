use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::ansatz::{AnsatzConfig, Gauge};
use super::estimate::{estimate_point, EnergySurfacePoint, EstimateOptions, Shots, TermEstimate};
use crate::exec::{self, derive_seed, Execution};
use crate::hamiltonian::{TermLabel, TwoQubitHamiltonian};
use crate::simulator::NoiseModel;
use crate::{Error, Result};

/// Golden-section tolerance on theta.
pub const THETA_TOLERANCE: f64 = 1e-8;

/// `theta_k = -pi + 2 pi k / n` for `k = 0..n`.
pub fn theta_grid(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::invalid(format!("grid_size must be at least 2, got {n}")));
    }
    Ok((0..n).map(|k| -PI + 2.0 * PI * k as f64 / n as f64).collect())
}

fn point_seed(seed: u64, gauge: Gauge, k: usize) -> u64 {
    derive_seed(seed, &[gauge as u64, k as u64])
}

/// Energy surface of one gauge on a uniform grid. Every grid point draws from
/// its own RNG stream, so results do not depend on `exec`.
pub fn scan_theta(
    h: &TwoQubitHamiltonian,
    r_angstrom: f64,
    grid_size: usize,
    gauge: Gauge,
    opts: &EstimateOptions,
    exec: Execution,
) -> Result<Vec<EnergySurfacePoint>> {
    let grid = theta_grid(grid_size)?;
    exec::map_range(exec, grid.len(), |k| {
        let cfg = AnsatzConfig::new(grid[k], gauge)?;
        let o = EstimateOptions {
            seed: point_seed(opts.seed, gauge, k),
            ..opts.clone()
        };
        estimate_point(&cfg, h, r_angstrom, &o)
    })
    .into_iter()
    .collect()
}

/// Grid argmin; ties go to the smaller theta.
pub fn find_minimum<P: HasEnergy>(scan: &[P]) -> Option<&P> {
    scan.iter().fold(None, |best: Option<&P>, p| match best {
        Some(b) if p.energy() > b.energy() => Some(b),
        Some(b) if p.energy() == b.energy() && p.theta() >= b.theta() => Some(b),
        _ => Some(p),
    })
}

pub trait HasEnergy {
    fn energy(&self) -> f64;
    fn theta(&self) -> f64;
}

impl HasEnergy for EnergySurfacePoint {
    fn energy(&self) -> f64 {
        self.energy
    }
    fn theta(&self) -> f64 {
        self.theta
    }
}

impl HasEnergy for AveragedPoint {
    fn energy(&self) -> f64 {
        self.energy
    }
    fn theta(&self) -> f64 {
        self.theta
    }
}

/// Gauge-averaged surface point. `terms` are sign-corrected expectations in
/// [`TermLabel::NON_IDENTITY`] order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AveragedPoint {
    pub r_angstrom: f64,
    pub theta: f64,
    pub terms: [TermEstimate; 5],
    pub energy: f64,
    pub stderr: f64,
    /// Largest minus smallest single-gauge energy.
    pub gauge_spread: f64,
}

fn average_points(h: &TwoQubitHamiltonian, points: &[&EnergySurfacePoint]) -> AveragedPoint {
    let n = points.len() as f64;
    let mut terms = [TermEstimate::default(); 5];
    for p in points {
        let c = p.corrected();
        for k in 0..5 {
            terms[k].mean += c[k] / n;
            terms[k].stderr += p.terms[k].stderr.powi(2);
        }
    }
    for t in &mut terms {
        t.stderr = t.stderr.sqrt() / n;
    }
    let mut energy = h.coefficient(TermLabel::I);
    let mut var = 0.0;
    for (k, label) in TermLabel::NON_IDENTITY.into_iter().enumerate() {
        energy += h.coefficient(label) * terms[k].mean;
        var += (h.coefficient(label) * terms[k].stderr).powi(2);
    }
    let (lo, hi) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.energy), hi.max(p.energy)));
    AveragedPoint {
        r_angstrom: points[0].r_angstrom,
        theta: points[0].theta,
        terms,
        energy,
        stderr: var.sqrt(),
        gauge_spread: hi - lo,
    }
}

/// Average the four single-gauge scans point by point.
pub fn gauge_average(h: &TwoQubitHamiltonian, per_gauge: &[Vec<EnergySurfacePoint>]) -> Result<Vec<AveragedPoint>> {
    let mut gauges: Vec<Gauge> = per_gauge.iter().filter_map(|s| s.first().map(|p| p.gauge)).collect();
    gauges.sort();
    gauges.dedup();
    if per_gauge.len() != 4 || gauges.len() != 4 {
        return Err(Error::invalid("gauge averaging needs one scan for each of the four gauges"));
    }
    combine_scans(h, per_gauge)
}

fn combine_scans(h: &TwoQubitHamiltonian, scans: &[Vec<EnergySurfacePoint>]) -> Result<Vec<AveragedPoint>> {
    let len = scans[0].len();
    for s in scans {
        if s.len() != len {
            return Err(Error::DimensionMismatch { expected: len, found: s.len() });
        }
        if s.iter().any(|p| p.gauge != s[0].gauge) {
            return Err(Error::invalid("scan mixes gauges"));
        }
    }
    (0..len)
        .map(|k| {
            let pts: Vec<&EnergySurfacePoint> = scans.iter().map(|s| &s[k]).collect();
            if pts.iter().any(|p| p.theta != pts[0].theta) {
                return Err(Error::invalid(format!("theta grids differ at index {k}")));
            }
            Ok(average_points(h, &pts))
        })
        .collect()
}

/// Minimum of `f` on `[a, b]` for a unimodal `f`; returns `(x, f(x), evaluations)`.
pub fn golden_section<F: FnMut(f64) -> Result<f64>>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64, usize)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut evals = 2;
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
        evals += 1;
    }
    Ok(if fc <= fd { (c, fc, evals) } else { (d, fd, evals) })
}

/// Settings shared by every bond length of a VQE run.
#[derive(Debug, Clone, PartialEq)]
pub struct VqeSettings {
    pub grid_size: usize,
    pub gauges: Vec<Gauge>,
    pub estimate: EstimateOptions,
    /// Golden-section polish of the grid argmin in exact-expectation mode.
    pub refine: bool,
}

impl Default for VqeSettings {
    fn default() -> Self {
        VqeSettings {
            grid_size: 1000,
            gauges: Gauge::ALL.to_vec(),
            estimate: EstimateOptions::default(),
            refine: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VqeMinimum {
    pub r_angstrom: f64,
    pub theta: f64,
    pub energy: f64,
    pub stderr: f64,
    pub gauge_spread: f64,
    /// Grid argmin energy before refinement or re-measurement.
    pub grid_energy: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone)]
pub struct VqeRun {
    /// One scan per gauge, in the order of `VqeSettings::gauges`.
    pub surfaces: Vec<Vec<EnergySurfacePoint>>,
    pub averaged: Vec<AveragedPoint>,
    pub minimum: VqeMinimum,
}

/// Gauge-averaged energy at an arbitrary theta.
pub fn averaged_energy(h: &TwoQubitHamiltonian, r_angstrom: f64, theta: f64, settings: &VqeSettings, seed: u64) -> Result<AveragedPoint> {
    let pts = settings
        .gauges
        .iter()
        .map(|&g| {
            let o = EstimateOptions { seed: derive_seed(seed, &[g as u64]), ..settings.estimate.clone() };
            estimate_point(&AnsatzConfig::wrapped(theta, g), h, r_angstrom, &o)
        })
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&EnergySurfacePoint> = pts.iter().collect();
    Ok(average_points(h, &refs))
}

/// Scan every configured gauge, average, and locate the minimum.
///
/// In exact-expectation mode the grid argmin is polished by golden-section
/// search over the two neighbouring grid cells. With shots the winning grid
/// point is measured again with fresh shots, which removes the downward bias
/// of taking the minimum over many noisy values.
pub fn run_vqe(h: &TwoQubitHamiltonian, r_angstrom: f64, settings: &VqeSettings, exec: Execution) -> Result<VqeRun> {
    if settings.gauges.is_empty() {
        return Err(Error::invalid("at least one gauge is required"));
    }
    let surfaces = settings
        .gauges
        .iter()
        .map(|&g| scan_theta(h, r_angstrom, settings.grid_size, g, &settings.estimate, exec))
        .collect::<Result<Vec<_>>>()?;
    let averaged = combine_scans(h, &surfaces)?;
    let best = *find_minimum(&averaged).expect("grid has at least two points");
    let step = 2.0 * PI / settings.grid_size as f64;
    let n_gauges = settings.gauges.len();
    let mut evaluations = settings.grid_size * n_gauges;

    let refine_seed = derive_seed(settings.estimate.seed, &[u64::MAX]);
    let final_point = match settings.estimate.shots {
        Shots::Exact if settings.refine => {
            let (theta, _, evals) = golden_section(
                |t| Ok(averaged_energy(h, r_angstrom, t, settings, refine_seed)?.energy),
                best.theta - step,
                best.theta + step,
                THETA_TOLERANCE,
            )?;
            evaluations += evals * n_gauges;
            let p = averaged_energy(h, r_angstrom, theta, settings, refine_seed)?;
            if p.energy <= best.energy { p } else { best }
        }
        Shots::Exact => best,
        Shots::Count(_) => {
            evaluations += n_gauges;
            averaged_energy(h, r_angstrom, best.theta, settings, refine_seed)?
        }
    };
    Ok(VqeRun {
        surfaces,
        averaged,
        minimum: VqeMinimum {
            r_angstrom,
            theta: AnsatzConfig::wrapped(final_point.theta, Gauge::Neither).theta,
            energy: final_point.energy,
            stderr: final_point.stderr,
            gauge_spread: final_point.gauge_spread,
            grid_energy: best.energy,
            evaluations,
        },
    })
}

/// Local minimization from a starting angle: expand a bracket downhill with
/// doubling steps, then golden-section to `tol`. Returns `(theta, energy,
/// evaluations)`; used to compare starting guesses.
pub fn refine_from(h: &TwoQubitHamiltonian, start: f64, initial_step: f64, tol: f64) -> Result<(f64, f64, usize)> {
    let opts = EstimateOptions::default();
    let mut evals = 0usize;
    let mut f = |t: f64| -> Result<f64> {
        evals += 1;
        Ok(estimate_point(&AnsatzConfig::wrapped(t, Gauge::Neither), h, f64::NAN, &opts)?.energy)
    };
    let f0 = f(start)?;
    let mut step = initial_step;
    let mut f1 = f(start + step)?;
    if f1 > f0 {
        step = -step;
        f1 = f(start + step)?;
        if f1 > f0 {
            let (x, fx, n) = golden_section(&mut f, start - initial_step, start + initial_step, tol)?;
            return Ok((x, fx, evals + n));
        }
    }
    let (mut a, mut b, mut fb) = (start, start + step, f1);
    loop {
        let c = b + 2.0 * (b - a);
        let fc = f(c)?;
        if fc > fb {
            let (lo, hi) = if a < c { (a, c) } else { (c, a) };
            let (x, fx, n) = golden_section(&mut f, lo, hi, tol)?;
            return Ok((x, fx, evals + n));
        }
        if (c - start).abs() > PI {
            return Err(Error::guard("no bracket found within one period"));
        }
        a = b;
        b = c;
        fb = fc;
    }
}

/// One row of the noise study: the noisy energy at the noiseless optimum
/// versus the noisy energy at the optimum found under the same noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseStudyRow {
    pub r_angstrom: f64,
    pub exact_energy: f64,
    pub theta_ref: f64,
    pub theta_min: f64,
    pub energy_ref: f64,
    pub energy_min: f64,
}

impl NoiseStudyRow {
    pub fn error_ref(&self) -> f64 {
        self.energy_ref - self.exact_energy
    }

    pub fn error_min(&self) -> f64 {
        self.energy_min - self.exact_energy
    }

    pub fn gap(&self) -> f64 {
        self.energy_ref - self.energy_min
    }
}

/// Exact-expectation comparison at one bond length. The minimizer also
/// evaluates `theta_ref` itself, so `energy_min <= energy_ref` always.
pub fn noise_study_point(
    h: &TwoQubitHamiltonian,
    r_angstrom: f64,
    noise: &NoiseModel,
    settings: &VqeSettings,
    exec: Execution,
) -> Result<NoiseStudyRow> {
    let clean = VqeSettings {
        estimate: EstimateOptions { shots: Shots::Exact, noise: None, ..settings.estimate.clone() },
        ..settings.clone()
    };
    let noisy = VqeSettings {
        estimate: EstimateOptions { shots: Shots::Exact, noise: Some(noise.clone()), ..settings.estimate.clone() },
        ..settings.clone()
    };
    let theta_ref = run_vqe(h, r_angstrom, &clean, exec)?.minimum.theta;
    let m = run_vqe(h, r_angstrom, &noisy, exec)?.minimum;
    let energy_ref = averaged_energy(h, r_angstrom, theta_ref, &noisy, derive_seed(settings.estimate.seed, &[u64::MAX]))?.energy;
    let (theta_min, energy_min) = if m.energy <= energy_ref { (m.theta, m.energy) } else { (theta_ref, energy_ref) };
    Ok(NoiseStudyRow {
        r_angstrom,
        exact_energy: h.ground_energy(),
        theta_ref,
        theta_min,
        energy_ref,
        energy_min,
    })
}
