//! One function per subcommand. Each returns the rendered artifacts and a few
//! summary lines for the terminal; nothing here touches the filesystem.

use h2sim::chemistry::{dissociation_energy, exact_curve, H2Model};
use h2sim::exec::{self, derive_seed, Execution};
use h2sim::pea::{
    default_t0, eigenphase_error, iterative_pea, log_log_slope, operator_norm_error, optimize_ordering, ordering_scores,
    TrotterSpec, ORDERING_TIE,
};
use h2sim::vqe::{noise_study_point, run_vqe, EstimateOptions, NoiseStudyRow, VqeRun, VqeSettings};
use h2sim::{TermLabel, TwoQubitHamiltonian};

use crate::config::{Ordering, RunConfig, TimeStep};
use crate::error::CliError;
use crate::output::{json_artifact, num, Artifact, Table};

pub struct Report {
    pub artifacts: Vec<Artifact>,
    pub summary: Vec<String>,
}

const EXEC: Execution = Execution::Parallel;

/// Per-R seed, keyed by the bond length itself so a point gives the same
/// result whatever grid it sits in.
fn point_seed(cfg: &RunConfig, r: f64) -> u64 {
    derive_seed(cfg.seed, &[r.to_bits()])
}

fn over_grid<T, F>(cfg: &RunConfig, f: F) -> Result<Vec<T>, CliError>
where
    T: Send,
    F: Fn(f64) -> Result<T, CliError> + Sync + Send,
{
    exec::map(EXEC, &cfg.r_grid, |&r| f(r)).into_iter().collect()
}

fn ordering_name(o: &[TermLabel; 5]) -> String {
    o.iter().map(|t| t.name()).collect::<Vec<_>>().join(" ")
}

fn resolve_t0(cfg: &RunConfig, h: &TwoQubitHamiltonian) -> f64 {
    match cfg.pea.t0 {
        TimeStep::Auto(_) => default_t0(h),
        TimeStep::Fixed(t) => t,
    }
}

fn resolve_ordering(cfg: &RunConfig, h: &TwoQubitHamiltonian, t0: f64) -> Result<[TermLabel; 5], CliError> {
    Ok(match cfg.pea.ordering {
        Ordering::Optimize(_) => optimize_ordering(h, t0)?.0,
        Ordering::Fixed(o) => o,
    })
}

fn vqe_settings(cfg: &RunConfig, r: f64) -> VqeSettings {
    VqeSettings {
        grid_size: cfg.vqe.grid_size,
        gauges: cfg.vqe.gauge_list(),
        estimate: EstimateOptions {
            shots: cfg.shots,
            noise: (!cfg.noise.is_noiseless()).then(|| cfg.noise.clone()),
            seed: point_seed(cfg, r),
            substitute_z0z1: cfg.vqe.substitute_z0z1,
        },
        refine: cfg.vqe.refine,
    }
}

pub fn integrals(cfg: &RunConfig) -> Result<Report, CliError> {
    let models = over_grid(cfg, |r| Ok(H2Model::at(r)?))?;
    let mut t = Table::new(&["R_angstrom", "g0", "g1", "g2", "g3", "g4", "g5", "bk_f"]);
    for m in &models {
        let mut row = vec![num(m.r_angstrom)];
        row.extend(m.hamiltonian.g.iter().map(|&g| num(g)));
        row.push(serde_json::to_string(&m.bk_coefficients.f).expect("floats"));
        t.row(row);
    }
    Ok(Report {
        artifacts: vec![t.into_artifact("hamiltonian.csv")],
        summary: vec![format!("{} bond lengths", models.len())],
    })
}

pub fn exact(cfg: &RunConfig) -> Result<Report, CliError> {
    let curve = exact_curve(&cfg.r_grid, EXEC)?;
    let mut t = Table::new(&["R_angstrom", "hartree_fock_hartree", "exact_hartree", "hf_weight"]);
    for p in &curve {
        t.row([num(p.r_angstrom), num(p.hartree_fock), num(p.ground), num(p.ground_weight)]);
    }
    let best = curve.iter().min_by(|a, b| a.ground.total_cmp(&b.ground)).expect("nonempty grid");
    let energies: Vec<f64> = curve.iter().map(|p| p.ground).collect();
    Ok(Report {
        artifacts: vec![t.into_artifact("exact_curve.csv")],
        summary: vec![
            format!("minimum E0 = {:.8} Ha at R = {} A", best.ground, best.r_angstrom),
            format!("dissociation energy E(R_max) - min E = {:.8} Ha", dissociation_energy(&energies)),
        ],
    })
}

pub fn vqe_scan(cfg: &RunConfig) -> Result<Report, CliError> {
    let runs: Vec<(H2Model, VqeRun)> = over_grid(cfg, |r| {
        let m = H2Model::at(r)?;
        let run = run_vqe(&m.hamiltonian, r, &vqe_settings(cfg, r), EXEC)?;
        Ok((m, run))
    })?;

    let mut artifacts = Vec::new();
    if cfg.vqe.write_surface {
        let mut s = Table::new(&[
            "R_angstrom", "theta", "gauge", "exp_Z0", "exp_Z1", "exp_Z0Z1", "exp_XX", "exp_YY", "energy_hartree", "stderr_hartree",
        ]);
        for (_, run) in &runs {
            for p in run.surfaces.iter().flatten() {
                let mut row = vec![num(p.r_angstrom), num(p.theta), p.gauge.name().to_string()];
                row.extend(p.terms.iter().map(|t| num(t.mean)));
                row.push(num(p.energy));
                row.push(num(p.stderr));
                s.row(row);
            }
        }
        artifacts.push(s.into_artifact("vqe_surface.csv"));
    }

    let mut t = Table::new(&[
        "R_angstrom",
        "theta",
        "energy_hartree",
        "stderr_hartree",
        "gauge_spread_hartree",
        "exact_hartree",
        "error_hartree",
        "grid_energy_hartree",
        "evaluations",
    ]);
    let mut vqe_e = Vec::new();
    let mut exact_e = Vec::new();
    for (m, run) in &runs {
        let v = &run.minimum;
        let e0 = m.ground_energy();
        t.row([
            num(v.r_angstrom),
            num(v.theta),
            num(v.energy),
            num(v.stderr),
            num(v.gauge_spread),
            num(e0),
            num(v.energy - e0),
            num(v.grid_energy),
            v.evaluations.to_string(),
        ]);
        vqe_e.push(v.energy);
        exact_e.push(e0);
    }
    artifacts.push(t.into_artifact("vqe_minimum.csv"));
    let (dv, de) = (dissociation_energy(&vqe_e), dissociation_energy(&exact_e));
    let worst = vqe_e.iter().zip(&exact_e).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(Report {
        artifacts,
        summary: vec![
            format!("max |E_vqe - E0| = {worst:.3e} Ha"),
            format!("dissociation energy: vqe {dv:.8} Ha, exact {de:.8} Ha, error {:.3e} Ha", dv - de),
        ],
    })
}

pub fn pea_run(cfg: &RunConfig) -> Result<Report, CliError> {
    let noise = (cfg.pea.noisy && !cfg.noise.is_noiseless()).then_some(&cfg.noise);
    let rows = over_grid(cfg, |r| {
        let m = H2Model::at(r)?;
        let h = &m.hamiltonian;
        let t0 = resolve_t0(cfg, h);
        let spec = TrotterSpec {
            t0,
            rho: cfg.pea.rho,
            ordering: resolve_ordering(cfg, h, t0)?,
            bits: cfg.pea.bits,
            reps: cfg.pea.reps,
            substitute_z0z1: cfg.pea.substitute_z0z1,
        };
        let out = iterative_pea(h, r, &spec, cfg.pea.mode, noise, point_seed(cfg, r))?;
        Ok((m.ground_energy(), out))
    })?;

    let mut t = Table::new(&[
        "R_angstrom", "mode", "t0", "rho", "ordering", "bits", "energy_hartree", "exact_hartree", "error_hartree", "resolution_hartree",
    ]);
    let mut pea_e = Vec::new();
    let mut exact_e = Vec::new();
    for (e0, o) in &rows {
        let bits: String = o.bits.iter().map(|b| char::from(b'0' + b)).collect();
        let resolution = std::f64::consts::PI / (o.t0 * 2f64.powi(o.bits.len() as i32));
        t.row([
            num(o.r_angstrom),
            o.mode.name().to_string(),
            num(o.t0),
            o.rho.to_string(),
            ordering_name(&o.ordering),
            bits,
            num(o.energy_hartree),
            num(*e0),
            num(o.energy_hartree - e0),
            num(resolution),
        ]);
        pea_e.push(o.energy_hartree);
        exact_e.push(*e0);
    }
    let outcomes: Vec<_> = rows.iter().map(|(_, o)| o).collect();
    let (dp, de) = (dissociation_energy(&pea_e), dissociation_energy(&exact_e));
    Ok(Report {
        artifacts: vec![json_artifact("pea_runs.json", &outcomes), t.into_artifact("pea_energies.csv")],
        summary: vec![format!("dissociation energy: pea {dp:.8} Ha, exact {de:.8} Ha, error {:.3e} Ha", dp - de)],
    })
}

struct TrotterPoint {
    r: f64,
    t0: f64,
    ordering: [TermLabel; 5],
    phase: Vec<f64>,
    norm: Vec<f64>,
    scores: Vec<([TermLabel; 5], f64)>,
}

pub fn trotter_study(cfg: &RunConfig) -> Result<Report, CliError> {
    let rhos = &cfg.trotter.rhos;
    let points = over_grid(cfg, |r| {
        let h = H2Model::at(r)?.hamiltonian;
        let t0 = resolve_t0(cfg, &h);
        let ordering = resolve_ordering(cfg, &h, t0)?;
        let phase = rhos.iter().map(|&p| eigenphase_error(&h, t0, &ordering, p)).collect::<Result<Vec<_>, _>>()?;
        let norm = rhos.iter().map(|&p| operator_norm_error(&h, t0, &ordering, p)).collect::<Result<Vec<_>, _>>()?;
        Ok(TrotterPoint { r, t0, ordering, phase, norm, scores: ordering_scores(&h, t0)? })
    })?;

    let mut by_rho = Table::new(&["R_angstrom", "t0", "ordering", "rho", "eigenphase_error", "operator_norm_error"]);
    let mut slopes = Table::new(&["R_angstrom", "ordering", "eigenphase_slope", "operator_norm_slope"]);
    let mut orderings = Table::new(&["R_angstrom", "rank", "ordering", "eigenphase_error", "optimal"]);
    let mut phase_slopes = Vec::new();
    for p in &points {
        let name = ordering_name(&p.ordering);
        for (i, &rho) in rhos.iter().enumerate() {
            by_rho.row([num(p.r), num(p.t0), name.clone(), rho.to_string(), num(p.phase[i]), num(p.norm[i])]);
        }
        let ps = log_log_slope(rhos, &p.phase);
        phase_slopes.push(ps);
        slopes.row([num(p.r), name, num(ps), num(log_log_slope(rhos, &p.norm))]);

        let best = p.scores.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
        let mut ranked = p.scores.clone();
        ranked.sort_by(|a, b| a.1.total_cmp(&b.1));
        for (rank, (o, s)) in ranked.iter().enumerate() {
            let optimal = *s <= best + ORDERING_TIE;
            orderings.row([num(p.r), (rank + 1).to_string(), ordering_name(o), num(*s), optimal.to_string()]);
        }
    }
    let mean_slope = phase_slopes.iter().sum::<f64>() / phase_slopes.len() as f64;
    Ok(Report {
        artifacts: vec![
            by_rho.into_artifact("trotter_rho.csv"),
            slopes.into_artifact("trotter_slopes.csv"),
            orderings.into_artifact("trotter_orderings.csv"),
        ],
        summary: vec![format!("mean log-log slope of eigenphase error vs rho: {mean_slope:.3}")],
    })
}

pub fn noise_study(cfg: &RunConfig) -> Result<Report, CliError> {
    if cfg.noise.is_noiseless() {
        log::warn!("noise-study with a noiseless [noise] section: every gap will be zero");
    }
    let rows: Vec<NoiseStudyRow> = over_grid(cfg, |r| {
        let h = H2Model::at(r)?.hamiltonian;
        Ok(noise_study_point(&h, r, &cfg.noise, &vqe_settings(cfg, r), EXEC)?)
    })?;
    let mut t = Table::new(&[
        "R_angstrom",
        "exact_hartree",
        "theta_ref",
        "theta_min",
        "energy_ref_hartree",
        "energy_min_hartree",
        "error_ref_hartree",
        "error_min_hartree",
        "gap_hartree",
    ]);
    for w in &rows {
        t.row([
            num(w.r_angstrom),
            num(w.exact_energy),
            num(w.theta_ref),
            num(w.theta_min),
            num(w.energy_ref),
            num(w.energy_min),
            num(w.error_ref()),
            num(w.error_min()),
            num(w.gap()),
        ]);
    }
    let positive = rows.iter().filter(|w| w.gap() > 0.0).count();
    Ok(Report {
        artifacts: vec![t.into_artifact("noise_study.csv")],
        summary: vec![format!("positive gap at {positive} of {} bond lengths", rows.len())],
    })
}
