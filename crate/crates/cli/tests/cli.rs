use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use h2sim_cli::output::{blob_hash, Manifest};
use h2sim_cli::RunConfig;

const SUBCOMMANDS: [&str; 6] = ["integrals", "exact-curve", "vqe-scan", "pea-run", "trotter-study", "noise-study"];

fn h2sim(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_h2sim"));
    c.args(args).env_remove("H2SIM_THREADS");
    for (k, v) in envs {
        c.env(k, v);
    }
    c.output().expect("binary runs")
}

fn small_config(dir: &Path) -> PathBuf {
    let path = dir.join("run.toml");
    let text = format!(
        r#"seed = 7
output_dir = "{}"
r_grid = [0.5, 0.75, 2.0]
shots = 2000

[vqe]
grid_size = 40

[pea]
mode = "trotter"
bits = 8
reps = 101

[noise]
overrotation = 0.05
"#,
        dir.join("out").display()
    );
    std::fs::write(&path, text).unwrap();
    path
}

fn read_dir(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}

fn rows(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path).unwrap().records().map(|r| r.unwrap()).collect()
}

fn column(path: &Path, name: &str) -> Vec<f64> {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    let i = rdr.headers().unwrap().iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rdr.records().map(|r| r.unwrap()[i].parse().unwrap()).collect()
}

#[test]
fn every_subcommand_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let cfg = cfg.to_str().unwrap();
    let out = tmp.path().join("out");
    for cmd in SUBCOMMANDS {
        let a = h2sim(&[cmd, "--config", cfg], &[]);
        assert!(a.status.success(), "{cmd}: {}", String::from_utf8_lossy(&a.stderr));
        let first = read_dir(&out);
        let b = h2sim(&[cmd, "--config", cfg], &[("H2SIM_THREADS", "1")]);
        assert!(b.status.success());
        assert_eq!(first, read_dir(&out), "{cmd} output changed between runs");
    }
}

#[test]
fn manifest_describes_outputs_and_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    assert!(h2sim(&["pea-run", "--config", cfg.to_str().unwrap()], &[]).status.success());
    let out = tmp.path().join("out");
    let m: Manifest = serde_json::from_slice(&std::fs::read(out.join("manifest-pea-run.json")).unwrap()).unwrap();
    assert_eq!(m.command, "pea-run");
    assert_eq!(m.files.len(), 2);
    for f in &m.files {
        let bytes = std::fs::read(out.join(&f.name)).unwrap();
        assert_eq!(f.bytes, bytes.len());
        assert_eq!(f.sha256, blob_hash(&bytes));
    }
    let parsed = RunConfig::parse(&m.config).unwrap();
    assert_eq!(parsed.to_string(), m.config);
    assert_eq!(parsed.seed, 7);
    assert_eq!(m.config_sha256, blob_hash(m.config.as_bytes()));

    // rerunning from the echoed config reproduces the same files
    let echo = tmp.path().join("echo.toml");
    std::fs::write(&echo, &m.config).unwrap();
    let before = read_dir(&out);
    assert!(h2sim(&["pea-run", "--config", echo.to_str().unwrap()], &[]).status.success());
    assert_eq!(before, read_dir(&out));
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = format!("output_dir=\"{}\"", tmp.path().display());

    let o = h2sim(&["exact-curve", "--set", &dir, "--set", "r_grid=[0.75]"], &[]);
    assert_eq!(o.status.code(), Some(0));

    let o = h2sim(&["vqe-scan", "--set", "vqe.grid_sise=10"], &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("vqe.grid_sise"));

    let o = h2sim(&["exact-curve", "--set", "r_grid=[0.9, 0.8]"], &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("r_grid"));

    let o = h2sim(&["exact-curve", "--config", "/nonexistent/run.toml"], &[]);
    assert_eq!(o.status.code(), Some(1));

    let o = h2sim(&["exact-curve", "--set", &dir], &[("H2SIM_THREADS", "zero")]);
    assert_eq!(o.status.code(), Some(1));

    let blocker = tmp.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let o = h2sim(&["exact-curve", "--set", &format!("output_dir=\"{}\"", blocker.join("sub").display())], &[]);
    assert_eq!(o.status.code(), Some(2));

    let o = h2sim(&["pea-run", "--set", &dir, "--set", "r_grid=[0.75]", "--set", "pea.t0=20.0"], &[]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("alias"));
}

#[test]
fn help_for_every_subcommand() {
    for cmd in SUBCOMMANDS.iter().chain(&["config-reference"]) {
        let o = h2sim(&[cmd, "--help"], &[]);
        assert!(o.status.success());
        let text = String::from_utf8_lossy(&o.stdout);
        assert!(text.contains("--config") && text.contains("--set"), "{cmd}");
    }
}

#[test]
fn single_point_grid_gives_one_row() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = format!("output_dir=\"{}\"", tmp.path().display());
    assert!(h2sim(&["exact-curve", "--set", &dir, "--set", "r_grid=[0.7414]"], &[]).status.success());
    let r = rows(&tmp.path().join("exact_curve.csv"));
    assert_eq!(r.len(), 1);
    assert_eq!(&r[0][0], "0.7414");
}

#[test]
fn points_do_not_depend_on_the_rest_of_the_grid() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |grid: &str, sub: &str| {
        let d = tmp.path().join(sub);
        let dir = format!("output_dir=\"{}\"", d.display());
        let args = ["vqe-scan", "--set", &dir, "--set", grid, "--set", "shots=500", "--set", "vqe.grid_size=20"];
        assert!(h2sim(&args, &[]).status.success());
        rows(&d.join("vqe_minimum.csv"))
    };
    let alone = run("r_grid=[1.0]", "a");
    let among = run("r_grid=[0.6, 1.0, 1.4]", "b");
    assert_eq!(alone[0], among[1]);
}

#[test]
fn exact_curve_minimum_near_equilibrium() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = format!("output_dir=\"{}\"", tmp.path().display());
    assert!(h2sim(&["exact-curve", "--set", &dir], &[]).status.success());
    let path = tmp.path().join("exact_curve.csv");
    let r = column(&path, "R_angstrom");
    let e = column(&path, "exact_hartree");
    assert_eq!(r.len(), 52);
    let i = (0..e.len()).min_by(|&a, &b| e[a].total_cmp(&e[b])).unwrap();
    assert!((0.70..=0.75).contains(&r[i]), "argmin {}", r[i]);
}

#[test]
fn noiseless_vqe_matches_exact_dissociation() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = format!("output_dir=\"{}\"", tmp.path().display());
    let grid = "r_grid=[0.5, 0.75, 1.0, 1.5, 2.85]";
    let args = ["vqe-scan", "--set", &dir, "--set", grid, "--set", "vqe.grid_size=100", "--set", "vqe.write_surface=false"];
    assert!(h2sim(&args, &[]).status.success());
    assert!(!tmp.path().join("vqe_surface.csv").exists());
    let path = tmp.path().join("vqe_minimum.csv");
    let v = column(&path, "energy_hartree");
    let e = column(&path, "exact_hartree");
    let d = |x: &[f64]| x[x.len() - 1] - x.iter().copied().fold(f64::INFINITY, f64::min);
    assert!((d(&v) - d(&e)).abs() < 1e-4);
}

#[test]
fn exact_pea_within_resolution() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = format!("output_dir=\"{}\"", tmp.path().display());
    let args = ["pea-run", "--set", &dir, "--set", "r_grid=[0.5, 0.75, 1.5, 2.5]", "--set", "pea.bits=10"];
    assert!(h2sim(&args, &[]).status.success());
    let path = tmp.path().join("pea_energies.csv");
    for (err, res) in column(&path, "error_hartree").iter().zip(column(&path, "resolution_hartree")) {
        assert!(err.abs() <= res, "{err} > {res}");
    }
    let runs: serde_json::Value = serde_json::from_slice(&std::fs::read(tmp.path().join("pea_runs.json")).unwrap()).unwrap();
    for key in ["R", "t0", "rho", "ordering", "bits", "p1_per_bit", "energy_hartree", "mode"] {
        assert!(runs[0].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn noise_study_minimum_never_worse_than_reference() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = format!("output_dir=\"{}\"", tmp.path().display());
    let args = [
        "noise-study", "--set", &dir, "--set", "r_grid=[0.5, 0.75, 2.0]", "--set", "vqe.grid_size=60", "--set", "noise.overrotation=0.05",
    ];
    assert!(h2sim(&args, &[]).status.success());
    let path = tmp.path().join("noise_study.csv");
    for (m, r) in column(&path, "error_min_hartree").iter().zip(column(&path, "error_ref_hartree")) {
        assert!(*m <= r && *m >= -1e-12);
    }
}

#[test]
fn trotter_tables_cover_all_orderings() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = format!("output_dir=\"{}\"", tmp.path().display());
    assert!(h2sim(&["trotter-study", "--set", &dir, "--set", "r_grid=[0.75, 1.5]"], &[]).status.success());
    assert_eq!(rows(&tmp.path().join("trotter_orderings.csv")).len(), 240);
    assert_eq!(rows(&tmp.path().join("trotter_rho.csv")).len(), 10);
    let opt = rows(&tmp.path().join("trotter_orderings.csv"));
    assert_eq!(&opt[0][1], "1");
    assert_eq!(&opt[0][4], "true");
}

#[test]
fn checked_in_reference_is_current() {
    let o = h2sim(&["config-reference"], &[]);
    assert!(o.status.success());
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/config-reference.md");
    let stored = std::fs::read_to_string(&path).expect("docs/config-reference.md exists");
    assert_eq!(String::from_utf8(o.stdout).unwrap(), stored, "regenerate with `h2sim config-reference --output docs/config-reference.md`");
}
