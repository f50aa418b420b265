//! Run configuration: one TOML file plus `--set key=value` overrides.

use std::fmt;
use std::path::{Path, PathBuf};

use h2sim::chemistry::default_grid;
use h2sim::pea::{check_ordering, PeaMode, MAX_BITS};
use h2sim::simulator::NoiseModel;
use h2sim::vqe::{Gauge, Shots};
use h2sim::TermLabel;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Base seed; every stochastic stream is derived from it.
    pub seed: u64,
    pub output_dir: PathBuf,
    /// Bond lengths in Angstrom.
    pub r_grid: Vec<f64>,
    /// Shots per measurement setting for VQE, or `"exact"`.
    pub shots: Shots,
    pub vqe: VqeConfig,
    pub pea: PeaConfig,
    pub trotter: TrotterConfig,
    pub noise: NoiseModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VqeConfig {
    pub grid_size: usize,
    /// Average over the four qubit-flip gauges; otherwise only the bare ansatz.
    pub gauges: bool,
    pub refine: bool,
    pub substitute_z0z1: bool,
    pub write_surface: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PeaConfig {
    pub mode: PeaMode,
    pub t0: TimeStep,
    pub rho: u32,
    pub bits: usize,
    pub reps: Shots,
    pub ordering: Ordering,
    pub substitute_z0z1: bool,
    /// Apply the `[noise]` model to the Trotter circuit.
    pub noisy: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrotterConfig {
    pub rhos: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Auto {
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Optimize {
    Optimize,
}

/// `"auto"` picks `0.95 pi / sum|g|` separately at each bond length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TimeStep {
    Auto(Auto),
    Fixed(f64),
}

/// `"optimize"` searches all 120 orderings at each bond length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ordering {
    Optimize(Optimize),
    Fixed([TermLabel; 5]),
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            output_dir: PathBuf::from("results"),
            r_grid: default_grid(),
            shots: Shots::Exact,
            vqe: VqeConfig::default(),
            pea: PeaConfig::default(),
            trotter: TrotterConfig::default(),
            noise: NoiseModel::noiseless(),
        }
    }
}

impl Default for VqeConfig {
    fn default() -> Self {
        VqeConfig { grid_size: 1000, gauges: true, refine: true, substitute_z0z1: false, write_surface: true }
    }
}

impl Default for PeaConfig {
    fn default() -> Self {
        PeaConfig {
            mode: PeaMode::ExactPropagator,
            t0: TimeStep::Auto(Auto::Auto),
            rho: 1,
            bits: 10,
            reps: Shots::Count(1000),
            ordering: Ordering::Optimize(Optimize::Optimize),
            substitute_z0z1: false,
            noisy: false,
        }
    }
}

impl Default for TrotterConfig {
    fn default() -> Self {
        TrotterConfig { rhos: vec![1, 2, 4, 8, 16] }
    }
}

impl VqeConfig {
    pub fn gauge_list(&self) -> Vec<Gauge> {
        if self.gauges {
            Gauge::ALL.to_vec()
        } else {
            vec![Gauge::Neither]
        }
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&toml::to_string(self).map_err(|_| fmt::Error)?)
    }
}

impl RunConfig {
    /// Read `path` (or start from defaults), apply overrides in order, then
    /// validate.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self, CliError> {
        let (mut table, text) = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
                let table = text.parse::<toml::Table>().map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                (table, Some(text))
            }
            None => (toml::Table::new(), None),
        };
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        check_keys(&table)?;
        let cfg: RunConfig = match (text, overrides.is_empty()) {
            // the file as written, so that error positions match it
            (Some(text), true) => toml::from_str(&text),
            _ => toml::from_str(&table.to_string()),
        }
        .map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.r_grid.is_empty() {
            return bad("r_grid must not be empty".into());
        }
        for (i, &r) in self.r_grid.iter().enumerate() {
            if !(r > 0.0 && r.is_finite()) {
                return bad(format!("r_grid[{i}] = {r} is not a positive bond length"));
            }
            if i > 0 && r <= self.r_grid[i - 1] {
                return bad(format!("r_grid must be strictly increasing: r_grid[{i}] = {r} after {}", self.r_grid[i - 1]));
            }
        }
        if self.vqe.grid_size < 2 {
            return bad(format!("vqe.grid_size must be at least 2, got {}", self.vqe.grid_size));
        }
        if let TimeStep::Fixed(t) = self.pea.t0 {
            if !(t > 0.0 && t.is_finite()) {
                return bad(format!("pea.t0 must be positive or \"auto\", got {t}"));
            }
        }
        if let Ordering::Fixed(o) = &self.pea.ordering {
            check_ordering(o).map_err(|e| CliError::Config(format!("pea.ordering: {e}")))?;
        }
        if self.pea.rho == 0 {
            return bad("pea.rho must be at least 1".into());
        }
        if self.pea.bits == 0 || self.pea.bits > MAX_BITS {
            return bad(format!("pea.bits must be in 1..={MAX_BITS}, got {}", self.pea.bits));
        }
        if self.pea.noisy && self.pea.mode == PeaMode::ExactPropagator && !self.noise.is_noiseless() {
            return bad("pea.noisy needs pea.mode = \"trotter\"".into());
        }
        if self.trotter.rhos.len() < 2 || self.trotter.rhos.contains(&0) {
            return bad("trotter.rhos needs at least two positive step counts".into());
        }
        self.noise.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(())
    }
}

/// Reject any key that is not in [`KEY_DOCS`], naming its full dotted path.
fn check_keys(table: &toml::Table) -> Result<(), CliError> {
    let known = |k: &str| KEY_DOCS.iter().any(|(d, _)| *d == k);
    let section = |k: &str| KEY_DOCS.iter().any(|(d, _)| d.split_once('.').is_some_and(|(s, _)| s == k));
    for (k, v) in table {
        match v {
            toml::Value::Table(t) if section(k) => {
                if let Some(sub) = t.keys().find(|s| !known(&format!("{k}.{s}"))) {
                    return Err(CliError::Config(format!("unknown key `{k}.{sub}`")));
                }
            }
            _ if section(k) => return Err(CliError::Config(format!("`{k}` must be a [{k}] section"))),
            _ if known(k) => {}
            _ => return Err(CliError::Config(format!("unknown key `{k}`"))),
        }
    }
    Ok(())
}

/// `a.b.c=value`; the value is read as a TOML literal, or as a bare string
/// when it does not parse as one.
fn apply_override(table: &mut toml::Table, spec: &str) -> Result<(), CliError> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("--set expects key=value, got {spec:?}")))?;
    let key = key.trim();
    let raw = raw.trim();
    let value = match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("single key"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::Config(format!("--set: malformed key {key:?}")));
    }
    let (last, parents) = parts.split_last().expect("nonempty");
    let mut cur = table;
    for (i, p) in parents.iter().enumerate() {
        let entry = cur.entry(p.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = match entry {
            toml::Value::Table(t) => t,
            _ => return Err(CliError::Config(format!("--set {key}: {} is not a section", parts[..=i].join(".")))),
        };
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

/// Every key with its meaning; the reference page lists them in this order.
pub const KEY_DOCS: &[(&str, &str)] = &[
    ("seed", "Base seed. Each bond length and measurement stream gets its own seed derived from it."),
    ("output_dir", "Directory for CSV, JSON and manifest files. Created if missing."),
    ("r_grid", "Bond lengths in Angstrom. Nonempty and strictly increasing."),
    ("shots", "VQE shots per measurement setting, or \"exact\" for exact expectation values."),
    ("vqe.grid_size", "Number of theta points on [-pi, pi)."),
    ("vqe.gauges", "Average the four qubit-flip gauges. When false only the bare ansatz is used."),
    ("vqe.refine", "Golden-section polish of the grid minimum in exact mode."),
    ("vqe.substitute_z0z1", "Use the Hartree-Fock value -1 for Z0Z1 instead of measuring it."),
    ("vqe.write_surface", "Write the per-gauge energy surface CSV (one row per R, theta and gauge)."),
    ("pea.mode", "\"exact_propagator\" controls the dense exp(-i H t0); \"trotter\" runs the gate-level Trotter circuit."),
    ("pea.t0", "Evolution time in atomic units, or \"auto\" for 0.95 pi divided by the sum of absolute coefficients at each R."),
    ("pea.rho", "Trotter steps per unit of t0."),
    ("pea.bits", "Number of phase bits, 1 to 24."),
    ("pea.reps", "Ancilla measurements per bit for the majority vote, or \"exact\" to threshold P(1) at 1/2."),
    ("pea.ordering", "Product order of Z0, Z1, Z0Z1, X0X1, Y0Y1, or \"optimize\" to pick the best of all 120 at each R."),
    ("pea.substitute_z0z1", "Replace the controlled Z0Z1 evolution by a phase using its Hartree-Fock value."),
    ("pea.noisy", "Apply the [noise] model to the PEA circuit (trotter mode only)."),
    ("trotter.rhos", "Step counts for the Trotter error study."),
    ("noise.t1", "Relaxation time in gate-duration units. Unset means no relaxation."),
    ("noise.t2", "Dephasing time, at most 2 t1. Unset means no extra dephasing."),
    ("noise.duration_1q", "Duration of a single-qubit gate."),
    ("noise.duration_2q", "Duration of a CZ gate."),
    ("noise.overrotation", "Fractional systematic error on every gate angle, e.g. 0.05."),
    ("noise.depolarizing_1q", "Depolarizing probability after single-qubit gates."),
    ("noise.depolarizing_2q", "Depolarizing probability on each target after two-qubit gates."),
    ("noise.angle_jitter", "Standard deviation of a random per-gate angle error, in radians."),
    ("noise.split_cz", "Compile CZ(phi) outside the native range as CZ(pi) CZ(phi - pi)."),
    ("noise.ancilla_phase_error", "Extra Rz angle on the ancilla after each two-qubit gate touching it."),
];

/// Markdown reference of every key and its default.
pub fn reference() -> String {
    let defaults: toml::Table = toml::to_string(&RunConfig::default())
        .expect("default config serializes")
        .parse()
        .expect("round trip");
    let lookup = |key: &str| -> Option<toml::Value> {
        let mut parts = key.split('.');
        let mut v = defaults.get(parts.next()?)?.clone();
        for p in parts {
            v = v.as_table()?.get(p)?.clone();
        }
        Some(v)
    };
    let mut out = String::from("# h2sim configuration reference\n\n");
    out.push_str("Generated by `h2sim config-reference`. Any key can be overridden with `--set key=value`; unknown keys are errors.\n\n");
    out.push_str("| key | default | meaning |\n|---|---|---|\n");
    for (key, doc) in KEY_DOCS {
        let default = match lookup(key) {
            Some(toml::Value::Array(a)) if a.len() > 8 => format!("{} values, {} to {}", a.len(), a[0], a[a.len() - 1]),
            Some(v) => v.to_string(),
            None => "unset".to_string(),
        };
        out.push_str(&format!("| `{key}` | `{default}` | {doc} |\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = RunConfig::default();
        let text = c.to_string();
        let back = RunConfig::parse(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_string(), text);
    }

    #[test]
    fn overrides_reach_nested_keys() {
        let c = RunConfig::load(
            None,
            &[
                "noise.overrotation=0.05".into(),
                "pea.mode=trotter".into(),
                "shots=10000".into(),
                "r_grid=[0.5, 0.75]".into(),
                "pea.ordering=[\"X0X1\", \"Y0Y1\", \"Z0\", \"Z1\", \"Z0Z1\"]".into(),
                "pea.t0=1.5".into(),
            ],
        )
        .unwrap();
        assert_eq!(c.noise.overrotation, 0.05);
        assert_eq!(c.pea.mode, PeaMode::Trotter);
        assert_eq!(c.shots, Shots::Count(10_000));
        assert_eq!(c.r_grid, vec![0.5, 0.75]);
        assert_eq!(c.pea.t0, TimeStep::Fixed(1.5));
        assert!(matches!(c.pea.ordering, Ordering::Fixed([TermLabel::X0X1, ..])));
    }

    #[test]
    fn unknown_keys_are_named() {
        for (o, name) in [("vqe.grid_sise=10", "`vqe.grid_sise`"), ("bogus=1", "`bogus`"), ("noise.t3=4", "`noise.t3`"), ("vqe=3", "vqe")] {
            let e = RunConfig::load(None, &[o.into()]).unwrap_err();
            assert!(e.to_string().contains(name), "{e}");
            assert_eq!(e.exit_code(), 1);
        }
    }

    #[test]
    fn validation_names_the_field() {
        for (o, name) in [
            ("r_grid=[1.0, 0.5]", "r_grid"),
            ("r_grid=[]", "r_grid"),
            ("vqe.grid_size=1", "vqe.grid_size"),
            ("pea.bits=30", "pea.bits"),
            ("pea.rho=0", "pea.rho"),
            ("pea.t0=-1.0", "pea.t0"),
            ("pea.ordering=[\"Z0\", \"Z0\", \"Z1\", \"X0X1\", \"Y0Y1\"]", "pea.ordering"),
            ("noise.depolarizing_1q=2.0", "noise.depolarizing_1q"),
            ("shots=0", "shots"),
        ] {
            let e = RunConfig::load(None, &[o.into()]).unwrap_err();
            assert!(e.to_string().contains(name), "{o}: {e}");
        }
    }

    #[test]
    fn reference_covers_every_key() {
        let mut c = RunConfig::default();
        c.noise.t1 = Some(1.0);
        c.noise.t2 = Some(1.0);
        let table: toml::Table = c.to_string().parse().unwrap();
        let mut keys = Vec::new();
        for (k, v) in &table {
            match v {
                toml::Value::Table(t) => keys.extend(t.keys().map(|s| format!("{k}.{s}"))),
                _ => keys.push(k.clone()),
            }
        }
        for k in &keys {
            assert!(KEY_DOCS.iter().any(|(d, _)| d == k), "{k} undocumented");
        }
        assert_eq!(keys.len(), KEY_DOCS.len());
        assert!(reference().contains("| `pea.t0` | `\"auto\"` |"));
    }
}
