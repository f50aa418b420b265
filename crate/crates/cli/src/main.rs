use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use h2sim_cli::commands::{self, Report};
use h2sim_cli::config::{reference, RunConfig};
use h2sim_cli::output::{persist, write_atomic};
use h2sim_cli::CliError;

/// Molecular hydrogen on a simulated two-qubit processor: integrals, exact
/// curve, VQE, iterative phase estimation and Trotter studies.
#[derive(Parser)]
#[command(name = "h2sim", version)]
struct Cli {
    /// TOML run configuration; defaults apply to anything left out.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override one key, e.g. `--set noise.overrotation=0.05`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Two-qubit Hamiltonian coefficients and 4-qubit BK coefficients per R.
    Integrals,
    /// Hartree-Fock and exact ground energies per R.
    ExactCurve,
    /// VQE energy surface over theta and the minimum curve.
    VqeScan,
    /// Iterative phase estimation per R.
    PeaRun,
    /// Trotter error against step count, and all 120 term orderings.
    TrotterStudy,
    /// Noisy energy at the noiseless optimum against the noisy optimum.
    NoiseStudy,
    /// Print (or write) the configuration reference.
    ConfigReference {
        /// Write to this file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Integrals => "integrals",
            Command::ExactCurve => "exact-curve",
            Command::VqeScan => "vqe-scan",
            Command::PeaRun => "pea-run",
            Command::TrotterStudy => "trotter-study",
            Command::NoiseStudy => "noise-study",
            Command::ConfigReference { .. } => "config-reference",
        }
    }
}

fn limit_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("H2SIM_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("H2SIM_THREADS must be a positive integer, got {v:?}")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("H2SIM_THREADS: {e}")))?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Command::ConfigReference { output } = &cli.command {
        let text = reference();
        match output {
            Some(p) => {
                let dir = p.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(std::path::Path::new("."));
                let name = p.file_name().ok_or_else(|| CliError::Io(format!("{} is not a file path", p.display())))?;
                write_atomic(dir, &name.to_string_lossy(), text.as_bytes())?;
            }
            None => print!("{text}"),
        }
        return Ok(());
    }

    limit_threads()?;
    let cfg = RunConfig::load(cli.config.as_deref(), &cli.overrides)?;
    let report: Report = match cli.command {
        Command::Integrals => commands::integrals(&cfg)?,
        Command::ExactCurve => commands::exact(&cfg)?,
        Command::VqeScan => commands::vqe_scan(&cfg)?,
        Command::PeaRun => commands::pea_run(&cfg)?,
        Command::TrotterStudy => commands::trotter_study(&cfg)?,
        Command::NoiseStudy => commands::noise_study(&cfg)?,
        Command::ConfigReference { .. } => unreachable!(),
    };
    for p in persist(&cfg.output_dir, cli.command.name(), &cfg, &report.artifacts)? {
        println!("wrote {}", p.display());
    }
    for line in &report.summary {
        println!("{line}");
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("h2sim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
