//! `pfield`: command-line front end for the particle-field library.

mod commands;
mod config;
mod error;
mod output;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pfield::verify::{self, Perturbation, VerifyOptions};

use crate::config::{OutputFormat, RunConfig};
use crate::error::CliError;
use crate::output::Table;

#[derive(Debug, Parser)]
#[command(
    name = "pfield",
    version,
    about = "Particle-field trajectories, spectra and verification"
)]
struct Cli {
    /// Flat `key = value` configuration file; flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory (defaults to $OUTPUT_DIR, then the current directory).
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Number of grid points (at least 2).
    #[arg(long, global = true, value_name = "N")]
    grid: Option<usize>,
    /// Extra `key=value` setting, same keys as the configuration file.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Box trajectories for each (n, p_n²/p_P²) mode.
    BoxFigure {
        /// Box width, m.
        #[arg(long)]
        a: Option<String>,
        /// Comma-separated `n:ratio` list.
        #[arg(long)]
        modes: Option<String>,
        /// `second` or `eighth`.
        #[arg(long)]
        variant: Option<String>,
    },
    /// Oscillator trajectory with series and quadrature columns.
    OscTrajectory {
        /// μω₀/ħ, 1/m².
        #[arg(long)]
        alpha: Option<String>,
        /// Quantum number (0 or 1).
        #[arg(long)]
        n: Option<String>,
        /// Field amplitude, m.
        #[arg(long)]
        amplitude: Option<String>,
        /// Level whose classical threshold sets L.
        #[arg(long)]
        n_max: Option<String>,
    },
    /// Polar 2p orbits and their diameters.
    HydrogenFigure {
        #[arg(long)]
        z: Option<String>,
        /// Field amplitude, m.
        #[arg(long)]
        amplitude: Option<String>,
        /// Orbit radius, m (defaults to a₀).
        #[arg(long)]
        radius: Option<String>,
    },
    /// Linear and nonlinear box energy levels.
    Spectrum {
        #[arg(long)]
        a: Option<String>,
        /// Dimensionless εÃ²/k₁².
        #[arg(long, allow_hyphen_values = true)]
        strength: Option<String>,
        #[arg(long)]
        levels: Option<String>,
        /// `plus` or `minus`.
        #[arg(long)]
        phase: Option<String>,
    },
    /// Continuity equation for a two-mode superposition.
    FluxCheck {
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        n1: Option<String>,
        #[arg(long)]
        n2: Option<String>,
        /// Evaluation time, s.
        #[arg(long)]
        time: Option<String>,
    },
    /// Runs the acceptance suite and writes `verify_report.json`.
    Verify {
        /// Scale the computed values of criterion N (negative control).
        #[arg(long, value_name = "N")]
        inject_perturbation: Option<u32>,
        #[arg(long, default_value_t = 1.01)]
        perturbation_factor: f64,
    },
}

fn overrides(cli: &Cli) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for item in &cli.set {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got {item:?}")))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    let mut put = |k: &str, v: &Option<String>| {
        if let Some(v) = v {
            map.insert(k.to_string(), v.clone());
        }
    };
    match &cli.command {
        Command::BoxFigure { a, modes, variant } => {
            put("a", a);
            put("modes", modes);
            put("variant", variant);
        }
        Command::OscTrajectory {
            alpha,
            n,
            amplitude,
            n_max,
        } => {
            put("alpha", alpha);
            put("n", n);
            put("amplitude", amplitude);
            put("n_max", n_max);
        }
        Command::HydrogenFigure {
            z,
            amplitude,
            radius,
        } => {
            put("z", z);
            put("amplitude", amplitude);
            put("radius", radius);
        }
        Command::Spectrum {
            a,
            strength,
            levels,
            phase,
        } => {
            put("a", a);
            put("strength", strength);
            put("levels", levels);
            put("phase", phase);
        }
        Command::FluxCheck { a, n1, n2, time } => {
            put("a", a);
            put("n1", n1);
            put("n2", n2);
            put("time", time);
        }
        Command::Verify { .. } => {}
    }
    put("out", &cli.out.as_ref().map(|p| p.display().to_string()));
    put("format", &cli.format.map(|f| f.to_string()));
    put("grid", &cli.grid.map(|g| g.to_string()));
    Ok(map)
}

fn write_all(tables: &[Table], cfg: &RunConfig) -> Result<(), CliError> {
    for t in tables {
        let path = t.write(&cfg.output_path, cfg.output_format)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn run_verify(cfg: &RunConfig, perturb: Option<u32>, factor: f64) -> Result<(), CliError> {
    let perturb = perturb.map(|criterion| Perturbation { criterion, factor });
    if let Some(p) = perturb {
        if p.criterion == 0 || p.criterion > verify::CRITERIA {
            return Err(CliError::Usage(format!(
                "criterion {} does not exist (1..={})",
                p.criterion,
                verify::CRITERIA
            )));
        }
    }
    let report = verify::run_all(&VerifyOptions { perturb })?;
    for c in &report.criteria {
        println!("{}", c.summary_line());
        for check in c.checks.iter().filter(|k| !k.pass) {
            println!("       failed: {}", check.label);
        }
    }
    std::fs::create_dir_all(&cfg.output_path).map_err(|source| CliError::Io {
        path: cfg.output_path.clone(),
        source,
    })?;
    let path = cfg.output_path.join("verify_report.json");
    let mut doc = serde_json::Map::new();
    doc.insert("version".into(), pfield::VERSION.into());
    doc.insert(
        "perturbation".into(),
        serde_json::to_value(perturb).unwrap_or_default(),
    );
    doc.insert(
        "report".into(),
        serde_json::to_value(&report).unwrap_or_default(),
    );
    let text = serde_json::to_string_pretty(&doc).unwrap_or_default() + "\n";
    std::fs::write(&path, text).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    println!("wrote {}", path.display());
    if report.pass {
        Ok(())
    } else {
        let failed: Vec<String> = report
            .criteria
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.id.to_string())
            .collect();
        Err(CliError::CheckFailed(format!(
            "failing criteria: {}",
            failed.join(", ")
        )))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let map = overrides(&cli)?;
    let file = cli.config.as_deref();
    match &cli.command {
        Command::BoxFigure { .. } => {
            let cfg = RunConfig::build("box-figure", file, map, commands::BOX_KEYS)?;
            write_all(&commands::box_figure(&cfg)?, &cfg)
        }
        Command::OscTrajectory { .. } => {
            let cfg = RunConfig::build("osc-trajectory", file, map, commands::OSC_KEYS)?;
            write_all(&commands::osc_trajectory(&cfg)?, &cfg)
        }
        Command::HydrogenFigure { .. } => {
            let cfg = RunConfig::build("hydrogen-figure", file, map, commands::HYDROGEN_KEYS)?;
            write_all(&commands::hydrogen_figure(&cfg)?, &cfg)
        }
        Command::Spectrum { .. } => {
            let cfg = RunConfig::build("spectrum", file, map, commands::SPECTRUM_KEYS)?;
            let tables = commands::spectrum(&cfg)?;
            print!("{}", commands::spectrum_text(&tables[0]));
            write_all(&tables, &cfg)
        }
        Command::FluxCheck { .. } => {
            let cfg = RunConfig::build("flux-check", file, map, commands::FLUX_KEYS)?;
            let (tables, summary) = commands::flux_check(&cfg)?;
            write_all(&tables, &cfg)?;
            println!(
                "continuity: max residual / max drho/dt = {:e} ({})",
                summary.residual_ratio,
                if summary.pass { "pass" } else { "fail" }
            );
            if summary.pass {
                Ok(())
            } else {
                Err(CliError::CheckFailed(
                    "continuity residual above 1e-6".into(),
                ))
            }
        }
        Command::Verify {
            inject_perturbation,
            perturbation_factor,
        } => {
            let cfg = RunConfig::build("verify", file, map, &[])?;
            run_verify(&cfg, *inject_perturbation, *perturbation_factor)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = std::io::stdout().flush();
            eprintln!("pfield: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
