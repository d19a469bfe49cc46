use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use frenet_ife::config::{parse_config, RunConfig, Sigma0};
use frenet_ife::Error;

mod commands;
mod output;

#[derive(Parser, Debug)]
#[command(name = "frenet-ife", version, about = "Frenet IFE / SIPDG solver for curved interface problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Solve on one mesh (the finest listed) and report errors.
    Solve,
    /// Solve on every mesh and report errors and rates.
    Convergence,
    /// Transition-map and interval probes on every mesh.
    ProbeGeometry,
    /// Element trace constants on every mesh.
    ProbeTrace,
    /// Discrete coercivity constant and threshold penalty on every mesh.
    ProbeCoercivity,
}

#[derive(Args, Debug, Default)]
struct Overrides {
    /// TOML configuration file (defaults to the circle benchmark).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Mesh size(s) n for n x n meshes; replaces the configured list.
    #[arg(long, global = true, value_delimiter = ',')]
    mesh: Vec<usize>,
    #[arg(long, global = true)]
    degree: Option<usize>,
    /// Penalty: a number or "auto".
    #[arg(long, global = true, allow_hyphen_values = true)]
    sigma0: Option<String>,
    /// Write the stiffness matrix and load vector in matrix-market format.
    #[arg(long, global = true)]
    dump_system: bool,
    /// Single-threaded run with timing fields omitted.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Output directory (overrides the configured one).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

fn load_config(o: &Overrides) -> Result<RunConfig, Error> {
    let mut cfg = match &o.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            parse_config(&text)?
        }
        None => RunConfig::circle(0.6),
    };
    if !o.mesh.is_empty() {
        cfg.discretization.meshes = o.mesh.clone();
    }
    if let Some(d) = o.degree {
        cfg.discretization.degree = d;
    }
    if let Some(s) = &o.sigma0 {
        cfg.discretization.sigma0 = s.parse::<Sigma0>()?;
    }
    if let Some(out) = &o.out {
        cfg.output.dir = out.display().to_string();
    }
    if o.deterministic {
        cfg.output.deterministic = true;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), Error> {
    let cfg = load_config(&cli.overrides)?;
    if cfg.output.deterministic {
        // the global pool may already exist when embedded; ignore that case
        let _ = rayon::ThreadPoolBuilder::new().num_threads(1).build_global();
    }
    let out = PathBuf::from(&cfg.output.dir);
    std::fs::create_dir_all(&out)?;
    let dump = cli.overrides.dump_system;
    match cli.command {
        Command::Solve => commands::solve(&cfg, &out, dump),
        Command::Convergence => commands::convergence(&cfg, &out),
        Command::ProbeGeometry => commands::probe_geometry(&cfg, &out),
        Command::ProbeTrace => commands::probe_trace(&cfg, &out),
        Command::ProbeCoercivity => commands::probe_coercivity(&cfg, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let body = serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
            eprintln!("{body}");
            match e {
                Error::Config(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
