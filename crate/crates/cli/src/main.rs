use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use collision_cli::config::figure_preset;
use collision_cli::{emit, resolve_config, run_experiment, CliError, Format, ModelPreset, Overrides, Propagator};

/// Collision-model experiments: trajectories, steady states and sweeps.
#[derive(Debug, Parser)]
#[command(name = "simulate", version)]
struct Args {
    /// Configuration file, a table emitted earlier, or a figure preset (fig3 … fig7).
    config: Option<String>,
    /// Output directory; tables go to standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
    /// Model: example1 or example2.
    #[arg(long)]
    preset: Option<ModelPreset>,
    /// Number of collisions.
    #[arg(long)]
    steps: Option<usize>,
    /// Ancilla inverse temperature.
    #[arg(long)]
    beta: Option<f64>,
    /// Ancilla qubit-qubit coupling κ₁₂.
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    /// exact, second-order or analytic.
    #[arg(long)]
    propagator: Option<Propagator>,
}

fn load(arg: Option<&str>) -> Result<String, CliError> {
    let Some(arg) = arg else { return Ok(String::new()) };
    let path = PathBuf::from(arg);
    if path.exists() {
        return std::fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{arg}: {e}")));
    }
    figure_preset(arg)
        .map(str::to_string)
        .ok_or_else(|| CliError::Config(format!("`{arg}` is neither a readable file nor a figure preset (fig3 … fig7)")))
}

fn run(args: Args) -> Result<(), CliError> {
    let source = load(args.config.as_deref())?;
    let overrides = Overrides {
        preset: args.preset,
        steps: args.steps,
        beta: args.beta,
        kappa: args.kappa,
        dt: args.dt,
        propagator: args.propagator,
        format: args.format,
        out: args.out.map(|p| p.to_string_lossy().into_owned()),
    };
    let cfg = resolve_config(&source, &overrides)?;
    let tables = run_experiment(&cfg)?;
    let dir = cfg.output.dir.as_ref().map(PathBuf::from);
    emit(&tables, cfg.output.format, dir.as_deref(), &mut io::stdout().lock())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("simulate: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
