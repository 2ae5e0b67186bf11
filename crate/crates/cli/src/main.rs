use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sim_cli::{exit_code, resolve_output_dir, run_scenario, validate_config, Command, RunError};

/// Batch front end for the horizon and branch-ensemble simulators.
///
/// Each subcommand runs one scenario described by a TOML config and writes
/// CSV/JSON artifacts plus a checksummed manifest into the output
/// directory. Outputs are deterministic given (config, seed).
#[derive(Parser)]
#[command(name = "sim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario config file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Override the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Particle-horizon radii over a time grid.
    Horizon(RunArgs),
    /// Holographic-bound ratio over a time grid.
    Bound(RunArgs),
    /// Branch ensemble table and probability sums.
    Branches(RunArgs),
    /// Max-branch probability decay curve.
    Decay(RunArgs),
    /// Replicated-observer measurement simulation.
    #[command(name = "collapse-sim")]
    CollapseSim(RunArgs),
    /// Frequency-operator Born-convergence table.
    Frequency(RunArgs),
    /// Infinite-product convergence analysis.
    Products(RunArgs),
}

impl CliCommand {
    fn split(&self) -> (Command, &RunArgs) {
        match self {
            Self::Horizon(a) => (Command::Horizon, a),
            Self::Bound(a) => (Command::Bound, a),
            Self::Branches(a) => (Command::Branches, a),
            Self::Decay(a) => (Command::Decay, a),
            Self::CollapseSim(a) => (Command::CollapseSim, a),
            Self::Frequency(a) => (Command::Frequency, a),
            Self::Products(a) => (Command::Products, a),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = cli.command.split();

    let raw = match std::fs::read_to_string(&args.config) {
        Ok(raw) => raw,
        Err(e) => {
            eprintln!("error: cannot read config {}: {e}", args.config.display());
            return ExitCode::from(exit_code::IO as u8);
        }
    };

    let mut scenario = match validate_config(&raw) {
        Ok(s) => s,
        Err(errors) => {
            for e in &errors {
                eprintln!("{e}");
            }
            eprintln!("error: {} config violation(s)", errors.len());
            return ExitCode::from(exit_code::CONFIG as u8);
        }
    };

    if scenario.command != command {
        eprintln!(
            "error: config declares command `{}` but `{}` was invoked",
            scenario.command.as_str(),
            command.as_str()
        );
        return ExitCode::from(exit_code::CONFIG as u8);
    }

    if let Some(state) = scenario.state() {
        if state.needed_rescale() {
            eprintln!("warning: `state` amplitudes were rescaled to unit norm");
        }
    }

    if let Some(seed) = args.seed {
        scenario.seed = seed;
    }
    let output_dir = resolve_output_dir(&scenario, args.out.as_deref());

    match run_scenario(&scenario, &output_dir) {
        Ok(bundle) => {
            println!(
                "wrote {} file(s) + manifest.json to {}",
                bundle.manifest.files.len(),
                bundle.output_dir.display()
            );
            for f in &bundle.manifest.files {
                println!("  {}  {} bytes  sha256:{}", f.name, f.bytes, f.sha256);
            }
            ExitCode::from(exit_code::SUCCESS as u8)
        }
        Err(RunError::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(exit_code::NUMERIC as u8)
        }
        Err(RunError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code::IO as u8)
        }
    }
}
