//! Command-line runner: parse scene files, run exact and Monte Carlo
//! verifications, and emit human-readable or JSON reports.
//!
//! Exit codes: 0 when every check passes, 1 when an identity check fails,
//! 2 on usage or input errors.

mod commands;
mod csv;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::CmdOutput;

#[derive(Parser)]
#[command(
    name = "umbra",
    version,
    about = "Solid angles of cones, simplices and polytopes, verified exactly and by seeded Monte Carlo"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Mc,
}

#[derive(Subcommand)]
enum Command {
    /// Exact cone solid angle via angle excess, with the independent oracle
    Excess {
        /// Cone scene file: { "generators": [[x,y,z], ...] }
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Classify the shadow of a cone for an explicit direction
    Project {
        input: PathBuf,
        /// Projection direction as "x,y,z" (normalized on load)
        #[arg(long, value_parser = parse_direction, allow_hyphen_values = true)]
        direction: Direction,
        #[arg(long, default_value_t = 1e-9, value_parser = parse_epsilon)]
        epsilon: f64,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo census of cone shadows with the identity checks
    McCone {
        input: PathBuf,
        #[arg(long, default_value_t = 1_000_000, value_parser = parse_samples)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9, value_parser = parse_epsilon)]
        epsilon: f64,
        #[arg(long)]
        json: bool,
    },
    /// Estimate both sides of the simplex projection-probability identity
    McSimplex {
        /// Simplex scene file: { "vertices": [[...], ...] }
        input: PathBuf,
        #[arg(long, default_value_t = 1_000_000, value_parser = parse_samples)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Alternating sum of face solid angles against its closed-form target
    GramEuler {
        /// Polytope scene file; facets/faces may be omitted for simplices
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Mc)]
        mode: Mode,
        #[arg(long, default_value_t = 100_000, value_parser = parse_samples)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Standard error versus sample count for the cone solid-angle estimator
    Convergence {
        input: PathBuf,
        /// Largest sample count in the series
        #[arg(long, default_value_t = 1_000_000, value_parser = parse_samples)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the series as CSV to this path
        #[arg(long)]
        csv_out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone)]
struct Direction([f64; 3]);

fn parse_direction(text: &str) -> Result<Direction, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated coordinates, got {}", parts.len()));
    }
    let mut coords = [0.0; 3];
    for (slot, part) in coords.iter_mut().zip(&parts) {
        *slot = part.parse::<f64>().map_err(|e| format!("bad coordinate {part:?}: {e}"))?;
    }
    Ok(Direction(coords))
}

fn parse_samples(text: &str) -> Result<u64, String> {
    let n: u64 = text.parse().map_err(|e| format!("{e}"))?;
    if n < 100 {
        return Err("sample count must be at least 100".into());
    }
    Ok(n)
}

fn parse_epsilon(text: &str) -> Result<f64, String> {
    let eps: f64 = text.parse().map_err(|e| format!("{e}"))?;
    if !(eps > 0.0 && eps < 1e-3) {
        return Err("epsilon must lie in (0, 1e-3)".into());
    }
    Ok(eps)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, json) = match &cli.command {
        Command::Excess { input, json } => (commands::excess(input), *json),
        Command::Project { input, direction, epsilon, json } => {
            (commands::project(input, direction.0, *epsilon), *json)
        }
        Command::McCone { input, samples, seed, epsilon, json } => {
            (commands::mc_cone(input, *samples, *seed, *epsilon), *json)
        }
        Command::McSimplex { input, samples, seed, json } => {
            (commands::mc_simplex(input, *samples, *seed), *json)
        }
        Command::GramEuler { input, mode, samples, seed, json } => {
            let mode = match mode {
                Mode::Exact => umbra::AngleMode::Exact,
                Mode::Mc => umbra::AngleMode::MonteCarlo,
            };
            (commands::gram_euler(input, mode, *samples, *seed), *json)
        }
        Command::Convergence { input, samples, seed, csv_out, json } => {
            (commands::convergence(input, *samples, *seed, csv_out.as_deref()), *json)
        }
    };
    match result {
        Ok(CmdOutput { text, json: json_text, pass }) => {
            if json {
                println!("{json_text}");
            } else {
                print!("{text}");
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
