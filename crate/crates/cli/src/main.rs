use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rayleigh_cli::commands::{self, CommandResult, Failure, FuzzConfig};
use rayleigh_cli::GraphFile;

/// Exact tree polynomials, effective conductance and Rayleigh identity
/// certificates for multigraphs.
///
/// Exit status: 0 success or identity holds, 1 identity fails or a
/// certificate does not validate, 2 usage or parse error, 3 dichotomy
/// violation in the prover.
#[derive(Parser)]
#[command(name = "rayleigh", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the spanning-tree polynomial of the graph or of a minor.
    Poly {
        file: PathBuf,
        /// Minor to take, e.g. `--minor contract=1 delete=2,5`.
        #[arg(long, num_args = 1..=2, value_name = "contract=LIST|delete=LIST")]
        minor: Vec<String>,
    },
    /// Check the Rayleigh identity for the marked edges e and f.
    Verify { file: PathBuf },
    /// Print the effective conductance across the edge marked e.
    Conductance { file: PathBuf },
    /// Print a certificate for the marked edges e and f.
    Prove {
        file: PathBuf,
        /// Re-check the certificate independently before exiting.
        #[arg(long)]
        validate: bool,
    },
    /// Check random multigraphs from a seeded generator.
    Fuzz {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 7)]
        max_vertices: u32,
        #[arg(long, default_value_t = 10)]
        max_edges: u32,
        /// Marked pairs drawn per graph.
        #[arg(long, default_value_t = 5)]
        pairs: usize,
    },
}

fn load(path: &Path) -> Result<GraphFile, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    GraphFile::parse(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn run(command: Command) -> CommandResult {
    match command {
        Command::Poly { file, minor } => commands::poly(&load(&file)?, &minor),
        Command::Verify { file } => commands::verify(&load(&file)?),
        Command::Conductance { file } => commands::conductance(&load(&file)?),
        Command::Prove { file, validate } => commands::prove_file(&load(&file)?, validate),
        Command::Fuzz { seed, count, max_vertices, max_edges, pairs } => {
            commands::fuzz(&FuzzConfig { seed, count, max_vertices, max_edges, pairs })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
