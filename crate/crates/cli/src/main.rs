mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Construct, check, solve for and certify equiangular tight frames.
#[derive(Debug, Parser)]
#[command(name = "etfforge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a frame from an explicit construction.
    Construct {
        /// paley-plus, double-paley-plus, double-paley, table, steiner,
        /// renes-strohmer or zauner.
        #[arg(long)]
        family: String,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        v: Option<u64>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        epsilon: i8,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a frame, Gram or generator file for the ETF properties.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Search numerically for a 2-circulant d×2d ETF.
    Solve {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = etfforge::solver::DEFAULT_TOL)]
        tol: f64,
        #[arg(long = "max-iter", default_value_t = etfforge::solver::DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify that an exact 2-circulant ETF lies near the given generators.
    Certify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = etfforge::certify::DEFAULT_DELTA)]
        delta: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve and certify every d in a range, e.g. `--d 2..30`.
    Sweep {
        #[arg(long)]
        d: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value_t = etfforge::certify::DEFAULT_DELTA)]
        delta: f64,
        #[arg(long = "out-dir")]
        out_dir: Option<PathBuf>,
    },
    /// Test a Gram (optionally reordered by an automorphism witness) for
    /// harmonic block structure.
    Detect {
        /// Frame, Gram or generator file, optionally followed by a witness.
        #[arg(long = "in", num_args = 1, required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Rescale and reorder a Gram by a witness and write its generators.
    Circulantize {
        /// Frame or Gram file followed by a witness file.
        #[arg(long = "in", num_args = 1, required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().collect();
    let res = match cli.command {
        Command::Construct { family, q, v, m, d, epsilon, out } => {
            commands::construct(&argv, &family, commands::Params { q, v, m, d }, epsilon, out.as_deref())
        }
        Command::Check { input, tol } => commands::check(&input, tol),
        Command::Solve { d, seed, tol, max_iter, out } => commands::solve(&argv, d, seed, tol, max_iter, out.as_deref()),
        Command::Certify { input, delta, out } => commands::certify(&argv, &input, delta, out.as_deref()),
        Command::Sweep { d, seed, jobs, delta, out_dir } => {
            commands::sweep(&argv, &d, seed, jobs, delta, out_dir.as_deref())
        }
        Command::Detect { inputs, m } => commands::detect(&inputs, m),
        Command::Circulantize { inputs, out } => commands::circulantize(&argv, &inputs, out.as_deref()),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
