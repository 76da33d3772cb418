//! `slab`: command line front end for the multiplier estimators, symbol
//! tools and experiment runner of `slab-core`.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "slab", version, about = "Schur multiplier norms of Hankel and Toeplitz matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Schatten quasi-norm of a matrix.
    Schatten {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        p: f64,
        /// Also print the singular values.
        #[arg(long)]
        singular_values: bool,
    },
    /// Bracket on the Schur multiplier norm of a matrix.
    Multnorm {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// all, hadamard, hankel-poly or strips.
        #[arg(long, default_value = "all")]
        upper: String,
        /// Block partition file: row cuts, then column cuts.
        #[arg(long)]
        blocks: Option<PathBuf>,
        /// Writes the witness vectors x then y, each as an n x 1 matrix.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Bracket on the multiplier norm of an N x N Hankel window of an analytic symbol.
    Hankel {
        #[arg(long)]
        symbol: PathBuf,
        #[arg(long)]
        p: f64,
        /// Window size; defaults to the degree plus one.
        #[arg(long)]
        window: Option<usize>,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Append the Besov scores of the symbol.
        #[arg(long)]
        scores: bool,
    },
    /// Arc-witness lower bound for the N x N Toeplitz window of a discrete measure.
    ToeplitzMeasure {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        window: usize,
        /// Arc width in radians; defaults to half the atom separation, capped at 1.
        #[arg(long)]
        witness_arc: Option<f64>,
        /// Polish the arc witness with this many extra random starts.
        #[arg(long, default_value_t = 0)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Besov norm and per-block table of a symbol.
    Besov {
        #[arg(long)]
        symbol: PathBuf,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        p: f64,
        /// Summability exponent; `inf` for the supremum.
        #[arg(long)]
        q: f64,
        /// default (the dyadic partition) or `omega:D` for `ω(D s)`.
        #[arg(long, default_value = "default")]
        cutoff: String,
    },
    /// Runs seeded inequality audits.
    Verify {
        /// core, symbols, besov, multiplier, measures or all.
        #[arg(default_value = "all")]
        suite: String,
    },
    /// Runs a registered experiment and emits its CSV.
    Sweep {
        /// Config file with `experiment = <name>` and `key = value` lines.
        #[arg(long, conflicts_with = "experiment")]
        config: Option<PathBuf>,
        #[arg(long, required_unless_present_any = ["config", "list"])]
        experiment: Option<String>,
        /// Overrides such as `p=0.5,1` (repeatable).
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Lists the registered experiments and their default keys.
        #[arg(long)]
        list: bool,
    },
    /// Log-log least-squares slope of one CSV column against another.
    Fit {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Keep only rows with `column=value` (repeatable).
        #[arg(long = "where", value_name = "COLUMN=VALUE")]
        filters: Vec<String>,
    },
    /// Emits a kernel in the symbol text format.
    #[command(subcommand)]
    Kernel(Kernel),
}

#[derive(Subcommand)]
enum Kernel {
    /// `D_n = Σ_{|k|<=n} z^k`.
    Dirichlet {
        #[arg(long)]
        n: u64,
    },
    /// `Q_n = D_n² / (2n + 1)`.
    Fejer {
        #[arg(long)]
        n: u64,
    },
    /// `z^{4^n} D_{2^n}^{N+1} / (2^{n+1} + 1)^N`.
    Phi {
        #[arg(long)]
        n: u32,
        #[arg(long = "power")]
        big_n: u32,
    },
    /// `Σ_k ω(k/2^n) z^k`.
    Omega {
        #[arg(long)]
        n: u32,
    },
    /// `Σ_k F(k/m) z^k` with the default plateau cutoff.
    Sampled {
        #[arg(long)]
        m: u64,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match commands::run(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("slab: {e}");
            ExitCode::FAILURE
        }
    }
}
