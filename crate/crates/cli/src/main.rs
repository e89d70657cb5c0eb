use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod output;

use output::Outcome;

/// Nonnegative resultant polynomials of real rank-2 bundles on the
/// projective line: construction, verification and sum-of-squares
/// certification.
#[derive(Parser)]
#[command(name = "rrl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct SeedArg {
    /// Seed for all randomized sampling
    #[arg(long, env = "RRL_SEED", default_value_t = 42)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Build the polynomial of a bundle and write it with its metadata
    Construct {
        /// Bundle, e.g. "O(3)+O(3)"
        #[arg(long)]
        bundle: String,
        /// Polynomial file (text format); embedded in the JSON when absent
        #[arg(long)]
        poly: Option<PathBuf>,
        /// JSON metadata file; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check nonnegativity, exact identities and the zero-set structure
    Verify {
        /// Bundle, e.g. "O(3)+O(3)"
        #[arg(long)]
        bundle: String,
        /// Random nonnegativity samples
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Exact zeros for the Hessian survey
        #[arg(long, default_value_t = 100)]
        zeros: usize,
        #[command(flatten)]
        seed: SeedArg,
        /// JSON report file; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify or refute a sum-of-squares decomposition
    Sos {
        /// Polynomial file (text format)
        #[arg(long)]
        poly: PathBuf,
        /// Which branches may decide: exact span check, SDP, or both
        #[arg(long, default_value = "auto", value_parser = ["auto", "exact-only", "sdp-only"])]
        mode: String,
        /// Exact zeros of the polynomial (point-list format)
        #[arg(long)]
        zeros: Option<PathBuf>,
        /// SDP convergence tolerance
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// SDP iteration limit
        #[arg(long = "max-iter", default_value_t = 50_000)]
        max_iter: usize,
        #[command(flatten)]
        seed: SeedArg,
        /// JSON certificate file; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Chern class and obstruction numbers of the secant bundle
    Invariants {
        /// Degree of the curve bundle
        #[arg(long)]
        d: Option<i64>,
        /// Genus of the curve
        #[arg(long)]
        g: Option<i64>,
        /// Rank of the bundle
        #[arg(long, default_value_t = 2)]
        r: i64,
        /// Degree range for a table, e.g. 2..12 (inclusive)
        #[arg(long = "d-range", conflicts_with = "d")]
        d_range: Option<String>,
        /// Genus range for a table, e.g. 0..9 (inclusive)
        #[arg(long = "g-range", conflicts_with = "g")]
        g_range: Option<String>,
        /// JSON output file; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample exact zeros of a bundle polynomial
    Zeros {
        /// Bundle, e.g. "O(3)+O(3)"
        #[arg(long)]
        bundle: String,
        /// Number of zeros, four per random base point
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Emit a basis of the sections vanishing at this point instead,
        /// given as "re,im" with rational parts
        #[arg(long, allow_hyphen_values = true)]
        z0: Option<String>,
        #[command(flatten)]
        seed: SeedArg,
        /// Point-list file; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Aggregate JSON outputs of the other commands into one summary
    Report {
        /// JSON outputs of construct, verify, sos or invariants
        #[arg(long = "input", required = true)]
        inputs: Vec<PathBuf>,
        /// Aggregated JSON file; the text summary still goes to stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct { bundle, poly, out } => {
            commands::construct(&bundle, poly.as_deref(), out.as_deref())
        }
        Command::Verify {
            bundle,
            samples,
            zeros,
            seed,
            out,
        } => commands::verify(&bundle, samples, zeros, seed.seed, out.as_deref()),
        Command::Sos {
            poly,
            mode,
            zeros,
            tol,
            max_iter,
            seed,
            out,
        } => commands::sos(&commands::SosArgs {
            poly,
            mode,
            zeros,
            tol,
            max_iter,
            seed: seed.seed,
            out,
        }),
        Command::Invariants {
            d,
            g,
            r,
            d_range,
            g_range,
            out,
        } => commands::invariants(
            d,
            g,
            r,
            d_range.as_deref(),
            g_range.as_deref(),
            out.as_deref(),
        ),
        Command::Zeros {
            bundle,
            count,
            z0,
            seed,
            out,
        } => commands::zeros(&bundle, count, z0.as_deref(), seed.seed, out.as_deref()),
        Command::Report { inputs, out } => commands::report(&inputs, out.as_deref()),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::ClaimFailed(msg)) => {
            eprintln!("rrl: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("rrl: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
