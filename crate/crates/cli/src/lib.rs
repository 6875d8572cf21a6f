//! Command-line front end for the `hypergroup` library.
//!
//! `run` parses arguments, builds or loads a table, runs one pipeline and
//! renders a [`report::Report`]. Exit codes: 0 when every check passes, 1
//! when a mathematical check fails, 2 on usage or input errors.

pub mod pipeline;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hypergroup::spectral::DEFAULT_SEED;
use hypergroup::HypergroupError;

pub use report::{Format, Report};

#[derive(Debug, Parser)]
#[command(
    name = "hypergroup",
    version,
    about = "Discrete hypergroups: axioms, characters, norms and amenability"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: RunConfig,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Check the hypergroup axioms and Haar weights.
    Verify,
    /// Character table and Plancherel weights of a finite table.
    Characters,
    /// Fourier, reduced Fourier-Stieltjes and multiplier norms of seeded random functions.
    Norms,
    /// Diagonal multiplier construction and weak-amenability witnesses.
    Amenability,
    /// Positive character chi0 and the deformed table.
    Deform {
        /// Write the deformed table to this file.
        #[arg(long)]
        table_out: Option<PathBuf>,
    },
    /// Product with a second table.
    Product {
        /// Second factor: a group name or a family such as `conj(S3)`.
        #[arg(long)]
        with: String,
        /// Write the product table to this file.
        #[arg(long)]
        table_out: Option<PathBuf>,
    },
    /// Fusion rings: SU_q(2), group duals or a fusion file.
    Quantum,
    /// Classify the Reiter condition (P2).
    P2,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// cyclic, group, conj, irr, su2_fusion, suq2_fusion, tree_radial, chebyshev
    #[arg(long, global = true)]
    pub family: Option<String>,
    /// Built-in group name (z2, z4, s3, d4, q8, a4, v4, zN) or a Cayley table file.
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Deformation parameter of SU_q(2), or the branching number of the tree.
    #[arg(long, global = true)]
    pub q: Option<f64>,
    /// Order of the cyclic group.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Truncation radius of infinite families.
    #[arg(long, global = true)]
    pub radius: Option<usize>,
    /// Hypergroup or fusion file.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Tolerance for floating-point checks; exact tables are checked exactly.
    #[arg(long, global = true, env = "HYPERGROUP_TOL", default_value_t = 1e-9)]
    pub tol: f64,
    /// Seed for random test functions and character computation.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Number of random test functions.
    #[arg(long, global = true)]
    pub count: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

/// Errors caused by the input rather than by the mathematics.
pub fn is_input_error(e: &HypergroupError) -> bool {
    use HypergroupError::*;
    matches!(
        e,
        IndexOutOfRange { .. }
            | InvalidTable(_)
            | NotFinite
            | NoGenerator
            | NotLatinSquare(_)
            | NoIdentity
            | NotAssociative(..)
            | InvalidParameters(_)
            | SizeOverflow { .. }
            | Parse { .. }
            | Reciprocity(_)
            | Io(_)
            | ZeroDiagonal(_)
    )
}

/// Runs one command line; writes the report to `out` and diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    let result = match cli.config.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
        {
            Ok(pool) => pool.install(|| pipeline::execute(&cli.command, &cli.config)),
            Err(e) => Err(HypergroupError::InvalidParameters(e.to_string())),
        },
        None => pipeline::execute(&cli.command, &cli.config),
    };
    match result {
        Ok(report) => {
            let text = report.render(cli.config.format);
            let _ = out.write_all(text.as_bytes());
            if let Some(path) = &cli.config.output {
                if let Err(e) = std::fs::write(path, &text) {
                    let _ = writeln!(err, "error: {}: {e}", path.display());
                    return 2;
                }
            }
            i32::from(report.failed())
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if is_input_error(&e) {
                2
            } else {
                1
            }
        }
    }
}
