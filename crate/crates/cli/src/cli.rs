//! Command-line arguments and the `verify` command.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::corpus::{load_corpus, parse_claims, parse_s_values};
use crate::pipeline::{run_corpus, RunOptions};
use crate::report::{render, Format};

/// Exit code for parse, usage and output errors.
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "polarlift", version, about = "Numerical verification of lifted polar actions on deformed bundles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify the claims of a corpus.
    Verify(VerifyArgs),
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    /// Corpus file.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Only run this entry.
    #[arg(long)]
    pub entry: Option<String>,
    /// Comma-separated claims, replacing each entry's own list.
    #[arg(long)]
    pub claims: Option<String>,
    /// Comma-separated deformation parameters, replacing each entry's own list.
    #[arg(long = "s")]
    pub s_values: Option<String>,
    /// Sampled points per polarity check.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Replaces every threshold.
    #[arg(long, value_parser = parse_tol)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record wall time per report; output is then no longer reproducible.
    #[arg(long)]
    pub timing: bool,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
        _ => Err(format!("tolerance must be a positive number, got `{s}`")),
    }
}

/// Runs `verify` and returns the process exit code.
pub fn verify(args: &VerifyArgs) -> i32 {
    let entries = match load_corpus(&args.corpus) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    if let Some(id) = &args.entry {
        if !entries.iter().any(|e| &e.id == id) {
            eprintln!("error: no entry `{id}` in {}", args.corpus.display());
            return EXIT_USAGE;
        }
    }
    let claims = match args.claims.as_deref().map(parse_claims).transpose() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: --claims: {e}");
            return EXIT_USAGE;
        }
    };
    let s_values = match args.s_values.as_deref().map(parse_s_values).transpose() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: --s: {e}");
            return EXIT_USAGE;
        }
    };
    if args.samples == 0 {
        eprintln!("error: --samples must be positive");
        return EXIT_USAGE;
    }
    let opts = RunOptions {
        seed: args.seed,
        samples: args.samples,
        tolerance: args.tol,
        claims,
        s_values,
        timing: args.timing,
    };
    let report = run_corpus(&entries, args.entry.as_deref(), &opts);
    let text = render(&report, args.format);
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => print!("{text}"),
    }
    report.exit_code()
}

/// Parses the process arguments and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match &cli.command {
        Command::Verify(args) => verify(args),
    }
}
