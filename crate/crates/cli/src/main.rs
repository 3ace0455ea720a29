//! `hqec`: command-line front end.
//!
//! Exit codes: 0 success, 1 internal error, 2 usage error, 3 invalid
//! configuration. `HQEC_THREADS` caps the worker count (0 or unset = auto).

mod sweep;
mod text;

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hqec::stabilizer::CodeId;

use crate::sweep::PRange;

#[derive(Parser, Debug)]
#[command(name = "hqec", version, about = "Quaternionic quantum error-correction laboratory")]
#[command(subcommand_required = true, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Prepare the quaternionic Bell state and audit the gates used.
    Bell,
    /// Run every audit and print one-line verdicts plus the AUDIT summary.
    Verify,
    /// Syndromes of all single-qubit X/Y/Z errors of a code.
    SyndromeTable {
        #[arg(long, value_enum, default_value_t = CodeArg::Paper5)]
        code: CodeArg,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Detailed audit: gate unitarity, published syndrome table diff,
    /// codeword verification and codeword action tables.
    Audit,
    /// Monte Carlo logical error rate sweep, written as CSV.
    Mc(McArgs),
    /// Log-log threshold fit of a sweep CSV, written as JSON.
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
        /// Column holding the logical error rate.
        #[arg(long, default_value = "p_L")]
        column: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Standard vs quaternionic sweep pair with fits and target annotations.
    /// Writes <prefix>.csv, <prefix>_standard.csv, <prefix>_quaternionic.csv
    /// and <prefix>_fit.json.
    Figure1 {
        #[arg(long)]
        out: String,
        #[command(flatten)]
        sweep: SweepFlags,
    },
    /// Plain-text summary of all deterministic results.
    Report {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct McArgs {
    #[command(flatten)]
    sweep: SweepFlags,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Sweep settings; each flag overrides the matching key of `--config`.
#[derive(Args, Debug, Default)]
struct SweepFlags {
    /// JSON sweep configuration (keys: code, noise, p_values, trials, seed,
    /// quaternionic_detection, detection_threshold, correction).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    code: Option<CodeArg>,
    /// Physical rates: `start:stop:log:count`, `start:stop:lin:count`, or a
    /// comma-separated list.
    #[arg(long, value_parser = sweep::parse_p_range)]
    p: Option<PRange>,
    #[arg(long)]
    trials: Option<u64>,
    /// Seed for every random draw (default 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Pauli shares `wx,wy,wz`.
    #[arg(long, value_parser = sweep::parse_triple)]
    weights: Option<[f64; 3]>,
    #[arg(long, value_enum)]
    phase_mode: Option<PhaseArg>,
    /// Rotation error rate per qubit.
    #[arg(long)]
    p_rot: Option<f64>,
    /// Rotation axis `x,y,z` (must be unit length).
    #[arg(long, value_parser = sweep::parse_triple)]
    rot_axis: Option<[f64; 3]>,
    /// Fixed rotation angle.
    #[arg(long, conflicts_with = "rot_angle_max")]
    rot_angle: Option<f64>,
    /// Rotation angles uniform in [0, max).
    #[arg(long)]
    rot_angle_max: Option<f64>,
    #[arg(long, value_enum)]
    rot_slots: Option<SlotsArg>,
    /// Enable j/k detection and rotation correction.
    #[arg(long)]
    quaternionic: bool,
    #[arg(long)]
    detection_threshold: Option<f64>,
    /// Correct with estimated angles rounded to this resolution instead of
    /// the exact sampled ones.
    #[arg(long)]
    estimate_resolution: Option<f64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CodeArg {
    Three,
    Paper5,
    Perfect5,
}

impl From<CodeArg> for CodeId {
    fn from(c: CodeArg) -> CodeId {
        match c {
            CodeArg::Three => CodeId::Three,
            CodeArg::Paper5 => CodeId::Paper5,
            CodeArg::Perfect5 => CodeId::Perfect5,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PhaseArg {
    None,
    Table1,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SlotsArg {
    Zero,
    One,
    All,
}

/// Errors that end the process, by exit code.
#[derive(Debug)]
enum Failure {
    Config(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Internal(_) => 1,
            Failure::Config(_) => 3,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

impl From<hqec::Error> for Failure {
    fn from(e: hqec::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

type Outcome<T = ()> = Result<T, Failure>;

fn threads() -> Outcome<usize> {
    match std::env::var("HQEC_THREADS") {
        Ok(v) if !v.trim().is_empty() => {
            v.trim().parse().map_err(|_| Failure::Config(format!("HQEC_THREADS: `{v}` is not a thread count")))
        }
        _ => Ok(0),
    }
}

/// Standard output, or a file when `path` is given.
fn sink(path: Option<&Path>) -> Outcome<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_text(path: Option<&Path>, body: &str) -> Outcome {
    let mut w = sink(path)?;
    w.write_all(body.as_bytes())?;
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Bell => write_text(None, &text::bell()),
        Command::Verify => write_text(None, &text::verify()),
        Command::Audit => write_text(None, &text::audit()),
        Command::Report { out } => write_text(out.as_deref(), &text::report()),
        Command::SyndromeTable { code, format, out } => {
            let body = match format {
                Format::Csv => text::syndrome_csv(code.into())?,
                Format::Text => text::syndrome_text(code.into()),
            };
            write_text(out.as_deref(), &body)
        }
        Command::Mc(args) => {
            let config = sweep::build_config(&args.sweep)?;
            let result = hqec::experiments::with_threads(threads()?, || hqec::experiments::run_sweep(&config))??;
            sweep::write_sweep_csv(sink(args.out.as_deref())?, &result)
        }
        Command::Fit { input, column, out } => {
            let points = sweep::read_points(&input, &column)?;
            let fit = hqec::experiments::fit_threshold(&points)?;
            if fit.excluded > 0 {
                eprintln!("warning: excluded {} row(s) with p_L = 0 from the fit", fit.excluded);
            }
            write_text(out.as_deref(), &format!("{}\n", fit.to_json()))
        }
        Command::Figure1 { out, sweep: flags } => sweep::figure1(&flags, &out, threads()?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Config(m) => eprintln!("error: invalid configuration: {m}"),
                Failure::Internal(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
