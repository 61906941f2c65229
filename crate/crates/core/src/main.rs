use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wgelfand::cli::{self, AnalysisRequest, Command, ExitStatus, Format, InputPaths};
use wgelfand::group::DEFAULT_ELEMENT_CAP;
use wgelfand::DEFAULT_TOLERANCE;

#[derive(Parser)]
#[command(name = "wgelfand", version, about = "Weighted Gelfand pairs and spherical analysis on finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Gelfand verdict, spherical functions and Fourier table.
    Analyze(Opts),
    /// Gelfand verdict and spherical functions only.
    Spherical(Opts),
    /// Gelfand verdict, spherical functions and Fourier table.
    Fourier(Opts),
    /// Full analysis plus multiplier verdicts, symbols and commutation.
    MultiplierCheck(Opts),
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Args)]
struct Opts {
    /// Group spec (JSON).
    #[arg(long, value_name = "FILE")]
    group: PathBuf,
    /// Subgroup spec (JSON); defaults to the trivial subgroup.
    #[arg(long, value_name = "FILE")]
    subgroup: Option<PathBuf>,
    /// Weight spec (JSON); defaults to the constant weight 1.
    #[arg(long, value_name = "FILE")]
    weight: Option<PathBuf>,
    /// Involutive automorphism spec (JSON) for the sufficient-condition check.
    #[arg(long, value_name = "FILE")]
    automorphism: Option<PathBuf>,
    /// Multiplier spec (JSON); may be repeated.
    #[arg(long, value_name = "FILE")]
    multiplier: Vec<PathBuf>,
    /// Absolute tolerance for numerical comparisons.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Seed for randomized numerical routines.
    #[arg(long, value_name = "HEX", value_parser = cli::parse_seed, default_value = "0xc0ffee")]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    /// Worker threads for the structure-constant computation.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Refuse groups with more elements than this.
    #[arg(long, default_value_t = DEFAULT_ELEMENT_CAP)]
    max_order: usize,
    /// Include per-stage wall-clock timings (makes reports non-reproducible).
    #[arg(long)]
    timings: bool,
}

fn main() -> ExitCode {
    let parsed = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (command, opts) = match parsed.command {
        Cmd::Analyze(o) => (Command::Analyze, o),
        Cmd::Spherical(o) => (Command::Spherical, o),
        Cmd::Fourier(o) => (Command::Fourier, o),
        Cmd::MultiplierCheck(o) => (Command::MultiplierCheck, o),
    };
    let status = execute(command, opts);
    ExitCode::from(status.code() as u8)
}

fn execute(command: Command, opts: Opts) -> ExitStatus {
    if opts.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(opts.threads).build_global();
    }
    let paths = InputPaths {
        group: opts.group,
        subgroup: opts.subgroup,
        weight: opts.weight,
        automorphism: opts.automorphism,
        multipliers: opts.multiplier,
    };
    let result = AnalysisRequest::load(command, &paths).and_then(|mut request| {
        request.tolerance = opts.tolerance;
        request.seed = opts.seed;
        request.max_order = opts.max_order;
        request.timings = opts.timings;
        match command {
            Command::MultiplierCheck => cli::run_multiplier_check(&request),
            _ => cli::run_analyze(&request),
        }
    });
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitStatus::for_error(&e);
        }
    };
    let format = match opts.format {
        OutputFormat::Json => Format::Json,
        OutputFormat::Text => Format::Text,
    };
    if let Err(e) = cli::emit(&cli::render(&outcome.report, format), opts.output.as_deref()) {
        eprintln!("error: {e}");
        return ExitStatus::InputError;
    }
    if outcome.status == ExitStatus::NegativeVerdict {
        eprintln!("negative verdict; report written");
    }
    outcome.status
}
