//! `suploc`: moment generation, support recovery, parameter sweeps, and
//! sweep reports from the command line.
//!
//! Inputs are JSON (measure specs or moment files) read from a path or
//! stdin (`-`); results go to `--out` or stdout. The human-readable
//! summary always goes to stderr so piped output stays machine-readable.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure,
//! 4 recovery finished with warnings under `--strict`.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use suploc_core::measure::MeasureSpec;
use suploc_core::metrics::{hausdorff, SupportSet};
use suploc_core::momentio::{load_moments, save_moments, MomentData};
use suploc_core::orthopoly::OrthopolyError;
use suploc_core::recover::{
    suploc_moments, suploc_spec, RecoverError, RegimeRequest, SupLocOptions,
    SupportEstimate, Warning,
};
use suploc_core::spectra::SpectraError;
use suploc_core::sweep::{
    aggregate_report, rows_from_csv, run_cells, to_csv, SweepConfig,
};

const EXIT_INPUT: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_STRICT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "suploc",
    about = "Support recovery for one-dimensional measures from moment data",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute exact power moments of a measure spec.
    Moments(MomentsArgs),
    /// Recover the support from a measure spec or a moment file.
    Recover(RecoverArgs),
    /// Run the sweep grid from a JSON config and emit per-cell CSV.
    Sweep(SweepArgs),
    /// Aggregate a sweep CSV into minimal successful degrees per cell.
    Report(ReportArgs),
}

#[derive(Args)]
struct MomentsArgs {
    /// Measure spec JSON, or `-` for stdin.
    input: String,
    /// Largest moment degree is twice this value.
    #[arg(long, default_value_t = 12)]
    degree: usize,
    /// Output path, or `-` for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct RecoverArgs {
    /// Measure spec or moment file JSON, or `-` for stdin. The kind is
    /// detected from the JSON keys (`moments`/`matrix` vs `atoms`/...).
    input: String,
    /// Resolution parameter epsilon.
    #[arg(long, default_value_t = 1e-2)]
    epsilon: f64,
    /// Working degree N (capped by the file degree for moment input).
    #[arg(long, default_value_t = 40)]
    degree: usize,
    /// Structural regime: flat|single|outside|general|auto.
    #[arg(long, default_value = "auto")]
    regime: RegimeRequest,
    /// Relative tolerance for rank and positivity checks.
    #[arg(long, default_value_t = 1e-8)]
    tau: f64,
    /// Re-run at a nearby degree and warn when the estimates diverge.
    #[arg(long)]
    check_consistency: bool,
    /// Exit with status 4 when the estimate carries warnings.
    #[arg(long)]
    strict: bool,
    /// Output path, or `-` for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep config JSON, or `-` for stdin.
    input: String,
    /// Override the config's epsilon.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Override the config's moment noise amplitude.
    #[arg(long)]
    noise_sigma: Option<f64>,
    /// Override the config's noise seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config's rank/positivity tolerance.
    #[arg(long)]
    tau: Option<f64>,
    /// Output path, or `-` for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct ReportArgs {
    /// Sweep CSV, or `-` for stdin.
    input: String,
    /// Output path, or `-` for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

/// A failure plus the exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_INPUT, message: message.into() }
    }

    fn numerical(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_NUMERICAL, message: message.into() }
    }
}

/// Splits recovery errors into "fix your input" versus "the numerics gave
/// up": positivity loss and eigensolver stalls are numerical; everything
/// else (parse, validation, budget, non-PSD data) is an input problem.
fn classify_recover_error(err: RecoverError) -> Failure {
    let numerical = matches!(
        err,
        RecoverError::Orthopoly(OrthopolyError::LostPositivity { .. })
            | RecoverError::Spectra(SpectraError::NoConvergence { .. })
            | RecoverError::Moments(suploc_core::momentio::MomentIoError::Spectra(
                SpectraError::NoConvergence { .. },
            ))
    );
    if numerical {
        Failure::numerical(format!("numerical failure: {err}"))
    } else {
        Failure::input(format!("invalid input: {err}"))
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::input(format!("cannot read stdin: {e}")))?;
        Ok(text)
    } else {
        fs::read_to_string(path)
            .map_err(|e| Failure::input(format!("cannot read {path}: {e}")))
    }
}

fn write_output(path: &str, text: &str) -> Result<(), Failure> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    if path == "-" {
        print!("{text}");
        Ok(())
    } else {
        fs::write(path, text)
            .map_err(|e| Failure::input(format!("cannot write {path}: {e}")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Moments(args) => cmd_moments(&args),
        Command::Recover(args) => cmd_recover(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Report(args) => cmd_report(&args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn cmd_moments(args: &MomentsArgs) -> Result<u8, Failure> {
    let text = read_input(&args.input)?;
    let spec = MeasureSpec::from_json(&text)
        .map_err(|e| Failure::input(format!("invalid measure spec: {e}")))?;
    let data = MomentData::from_moments(spec.moments(2 * args.degree))
        .map_err(|e| Failure::input(format!("moment generation failed: {e}")))?;
    write_output(&args.out, &save_moments(&data))?;
    eprintln!(
        "moments: wrote y_0 .. y_{} ({} values)",
        2 * args.degree,
        2 * args.degree + 1
    );
    Ok(0)
}

/// What `recover` was given, after key-based detection.
enum RecoverInput {
    Spec(MeasureSpec),
    Moments(MomentData),
}

fn parse_recover_input(text: &str) -> Result<RecoverInput, Failure> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Failure::input(format!("input is not valid JSON: {e}")))?;
    let is_moment_file = value
        .as_object()
        .is_some_and(|map| map.contains_key("moments") || map.contains_key("matrix"));
    if is_moment_file {
        let data = load_moments(text)
            .map_err(|e| Failure::input(format!("invalid moment file: {e}")))?;
        Ok(RecoverInput::Moments(data))
    } else {
        let spec = MeasureSpec::from_json(text)
            .map_err(|e| Failure::input(format!("invalid measure spec: {e}")))?;
        Ok(RecoverInput::Spec(spec))
    }
}

fn cmd_recover(args: &RecoverArgs) -> Result<u8, Failure> {
    let text = read_input(&args.input)?;
    let input = parse_recover_input(&text)?;

    let mut opts = SupLocOptions::new(args.epsilon, args.degree).with_regime(args.regime);
    opts.tau = args.tau;

    let run = |opts: &SupLocOptions| -> Result<SupportEstimate, RecoverError> {
        match &input {
            RecoverInput::Spec(spec) => suploc_spec(spec, opts),
            RecoverInput::Moments(data) => suploc_moments(data, opts),
        }
    };

    let mut estimate = run(&opts).map_err(classify_recover_error)?;

    if args.check_consistency {
        // A trustworthy estimate should be stable under a small degree
        // change; divergence beyond epsilon is worth a warning, not an
        // error (the caller may be probing exactly that).
        let probe = SupLocOptions { degree: args.degree + 2, ..opts.clone() };
        match run(&probe) {
            Ok(other) => {
                let d = hausdorff(
                    &SupportSet::from_estimate(&estimate),
                    &SupportSet::from_estimate(&other),
                )
                .unwrap_or(f64::INFINITY);
                if d >= args.epsilon {
                    estimate
                        .warnings
                        .push(Warning::ConsistencyDivergence { hausdorff: d });
                }
            }
            Err(err) => {
                return Err(classify_recover_error(err));
            }
        }
    }

    let json = serde_json::to_string_pretty(&estimate)
        .expect("estimate serializes to JSON");
    write_output(&args.out, &json)?;

    let mut summary = format!(
        "recover: regime {}, {} atom(s), {} interval(s), {} pollution root(s) at degree {}",
        estimate.regime,
        estimate.atoms.len(),
        estimate.intervals.len(),
        estimate.pollution.len(),
        estimate.degree_used,
    );
    if let RecoverInput::Spec(spec) = &input {
        if let Ok(d) = hausdorff(
            &SupportSet::from_spec(spec),
            &SupportSet::from_estimate(&estimate),
        ) {
            summary.push_str(&format!(", d_H vs truth {d:.3e}"));
        }
    }
    eprintln!("{summary}");
    if !estimate.warnings.is_empty() {
        eprintln!("warnings: {}", estimate.warnings_text());
        if args.strict {
            return Ok(EXIT_STRICT);
        }
    }
    Ok(0)
}

fn cmd_sweep(args: &SweepArgs) -> Result<u8, Failure> {
    let text = read_input(&args.input)?;
    let mut config: SweepConfig = serde_json::from_str(&text)
        .map_err(|e| Failure::input(format!("invalid sweep config: {e}")))?;
    if let Some(epsilon) = args.epsilon {
        config.epsilon = epsilon;
    }
    if let Some(noise_sigma) = args.noise_sigma {
        config.noise_sigma = noise_sigma;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(tau) = args.tau {
        config.tau = tau;
    }
    let rows = run_cells(&config)
        .map_err(|e| Failure::input(format!("sweep failed: {e}")))?;
    write_output(&args.out, &to_csv(&rows))?;
    eprintln!("sweep: {} cell(s)", rows.len());
    Ok(0)
}

fn cmd_report(args: &ReportArgs) -> Result<u8, Failure> {
    let text = read_input(&args.input)?;
    let rows = rows_from_csv(&text)
        .map_err(|e| Failure::input(format!("invalid sweep CSV: {e}")))?;
    let report = aggregate_report(&rows);
    let json = serde_json::to_string_pretty(&report)
        .expect("report serializes to JSON");
    write_output(&args.out, &json)?;
    eprintln!("report: {} (a, r) group(s)", report.len());
    Ok(0)
}
