//! The `qgqec` command-line front end.
//!
//! Exit codes: 0 on success (including runs whose errors exceed the code's
//! capability), 2 for configuration and input errors, 1 for internal
//! failures such as unwritable outputs or a failed self-check.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::aqecc::{build_qc_code, CaseId};
use crate::bits::Bits;
use crate::error::Error;
use crate::experiments::{classify_outcome, exhaustive_correction_sweep, run_case, CaseReport, Family};
use crate::json::to_sorted_json;
use crate::sim::{exact_distribution, random_clifford_circuit, tableau_distribution, total_variation, Counts};
use crate::stats::{
    argmax_classifier, compare_with_reference, fixture_case, fixture_rows, format_value, reference_values,
    rows_from_counts, rows_from_csv, summarize, Column, CountRow, ReferenceLine, StatsSummary,
};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SHOTS: u64 = 1024;
/// Tolerance used by `backends-check`.
pub const BACKEND_TV_TOLERANCE: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(name = "qgqec", version, about = "Quasi-cyclic code construction, simulation and statistics")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StatsFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ClassifierArg {
    /// `decoded` when `--case` is given, `argmax` otherwise.
    Auto,
    /// Rows below the largest count are errors.
    Argmax,
    /// Outcomes the decoder does not count as corrected are errors.
    Decoded,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate one case and decode every shot.
    Run {
        #[arg(long)]
        case: CaseId,
        #[arg(long, default_value = "aqecc")]
        family: Family,
        #[arg(long, default_value_t = DEFAULT_SHOTS)]
        shots: u64,
        /// Use the shot total of the matching published count table.
        #[arg(long, conflicts_with = "shots")]
        reference_shots: bool,
        #[arg(long, env = "QGQEC_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Comma-separated qubit positions receiving an X gate.
        #[arg(long, value_delimiter = ',')]
        errors: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
        /// Also write `outcome,count` sorted by descending count.
        #[arg(long)]
        emit_barchart: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Decode every error pattern up to a weight against every codeword.
    Sweep {
        #[arg(long)]
        case: CaseId,
        /// Defaults to the code's capability.
        #[arg(long)]
        max_weight: Option<usize>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mean, variance and error rate of a counts file or embedded table.
    Stats {
        /// Counts JSON, run report JSON, or `outcome,count` CSV.
        #[arg(long, conflicts_with = "table", required_unless_present = "table")]
        input: Option<PathBuf>,
        /// Embedded count table `t1`..`t8`.
        #[arg(long)]
        table: Option<String>,
        /// Column of the paired tables `t5`..`t8`.
        #[arg(long, default_value = "qc")]
        column: Column,
        #[arg(long, value_enum, default_value = "auto")]
        classifier: ClassifierArg,
        #[arg(long)]
        case: Option<CaseId>,
        /// Injected error positions for the `decoded` classifier.
        #[arg(long, value_delimiter = ',')]
        errors: Vec<usize>,
        /// Published table to compare against.
        #[arg(long)]
        reference: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: StatsFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a preset code as JSON.
    ExportCode {
        #[arg(long)]
        case: CaseId,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the tableau and state-vector engines on random circuits.
    BackendsCheck {
        #[arg(long, default_value_t = 200)]
        circuits: usize,
        #[arg(long, default_value_t = 8)]
        max_qubits: usize,
        #[arg(long, default_value_t = 40)]
        max_gates: usize,
        #[arg(long, env = "QGQEC_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Debug)]
enum CliError {
    Config(String),
    Internal(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidQubit { .. }
            | Error::DuplicateQubit(_)
            | Error::Parse(_)
            | Error::InvalidArgument(_)
            | Error::EmptyCounts
            | Error::LengthMismatch { .. } => CliError::Config(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (program name first) and runs the command. Regular output
/// goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(CliError::Config(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(CliError::Internal(msg)) => {
            let _ = writeln!(err, "internal error: {msg}");
            1
        }
    }
}

fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> CliResult<R> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(CliError::Config("--threads must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Internal(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn write_file(path: &Path, content: &str) -> CliResult<()> {
    std::fs::write(path, content).map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))
}

fn emit(path: Option<&Path>, content: &str, out: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => write_file(p, content),
        None => out
            .write_all(content.as_bytes())
            .map_err(|e| CliError::Internal(e.to_string())),
    }
}

fn say(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::Internal(e.to_string()))
}

/// Shot totals of the published count tables.
pub fn reference_shots(case: CaseId, family: Family) -> u64 {
    match (family, case) {
        (Family::Qoccc, CaseId::C1 | CaseId::C2) => 32,
        (Family::Qoccc, CaseId::C3) => 36,
        (Family::Qoccc, CaseId::C4) => 51,
        (Family::Aqecc, _) => 80,
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CliResult<i32> {
    match cmd {
        Command::Run {
            case,
            family,
            shots,
            reference_shots: use_reference,
            seed,
            errors,
            out: path,
            format,
            emit_barchart,
            threads,
        } => {
            let shots = if use_reference { reference_shots(case, family) } else { shots };
            let report = with_threads(threads, || run_case(case, family, shots, seed, &errors))??;
            let body = match format {
                OutputFormat::Json => report.to_json(),
                OutputFormat::Csv => report.counts.to_csv(),
            };
            emit(path.as_deref(), &body, out)?;
            if let Some(bar) = emit_barchart {
                write_file(&bar, &report.counts.to_barchart_csv())?;
            }
            if path.is_some() {
                say(
                    out,
                    &format!(
                        "{} {}: {}/{} shots corrected\n",
                        report.case, report.family, report.corrected_shots, report.shots
                    ),
                )?;
            }
            Ok(0)
        }
        Command::Sweep {
            case,
            max_weight,
            threads,
            out: path,
        } => {
            let w = max_weight.unwrap_or(case.spec().capability);
            let report = with_threads(threads, || exhaustive_correction_sweep(case, w))??;
            let mut text = format!(
                "case {} (P = {}, {} codewords)\n",
                report.case, report.capability, report.codewords
            );
            for t in &report.by_weight {
                let _ = writeln!(
                    text,
                    "weight {}: {}/{} patterns corrected, {}/{} cases",
                    t.weight, t.patterns_corrected, t.patterns, t.cases_corrected, t.cases
                );
            }
            let _ = writeln!(
                text,
                "total: {} tested, {} corrected ({}/{} cases)",
                report.patterns_tested, report.patterns_corrected, report.cases_corrected, report.cases_tested
            );
            say(out, &text)?;
            if let Some(p) = path {
                write_file(&p, &report.to_json())?;
            }
            if report.within_capability_ok() {
                Ok(0)
            } else {
                Err(CliError::Internal(format!(
                    "patterns within capability P = {} were not all corrected",
                    report.capability
                )))
            }
        }
        Command::Stats {
            input,
            table,
            column,
            classifier,
            case,
            errors,
            reference,
            format,
            out: path,
        } => {
            let (source, rows) = match (&input, &table) {
                (Some(p), _) => (p.display().to_string(), read_rows(p)?),
                (None, Some(t)) => (t.to_ascii_lowercase(), fixture_rows(t, column)?),
                (None, None) => return Err(CliError::Config("give --input or --table".into())),
            };
            let use_decoded = match classifier {
                ClassifierArg::Auto => case.is_some(),
                ClassifierArg::Argmax => false,
                ClassifierArg::Decoded => true,
            };
            let summary = if use_decoded {
                let case = case.ok_or_else(|| CliError::Config("the decoded classifier needs --case".into()))?;
                decoded_summary(case, &errors, &rows)?
            } else {
                summarize(&rows, argmax_classifier(&rows))?
            };
            let reference = match &reference {
                Some(id) => {
                    let ref_case = case.or_else(|| table.as_deref().and_then(|t| fixture_case(t).ok()));
                    let values = reference_values(id, ref_case, column)?;
                    Some(ReferenceReport {
                        table: id.to_ascii_lowercase(),
                        lines: compare_with_reference(&summary, &values),
                    })
                }
                None => None,
            };
            let report = StatsReport {
                source,
                classifier: if use_decoded { "decoded" } else { "argmax" }.into(),
                summary,
                reference,
            };
            let body = match format {
                StatsFormat::Text => report.to_text(),
                StatsFormat::Json => to_sorted_json(&report),
            };
            emit(path.as_deref(), &body, out)?;
            Ok(0)
        }
        Command::ExportCode { case, out: path } => {
            let code = build_qc_code(case)?;
            emit(path.as_deref(), &code.to_json(), out)?;
            Ok(0)
        }
        Command::BackendsCheck {
            circuits,
            max_qubits,
            max_gates,
            seed,
            threads,
        } => {
            if max_qubits == 0 || max_qubits > crate::sim::STATEVECTOR_QUBIT_CAP {
                return Err(CliError::Config(format!(
                    "--max-qubits must be in 1..={}",
                    crate::sim::STATEVECTOR_QUBIT_CAP
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let batch: Vec<_> = (0..circuits)
                .map(|_| random_clifford_circuit(&mut rng, max_qubits, max_gates))
                .collect();
            let tvs = with_threads(threads, || {
                batch
                    .par_iter()
                    .map(|c| Ok(total_variation(&exact_distribution(c)?, &tableau_distribution(c)?)))
                    .collect::<crate::Result<Vec<f64>>>()
            })??;
            let passed = tvs.iter().filter(|&&tv| tv <= BACKEND_TV_TOLERANCE).count();
            let worst = tvs.iter().copied().fold(0.0, f64::max);
            say(
                out,
                &format!(
                    "{passed}/{circuits} circuits within total variation {BACKEND_TV_TOLERANCE:e} (max {worst:e})\n"
                ),
            )?;
            if passed == circuits {
                Ok(0)
            } else {
                Err(CliError::Internal("backends disagree".into()))
            }
        }
    }
}

fn read_rows(path: &Path) -> CliResult<Vec<CountRow>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    if text.trim().is_empty() {
        return Err(CliError::Config(format!("{} is empty", path.display())));
    }
    if text.trim_start().starts_with('{') {
        let counts = Counts::from_json(&text).or_else(|_| CaseReport::from_json(&text).map(|r| r.counts))?;
        return Ok(rows_from_counts(&counts));
    }
    Ok(rows_from_csv(&text)?)
}

fn decoded_summary(case: CaseId, errors: &[usize], rows: &[CountRow]) -> CliResult<StatsSummary> {
    let code = build_qc_code(case)?;
    let mask = Bits::from_positions(code.spec().m_physical, errors)?;
    let verdicts: Vec<bool> = rows
        .iter()
        .map(|r| {
            r.outcome
                .parse::<Bits>()
                .ok()
                .and_then(|b| classify_outcome(&code, &b, &mask).ok())
                .is_some_and(|(_, ok)| ok)
        })
        .collect();
    // rows may repeat an outcome, so classify by position rather than by key
    let flagged: Vec<CountRow> = rows
        .iter()
        .zip(&verdicts)
        .map(|(r, &ok)| CountRow::new(if ok { "ok" } else { "err" }, r.count))
        .collect();
    let mut s = summarize(&flagged, |r| r.outcome == "err")?;
    s.num_outcomes = rows.len();
    Ok(s)
}

#[derive(Serialize)]
struct ReferenceReport {
    table: String,
    lines: Vec<ReferenceLine>,
}

#[derive(Serialize)]
struct StatsReport {
    source: String,
    classifier: String,
    summary: StatsSummary,
    reference: Option<ReferenceReport>,
}

impl StatsReport {
    fn to_text(&self) -> String {
        let s = &self.summary;
        let mut t = String::new();
        let _ = writeln!(t, "source     {} ({} rows, {} counts)", self.source, s.num_outcomes, s.total_counts);
        let _ = writeln!(t, "classifier {}", self.classifier);
        let _ = writeln!(t, "mean       {}", format_value(s.mean));
        let _ = writeln!(t, "variance   {}", format_value(s.variance));
        let _ = writeln!(t, "error_rate {}", format_value(s.error_rate_percent));
        if let Some(r) = &self.reference {
            let _ = writeln!(t, "reference  {}", r.table);
            for line in &r.lines {
                let _ = writeln!(t, "{}", line.render());
            }
        }
        t
    }
}
