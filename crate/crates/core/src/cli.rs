//! Command-line interface. [`run`] is the whole program minus process exit,
//! so tests can drive it with in-memory streams.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{
    entropy_gap, polymer_size_bound, tbn_distance, upper_bound_log10, verify_amplifier, CheckStatus,
    TbnStats, VerifyOptions,
};
use crate::basis::{enumerate_basis_with, BasisOptions};
use crate::constructions::{build_amplifier, reference_configuration, AmplifierSpec};
use crate::error::TbnError;
use crate::io::report::{self, BasisJson, BoundJson, GapJson, SolveJson};
use crate::io::{parse_configuration, parse_tbn, serialize_configuration, serialize_tbn, tbn_warnings};
use crate::model::Tbn;
use crate::solver::{solve_with, SolveOptions, StableReport, DEFAULT_NODE_BUDGET};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "tbn", version, about = "Analyze thermodynamic binding networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Plain,
    Analyte,
    Translator,
    TranslatorAnalyte,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate an amplifier network.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(short)]
        n: u32,
        #[arg(short)]
        k: u32,
        /// Write the network here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the reference configuration to this file.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// List the polymer basis.
    Basis {
        file: PathBuf,
        /// Largest polymer size to consider; defaults to the monomer total.
        #[arg(long)]
        max_size: Option<u32>,
        #[arg(long, default_value_t = crate::basis::DEFAULT_CANDIDATE_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Find the stable configurations.
    Solve {
        file: PathBuf,
        /// List every stable configuration, not only the first.
        #[arg(long)]
        all: bool,
        /// Include the lexicographically earliest stable configuration.
        #[arg(long)]
        lex: bool,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compute the entropy gap.
    Gap {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Distance between the stable configurations of two networks.
    Distance {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check a structural property; exits 1 when it does not hold.
    Check {
        file: PathBuf,
        #[arg(long, group = "property")]
        feed_forward: bool,
        /// Configuration file to test for saturation.
        #[arg(long, group = "property", value_name = "CONFIGFILE")]
        saturated: Option<PathBuf>,
        #[arg(long, group = "property")]
        star_limiting: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check the amplifier construction's properties for one (n, k).
    Verify {
        #[arg(short)]
        n: u32,
        #[arg(short)]
        k: u32,
        #[arg(long)]
        translators: bool,
        /// Budget for basis enumeration and for each search.
        #[arg(long, default_value_t = VerifyOptions::default().node_budget)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Evaluate the polymer size and distance bounds.
    Bound {
        #[arg(short)]
        n: u64,
        /// Domain types for the size bound; defaults to n.
        #[arg(short)]
        d: Option<u64>,
        /// Monomer types for the size bound; defaults to n.
        #[arg(short)]
        m: Option<u64>,
        /// Sites per monomer for the size bound; defaults to n.
        #[arg(short)]
        a: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

impl Command {
    fn format(&self) -> Format {
        match self {
            Command::Gen { .. } => Format::Text,
            Command::Basis { format, .. }
            | Command::Solve { format, .. }
            | Command::Gap { format, .. }
            | Command::Distance { format, .. }
            | Command::Check { format, .. }
            | Command::Verify { format, .. }
            | Command::Bound { format, .. } => *format,
        }
    }
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl From<TbnError> for Failure {
    fn from(e: TbnError) -> Self {
        let (code, kind) = match &e {
            TbnError::BudgetExceeded { .. } => (EXIT_BUDGET, "budget"),
            TbnError::IncompleteOptima => (EXIT_BUDGET, "incomplete"),
            TbnError::Parse { .. } => (EXIT_USAGE, "parse"),
            _ => (EXIT_USAGE, "invalid"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: EXIT_USAGE, kind: "io", message: format!("{}: {e}", path.display()) }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn load_tbn(path: &Path, err: &mut dyn Write) -> Result<Tbn, Failure> {
    let tbn = parse_tbn(&read(path)?)
        .map_err(|e| Failure { message: format!("{}: {e}", path.display()), ..Failure::from(e) })?;
    for w in tbn_warnings(&tbn) {
        let _ = writeln!(err, "warning: {}: {w}", path.display());
    }
    Ok(tbn)
}

fn emit<T: Serialize>(out: &mut dyn Write, format: Format, value: &T, text: impl FnOnce() -> String) {
    let s = match format {
        Format::Json => report::to_json(value),
        Format::Text => text(),
    };
    let _ = out.write_all(s.as_bytes());
}

fn solve_file(path: &Path, budget: u64, err: &mut dyn Write) -> Result<(Tbn, StableReport), Failure> {
    let tbn = load_tbn(path, err)?;
    let report = solve_with(&tbn, &SolveOptions { node_budget: budget, ..SolveOptions::default() })?;
    Ok((tbn, report))
}

#[derive(Serialize)]
struct CheckJson<'a> {
    check: &'a str,
    holds: bool,
}

#[derive(Serialize)]
struct DistanceJson {
    distance: u64,
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Gen { family, n, k, output, reference } => {
            let (analyte, translators) = match family {
                Family::Plain => (false, false),
                Family::Analyte => (true, false),
                Family::Translator => (false, true),
                Family::TranslatorAnalyte => (true, true),
            };
            let spec = AmplifierSpec::new(n, k, analyte, translators)?;
            let text = serialize_tbn(&build_amplifier(&spec)?);
            match output {
                Some(path) => std::fs::write(&path, text).map_err(|e| io_failure(&path, e))?,
                None => {
                    let _ = out.write_all(text.as_bytes());
                }
            }
            if let Some(path) = reference {
                let config = serialize_configuration(&reference_configuration(&spec)?);
                std::fs::write(&path, config).map_err(|e| io_failure(&path, e))?;
            }
            Ok(EXIT_OK)
        }
        Command::Basis { file, max_size, budget, format } => {
            let tbn = load_tbn(&file, err)?;
            let basis = enumerate_basis_with(
                &tbn,
                &BasisOptions {
                    size_cap: max_size.unwrap_or(tbn.total_monomers().max(1) as u32),
                    within_counts: max_size.is_none(),
                    candidate_budget: budget,
                },
            )?;
            emit(out, format, &BasisJson::new(&basis, &tbn), || report::basis_text(&basis, &tbn));
            Ok(EXIT_OK)
        }
        Command::Solve { file, all, lex, budget, format } => {
            let (_, report) = solve_file(&file, budget, err)?;
            if all && !report.optima_complete {
                let _ = writeln!(err, "warning: the list of stable configurations is truncated");
            }
            emit(out, format, &SolveJson::new(&report, all, lex), || report::solve_text(&report, all, lex));
            Ok(EXIT_OK)
        }
        Command::Gap { file, budget, format } => {
            let (tbn, report) = solve_file(&file, budget, err)?;
            let gap = entropy_gap(&tbn, &report, budget)?;
            if !gap.exhaustive {
                return Err(Failure::from(TbnError::BudgetExceeded {
                    what: "entropy gap search node",
                    limit: budget,
                }));
            }
            emit(out, format, &GapJson::new(report.optimum, &gap), || report::gap_text(report.optimum, &gap));
            Ok(EXIT_OK)
        }
        Command::Distance { first, second, budget, format } => {
            let (_, a) = solve_file(&first, budget, err)?;
            let (_, b) = solve_file(&second, budget, err)?;
            let distance = tbn_distance(&a, &b)?;
            emit(out, format, &DistanceJson { distance }, || format!("{distance}\n"));
            Ok(EXIT_OK)
        }
        Command::Check { file, feed_forward, saturated, star_limiting, format } => {
            let tbn = load_tbn(&file, err)?;
            let (name, holds) = if feed_forward {
                ("feed_forward", tbn.is_feed_forward())
            } else if star_limiting {
                ("star_limiting", tbn.is_star_limiting())
            } else if let Some(path) = saturated {
                let config = parse_configuration(&read(&path)?, &tbn).map_err(|e| Failure {
                    message: format!("{}: {e}", path.display()),
                    ..Failure::from(e)
                })?;
                if !config.tbn().same_monomers(&tbn) {
                    return Err(Failure::from(TbnError::MonomerMismatch(
                        "configuration does not partition the network".to_string(),
                    )));
                }
                ("saturated", config.is_saturated())
            } else {
                return Err(Failure {
                    code: EXIT_USAGE,
                    kind: "usage",
                    message: "check needs one of --feed-forward, --saturated, --star-limiting".to_string(),
                });
            };
            emit(out, format, &CheckJson { check: name, holds }, || {
                format!("{name}: {}\n", if holds { "yes" } else { "no" })
            });
            Ok(if holds { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Verify { n, k, translators, budget, format } => {
            let options = VerifyOptions {
                translators,
                basis_budget: budget,
                node_budget: budget,
                ..VerifyOptions::default()
            };
            let v = verify_amplifier(n, k, &options)?;
            emit(out, format, &v, || report::verify_text(&v));
            Ok(if !v.passed() {
                EXIT_CHECK_FAILED
            } else if v.checks.iter().any(|c| c.status == CheckStatus::Skipped) {
                EXIT_BUDGET
            } else {
                EXIT_OK
            })
        }
        Command::Bound { n, d, m, a, format } => {
            let stats = TbnStats::new(d.unwrap_or(n), m.unwrap_or(n), a.unwrap_or(n));
            let distance_bound = upper_bound_log10(&TbnStats { n, ..stats })?;
            let bound = BoundJson {
                d: stats.d,
                m: stats.m,
                a: stats.a,
                polymer_size_bound: polymer_size_bound(&stats).to_string(),
                distance_bound,
            };
            emit(out, format, &bound, || report::bound_text(&bound));
            Ok(EXIT_OK)
        }
    }
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    error: &'a str,
    kind: &'a str,
    exit_code: i32,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let format = cli.command.format();
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = match format {
                Format::Json => err.write_all(
                    report::to_json(&ErrorJson { error: &f.message, kind: f.kind, exit_code: f.code })
                        .as_bytes(),
                ),
                Format::Text => writeln!(err, "error: {}", f.message),
            };
            f.code
        }
    }
}
