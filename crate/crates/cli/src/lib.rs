//! Batch front end for `destab-core`: reads a JSON problem file, runs one
//! subcommand and writes a deterministic text or JSON report.

pub mod commands;
pub mod input;
pub mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::Options;
use crate::input::{parse_file, parse_payload, ChainPayload, HomPayload, Kind, LatticePayload, TorusPayload, VectorPayload};
use crate::report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Capacity(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn from_core(e: destab_core::Error, what: &str) -> Self {
        use destab_core::Error as E;
        match e {
            E::CapacityExceeded { .. } => CliError::Capacity(format!("{what}: {e}")),
            E::VerificationFailed(_) | E::NoFiltrationFound | E::MultipleFiltrationsFound(_) => {
                CliError::Failed(format!("{what}: {e}"))
            }
            _ => CliError::Invalid(format!("{what}: {e}")),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Capacity(_) => EXIT_CAPACITY,
            CliError::Failed(_) => EXIT_FAILED,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "destab", version, about = "Optimal destabilizing vectors, limits and HN filtrations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Problem file (JSON).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Run brute-force and randomized oracles and report their outcome.
    #[arg(long, global = true)]
    pub verify: bool,
    /// Seed for the randomized oracles.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Semistability verdict and optimal ray of a torus problem.
    Check,
    /// Optimal ray with its finite cone and KKT certificate.
    Destab,
    /// Limit point and the induced problem it is semistable for.
    Limit,
    /// Stratification of all supports of a weight system.
    Strata,
    /// The `Hom(V, V0)` problem.
    Hom,
    /// A chain of linear maps.
    Chain,
    /// Harder–Narasimhan filtration of a bundle lattice.
    BundleHn,
    /// τ-filtration of a pair lattice.
    PairHn,
    /// Eigenvalues and flag of a torus element.
    Class,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Destab => "destab",
            Command::Limit => "limit",
            Command::Strata => "strata",
            Command::Hom => "hom",
            Command::Chain => "chain",
            Command::BundleHn => "bundle-hn",
            Command::PairHn => "pair-hn",
            Command::Class => "class",
        }
    }

    fn expected_kind(self) -> Kind {
        match self {
            Command::Check | Command::Destab | Command::Limit | Command::Strata => Kind::Torus,
            Command::Hom => Kind::Hom,
            Command::Chain => Kind::Chain,
            Command::BundleHn => Kind::Bundle,
            Command::PairHn => Kind::Pair,
            Command::Class => Kind::Vector,
        }
    }
}

/// Parses the problem text and builds the report for `command`.
pub fn execute(command: Command, text: &str, opts: Options) -> Result<Report, CliError> {
    let file = parse_file(text)?;
    let expected = command.expected_kind();
    if file.kind != expected {
        return Err(CliError::Invalid(format!(
            "kind: `{}` needs kind `{expected}`, found `{}`",
            command.name(),
            file.kind
        )));
    }
    let mut report = Report::new(command.name(), &file.kind.to_string(), file.metadata);
    match command {
        Command::Check | Command::Destab | Command::Limit | Command::Strata => {
            let p = parse_payload::<TorusPayload>(file.payload)?.build()?;
            match command {
                Command::Check => commands::check_cmd(&p, opts, &mut report)?,
                Command::Destab => commands::destab_cmd(&p, opts, &mut report)?,
                Command::Limit => commands::limit_cmd(&p, opts, &mut report)?,
                _ => commands::strata_cmd(&p, opts, &mut report)?,
            }
        }
        Command::Hom => {
            let p = parse_payload::<HomPayload>(file.payload)?.build()?;
            commands::hom_cmd(&p, opts, &mut report)?;
        }
        Command::Chain => {
            let p = parse_payload::<ChainPayload>(file.payload)?.build()?;
            commands::chain_cmd(&p, opts, &mut report)?;
        }
        Command::BundleHn => {
            let (lattice, tau) = parse_payload::<LatticePayload>(file.payload)?.build()?;
            if tau.is_some() {
                return Err(CliError::Invalid("payload.tau: bundle problems take no tau".into()));
            }
            commands::bundle_cmd(&lattice, opts, &mut report)?;
        }
        Command::PairHn => {
            let (lattice, tau) = parse_payload::<LatticePayload>(file.payload)?.build()?;
            let tau = tau.ok_or_else(|| CliError::Invalid("payload.tau: required for pair problems".into()))?;
            commands::pair_cmd(&lattice, &tau, opts, &mut report)?;
        }
        Command::Class => {
            let s = parse_payload::<VectorPayload>(file.payload)?.values();
            commands::class_cmd(&s, &mut report);
        }
    }
    Ok(report)
}

/// Runs the tool on `argv`, writing the report to `out` and diagnostics
/// to `err`. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let text = match read_input(cli.input.as_ref()) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    let opts = Options {
        verify: cli.verify,
        seed: cli.seed,
    };
    match execute(cli.command, &text, opts) {
        Ok(report) => {
            let body = match cli.format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
            };
            let _ = out.write_all(body.as_bytes());
            if report.all_checks_pass() {
                EXIT_OK
            } else {
                let _ = writeln!(err, "error: verification failed");
                EXIT_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read_input(path: Option<&PathBuf>) -> Result<String, CliError> {
    match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Invalid(format!("--input {}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
                .map_err(|e| CliError::Invalid(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}
