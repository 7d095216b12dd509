//! Command implementations behind the `dadl` binary.
//!
//! Each command returns a [`Report`]: the text for standard output and the
//! exit code. Errors map to exit code 2.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};

use deontic_core::crosscheck::{run_crosscheck, CrosscheckConfig};
use deontic_core::defaults::{
    algebraic_entails, algebraic_extensions, basic_defaults, build_default_proof,
    credulous_entails, reiter_extensions, verify_default_proof, DefaultProof, PairDisplay,
};
use deontic_core::entailment::Prover;
use deontic_core::lindenbaum::Lindenbaum;
use deontic_core::syntax::{parse_formula, parse_theory, Formula, Theory};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Core(deontic_core::Error),
    Internal(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Core(e) => e.fmt(f),
            CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<deontic_core::Error> for CliError {
    fn from(e: deontic_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<deontic_core::ParseError> for CliError {
    fn from(e: deontic_core::ParseError) -> Self {
        CliError::Core(e.into())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Standard output text and exit code of a finished command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub code: i32,
    pub stdout: String,
}

impl Report {
    fn new(code: i32, stdout: String) -> Self {
        Report { code, stdout }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Classical,
    DefaultSyntactic,
    DefaultAlgebraic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtensionKind {
    Reiter,
    Algebraic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryRequest {
    pub theory_path: PathBuf,
    pub query: String,
    pub mode: Mode,
}

pub fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses a theory and rejects it if inconsistent.
pub fn load_theory(source: &str) -> CliResult<Theory> {
    let theory = parse_theory(source)?;
    if !Prover::for_theory(&theory)?.consistent() {
        return Err(deontic_core::Error::InconsistentTheory.into());
    }
    Ok(theory)
}

fn query(theory: &Theory, text: &str) -> CliResult<Formula> {
    Ok(parse_formula(text, &theory.vocabulary)?)
}

pub fn cmd_check(req: &QueryRequest) -> CliResult<Report> {
    let theory = load_theory(&read_file(&req.theory_path)?)?;
    check(&theory, &req.query, req.mode)
}

/// `check` on an already loaded theory.
pub fn check(theory: &Theory, query_text: &str, mode: Mode) -> CliResult<Report> {
    let phi = query(theory, query_text)?;
    match mode {
        Mode::Classical => {
            let verdict = Prover::for_theory(theory)?.entails(&phi)?;
            match verdict.countermodel {
                None => Ok(Report::new(EXIT_YES, "YES\n".into())),
                Some(m) => Ok(Report::new(EXIT_NO, format!("NO\ncountermodel: {m}\n"))),
            }
        }
        Mode::DefaultSyntactic => {
            if !credulous_entails(theory, &phi)? {
                return Ok(Report::new(EXIT_NO, "NO\n".into()));
            }
            let proof = build_default_proof(theory, &phi)?;
            verify_default_proof(theory, &proof, &phi)
                .map_err(|r| CliError::Internal(format!("emitted certificate rejected: {r}")))?;
            Ok(Report::new(EXIT_YES, format!("YES\n{proof}")))
        }
        Mode::DefaultAlgebraic => {
            basic_defaults(theory)?;
            let verdict = if algebraic_entails(theory, &phi)? {
                (EXIT_YES, "YES\n")
            } else {
                (EXIT_NO, "NO\n")
            };
            Ok(Report::new(verdict.0, verdict.1.into()))
        }
    }
}

pub fn cmd_extensions(theory_path: &Path, kind: ExtensionKind) -> CliResult<Report> {
    let theory = load_theory(&read_file(theory_path)?)?;
    extensions(&theory, kind)
}

pub fn extensions(theory: &Theory, kind: ExtensionKind) -> CliResult<Report> {
    let mut out = String::new();
    match kind {
        ExtensionKind::Reiter => {
            let exts = reiter_extensions(theory)?;
            for (k, e) in exts.iter().enumerate() {
                let _ = writeln!(out, "extension {} of {}", k + 1, exts.len());
                let _ = writeln!(out, "  generators:");
                for g in &e.generators {
                    let _ = writeln!(out, "    {g}");
                }
                let applied: Vec<String> = e
                    .witness
                    .indices
                    .iter()
                    .map(|&i| theory.defaults[i].to_string())
                    .collect();
                if applied.is_empty() {
                    let _ = writeln!(out, "  sequence: none");
                } else {
                    let _ = writeln!(out, "  sequence: {}", applied.join(" ; "));
                }
            }
        }
        ExtensionKind::Algebraic => {
            let defaults = basic_defaults(theory)?;
            let lt = Lindenbaum::build(theory)?;
            let exts = algebraic_extensions(theory)?;
            for (k, e) in exts.iter().enumerate() {
                let _ = writeln!(out, "extension {} of {}", k + 1, exts.len());
                let shown = PairDisplay {
                    quotient: &lt.quotient,
                    pair: e,
                    defaults: &defaults,
                };
                for line in shown.to_string().lines() {
                    let _ = writeln!(out, "  {line}");
                }
            }
        }
    }
    Ok(Report::new(EXIT_YES, out))
}

pub fn cmd_dump_algebra(theory_path: &Path) -> CliResult<Report> {
    let theory = load_theory(&read_file(theory_path)?)?;
    dump_algebra(&theory)
}

pub fn dump_algebra(theory: &Theory) -> CliResult<Report> {
    let dot = Lindenbaum::build(theory)?.to_dot()?;
    Ok(Report::new(EXIT_YES, dot))
}

pub fn cmd_prove(theory_path: &Path, query_text: &str) -> CliResult<Report> {
    let theory = load_theory(&read_file(theory_path)?)?;
    prove(&theory, query_text)
}

/// Prints a certificate, or `NO` when the query is not a credulous
/// consequence.
pub fn prove(theory: &Theory, query_text: &str) -> CliResult<Report> {
    let phi = query(theory, query_text)?;
    if !credulous_entails(theory, &phi)? {
        return Ok(Report::new(EXIT_NO, "NO\n".into()));
    }
    let proof = build_default_proof(theory, &phi)?;
    Ok(Report::new(EXIT_YES, proof.to_string()))
}

pub fn cmd_verify(
    theory_path: &Path,
    certificate_path: &Path,
    query_text: Option<&str>,
) -> CliResult<Report> {
    let theory = load_theory(&read_file(theory_path)?)?;
    verify(&theory, &read_file(certificate_path)?, query_text)
}

/// Checks a certificate against the query, or against its own last line
/// when no query is given.
pub fn verify(theory: &Theory, certificate: &str, query_text: Option<&str>) -> CliResult<Report> {
    let proof = DefaultProof::parse(certificate, theory)?;
    let phi = match query_text {
        Some(text) => query(theory, text)?,
        None => match proof.conclusion() {
            Some(c) => c.clone(),
            None => return Ok(Report::new(EXIT_NO, "INVALID: empty proof\n".into())),
        },
    };
    Ok(match verify_default_proof(theory, &proof, &phi) {
        Ok(()) => Report::new(EXIT_YES, "VALID\n".into()),
        Err(r) => Report::new(EXIT_NO, format!("INVALID: {r}\n")),
    })
}

pub fn cmd_crosscheck(cfg: &CrosscheckConfig) -> CliResult<Report> {
    let report = run_crosscheck(cfg)?;
    let code = if report.all_passed() {
        EXIT_YES
    } else {
        EXIT_NO
    };
    Ok(Report::new(code, format!("{report}\n")))
}
