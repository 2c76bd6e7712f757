//! Command dispatch for the `gentle` binary.
//!
//! Exit codes: 0 success, 1 parse or usage error, 2 not gentle, 3 an
//! enumeration cap was hit, 4 the oracle disagrees.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::dsl::{parse_band, parse_bound_quiver, parse_string};
use crate::forbidden::{finitistic_dimension, global_dimension};
use crate::homology::{hb_dim, HbMode, HomologyEngine, ModuleRef};
use crate::oracle::{check_agreement, AgreementError, FieldSpec, OracleDim, DEFAULT_PRIME};
use crate::quasi_tilted::{is_quasi_tilted, QtVerdict};
use crate::quiver::{validate_gentle, BoundQuiver};
use crate::report::{build_report, emit_report_json, ReportOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_NOT_GENTLE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_DISAGREE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "gentle", version, about = "Homological invariants of gentle algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the gentle axioms and finite dimensionality
    Validate { file: PathBuf },
    /// Global dimension
    Gldim { file: PathBuf },
    /// Finitistic dimension
    Findim { file: PathBuf },
    /// Projective and injective dimension of a string or band module
    Dims {
        file: PathBuf,
        #[arg(long, conflicts_with = "band", required_unless_present = "band")]
        string: Option<String>,
        #[arg(long)]
        band: Option<String>,
        /// Jordan block size of the band module
        #[arg(long, default_value_t = 1, requires = "band")]
        n: usize,
    },
    /// Supremum of pd + id over indecomposables with both finite
    Hbdim {
        file: PathBuf,
        /// enumerate strings up to this length instead of the exact method
        #[arg(long, conflicts_with = "exact")]
        max_len: Option<usize>,
        #[arg(long)]
        exact: bool,
    },
    /// Decide whether the algebra is quasi-tilted
    QuasiTilted { file: PathBuf },
    /// Every invariant at once
    Report {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compare combinatorial dimensions with explicit resolutions
    OracleCheck {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[arg(long, default_value_t = 10)]
        depth_cap: usize,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u64,
        #[arg(long)]
        second_prime: Option<u64>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<AgreementError> for Failure {
    fn from(e: AgreementError) -> Self {
        match e {
            AgreementError::Cap(c) => Failure::new(EXIT_CAP, c.to_string()),
            AgreementError::Oracle(o) => Failure::new(EXIT_PARSE, o.to_string()),
        }
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn load(path: &Path) -> Result<BoundQuiver, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    parse_bound_quiver(&text).map_err(|e| Failure::new(EXIT_PARSE, format!("{}:{e}", path.display())))
}

fn engine(bq: &BoundQuiver) -> Result<HomologyEngine, Failure> {
    HomologyEngine::new(bq).map_err(|e| Failure::new(EXIT_NOT_GENTLE, e.to_string()))
}

fn algebra_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn oracle_dim(d: OracleDim) -> String {
    match d {
        OracleDim::Finite(n) => n.to_string(),
        OracleDim::AtLeast(n) => format!(">={n}"),
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    let mut emit = |s: String| {
        let _ = out.write_all(s.as_bytes());
    };
    match command {
        Command::Validate { file } => {
            let report = validate_gentle(&load(&file)?);
            if report.is_gentle() {
                emit("gentle\n".into());
                return Ok(EXIT_OK);
            }
            for v in &report.violations {
                emit(format!("{}: {}\n", v.code, v.message));
            }
            Ok(EXIT_NOT_GENTLE)
        }
        Command::Gldim { file } => {
            let bq = load(&file)?;
            engine(&bq)?;
            emit(format!("{}\n", global_dimension(&bq)));
            Ok(EXIT_OK)
        }
        Command::Findim { file } => {
            let bq = load(&file)?;
            engine(&bq)?;
            emit(format!("{}\n", finitistic_dimension(&bq)));
            Ok(EXIT_OK)
        }
        Command::Dims { file, string, band, n } => {
            let bq = load(&file)?;
            let e = engine(&bq)?;
            let word_err = |x: crate::dsl::WordError| Failure::new(EXIT_PARSE, x.to_string());
            let module = match (string, band) {
                (Some(s), _) => ModuleRef::StringModule(parse_string(&bq, &s).map_err(word_err)?),
                (None, Some(b)) => {
                    if n == 0 {
                        return Err(Failure::new(EXIT_PARSE, "--n must be at least 1"));
                    }
                    ModuleRef::BandModule(parse_band(&bq, &b).map_err(word_err)?, n)
                }
                (None, None) => unreachable!("clap requires one of --string and --band"),
            };
            let r = e.dims(&module);
            emit(format!("pd {}\nid {}\nsum {}\nmethod {}\n", r.pd, r.id, r.sum, r.method));
            Ok(EXIT_OK)
        }
        Command::Hbdim { file, max_len, exact: _ } => {
            let bq = load(&file)?;
            let e = engine(&bq)?;
            let mode = max_len.map_or(HbMode::EndpointExact, |max_len| HbMode::Exhaustive { max_len });
            let hb = hb_dim(&e, mode).map_err(|c| Failure::new(EXIT_CAP, c.to_string()))?;
            let witness = hb.witness.map(|m| m.display(&bq)).unwrap_or_default();
            emit(format!("{}\nwitness {witness}\nexact {}\n", hb.value, hb.exact));
            Ok(EXIT_OK)
        }
        Command::QuasiTilted { file } => {
            let bq = load(&file)?;
            engine(&bq)?;
            let verdict = is_quasi_tilted(&bq);
            match &verdict {
                QtVerdict::NotQuasiTilted(w) => emit(format!("{verdict}\nwitness {}\n", w.display(&bq))),
                QtVerdict::NotApplicable(gl) => emit(format!("{verdict}\ngldim {gl}\n")),
                _ => emit(format!("{verdict}\n")),
            }
            Ok(EXIT_OK)
        }
        Command::Report { file, json } => {
            let bq = load(&file)?;
            let r = build_report(&algebra_name(&file), &bq, &ReportOptions::default())?;
            if json {
                emit(emit_report_json(&r));
            } else {
                let dim = |v: Option<usize>| v.map_or("inf".to_string(), |v| v.to_string());
                emit(format!(
                    "algebra {}\ngentle {}\ngldim {}\nfindim {}\nhbdim {}\nquasi_tilted {}\noracle {}/{} agree\n",
                    r.algebra,
                    r.gentle.ok,
                    dim(r.gldim.value),
                    r.findim,
                    dim(r.hbdim.value),
                    r.quasi_tilted.status,
                    r.oracle.checked - r.oracle.mismatches,
                    r.oracle.checked
                ));
            }
            Ok(if r.gentle.ok { EXIT_OK } else { EXIT_NOT_GENTLE })
        }
        Command::OracleCheck { file, max_len, depth_cap, prime, second_prime } => {
            let bq = load(&file)?;
            let e = engine(&bq)?;
            let fields = std::iter::once(prime)
                .chain(second_prime)
                .map(|p| FieldSpec::new(p).map_err(|x| Failure::new(EXIT_PARSE, x.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            let summary = check_agreement(&e, max_len, depth_cap, &fields)?;
            emit(format!(
                "checked {}\nmismatches {}\nnon_minimal {}\n",
                summary.checked,
                summary.mismatches.len(),
                summary.non_minimal
            ));
            for m in &summary.mismatches {
                emit(format!(
                    "mismatch {} p={}: combinatorial ({}, {}) oracle ({}, {})\n",
                    m.module.display(&bq),
                    m.prime,
                    m.combinatorial.0,
                    m.combinatorial.1,
                    oracle_dim(m.oracle.0),
                    oracle_dim(m.oracle.1)
                ));
            }
            let agree = summary.mismatches.is_empty() && summary.non_minimal == 0;
            Ok(if agree { EXIT_OK } else { EXIT_DISAGREE })
        }
    }
}
