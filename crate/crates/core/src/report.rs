//! The machine-readable summary of one bound quiver.
//!
//! Field order is fixed by the struct declarations below; serde keeps it,
//! so two runs on the same input print the same bytes.

use serde::Serialize;

use crate::forbidden::{finitistic_dimension, global_dimension, DimValue};
use crate::homology::{check_bound_hypotheses, hb_dim, HbMode, HomologyEngine};
use crate::oracle::{check_agreement, AgreementError, FieldSpec, DEFAULT_PRIME, SECOND_PRIME};
use crate::quasi_tilted::{is_quasi_tilted, QtVerdict};
use crate::quiver::{validate_gentle, BoundQuiver, Violation};

pub const FORMAT_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    #[serde(rename = "spec")]
    pub format_version: &'static str,
    pub algebra: String,
    pub gentle: GentleBlock,
    pub gldim: DimBlock,
    pub findim: usize,
    pub hbdim: HbBlock,
    pub hypotheses: HypothesesBlock,
    pub quasi_tilted: QtBlock,
    pub oracle: OracleBlock,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GentleBlock {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DimBlock {
    pub finite: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<usize>,
}

impl From<DimValue> for DimBlock {
    fn from(d: DimValue) -> Self {
        DimBlock { finite: d.is_finite(), value: d.finite() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HbBlock {
    pub finite: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<usize>,
    pub witness: String,
    pub exact: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesesBlock {
    pub sources_ok: bool,
    pub sinks_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QtBlock {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleBlock {
    pub checked: usize,
    pub mismatches: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReportOptions {
    /// strings and bands up to this length are checked against the oracle
    pub oracle_max_len: usize,
    pub depth_cap: usize,
    pub primes: [u64; 2],
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { oracle_max_len: 4, depth_cap: 10, primes: [DEFAULT_PRIME, SECOND_PRIME] }
    }
}

/// Builds the report. Invariants other than gentleness are only computed
/// for gentle input; otherwise they are left at their empty values.
pub fn build_report(name: &str, bq: &BoundQuiver, opts: &ReportOptions) -> Result<Report, AgreementError> {
    let gentle = validate_gentle(bq);
    let engine = match HomologyEngine::new(bq) {
        Ok(e) => e,
        Err(_) => {
            return Ok(Report {
                format_version: FORMAT_VERSION,
                algebra: name.to_string(),
                gentle: GentleBlock { ok: false, violations: gentle.violations },
                gldim: DimBlock { finite: false, value: None },
                findim: 0,
                hbdim: HbBlock { finite: false, value: None, witness: String::new(), exact: false },
                hypotheses: HypothesesBlock { sources_ok: false, sinks_ok: false },
                quasi_tilted: QtBlock { status: "NotApplicable".into(), witness: None },
                oracle: OracleBlock { checked: 0, mismatches: 0 },
            })
        }
    };
    let hb = hb_dim(&engine, HbMode::EndpointExact)?;
    let hyp = check_bound_hypotheses(bq);
    let verdict = is_quasi_tilted(bq);
    let fields = opts.primes.iter().map(|&p| FieldSpec::new(p)).collect::<Result<Vec<_>, _>>()?;
    let agreement = check_agreement(&engine, opts.oracle_max_len, opts.depth_cap, &fields)?;
    Ok(Report {
        format_version: FORMAT_VERSION,
        algebra: name.to_string(),
        gentle: GentleBlock { ok: true, violations: Vec::new() },
        gldim: global_dimension(bq).into(),
        findim: finitistic_dimension(bq),
        hbdim: HbBlock {
            finite: hb.value.is_finite(),
            value: hb.value.finite(),
            witness: hb.witness.map(|m| m.display(bq)).unwrap_or_default(),
            exact: hb.exact,
        },
        hypotheses: HypothesesBlock { sources_ok: hyp.sources_ok, sinks_ok: hyp.sinks_ok },
        quasi_tilted: QtBlock {
            status: verdict.status().to_string(),
            witness: match verdict {
                QtVerdict::NotQuasiTilted(w) => Some(w.display(bq)),
                _ => None,
            },
        },
        oracle: OracleBlock { checked: agreement.checked, mismatches: agreement.mismatches.len() },
    })
}

/// Pretty-printed JSON with a trailing newline.
pub fn emit_report_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}
