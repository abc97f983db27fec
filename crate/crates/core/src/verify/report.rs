//! Deterministic report emission.
//!
//! JSON schema per record:
//!   {theorem_id, input, lhs, rhs, margin, uncertainty, verdict,
//!    tolerance, note, intermediates, certificates, timings}
//! CSV columns (fixed order):
//!   theorem_id,input,lhs,rhs,margin,uncertainty,verdict,tolerance,wall_ms
//!
//! Identical configuration and seed reproduce reports byte for byte;
//! wall times are zeroed unless explicitly requested, since they are the
//! one nondeterministic field.

use crate::error::Result;
use crate::verify::record::{Verdict, VerificationRecord};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

fn json_float(v: f64) -> serde_json::Value {
    if v.is_finite() {
        serde_json::json!(v)
    } else if v.is_nan() {
        serde_json::json!("nan")
    } else if v > 0.0 {
        serde_json::json!("inf")
    } else {
        serde_json::json!("-inf")
    }
}

pub fn records_to_json(records: &[VerificationRecord], with_timings: bool) -> String {
    let items: Vec<serde_json::Value> = records
        .iter()
        .map(|r| {
            serde_json::json!({
                "theorem_id": r.theorem_id,
                "input": r.input,
                "lhs": json_float(r.lhs),
                "rhs": json_float(r.rhs),
                "margin": json_float(r.margin),
                "uncertainty": json_float(r.uncertainty),
                "verdict": r.verdict,
                "tolerance": json_float(r.tolerance),
                "note": r.note,
                "intermediates": r.intermediates,
                "certificates": r.certificates,
                "timings": { "wall_ms": if with_timings { json_float(r.wall_ms) } else { json_float(0.0) } },
            })
        })
        .collect();
    serde_json::to_string_pretty(&serde_json::json!({ "records": items }))
        .expect("records serialize")
}

fn csv_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn records_to_csv(records: &[VerificationRecord], with_timings: bool) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "theorem_id,input,lhs,rhs,margin,uncertainty,verdict,tolerance,wall_ms"
    )
    .unwrap();
    for r in records {
        let verdict = match r.verdict {
            Verdict::Holds => "holds",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Violated => "violated",
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.theorem_id,
            r.input.replace(',', ";"),
            csv_float(r.lhs),
            csv_float(r.rhs),
            csv_float(r.margin),
            csv_float(r.uncertainty),
            verdict,
            csv_float(r.tolerance),
            csv_float(if with_timings { r.wall_ms } else { 0.0 }),
        )
        .unwrap();
    }
    out
}

pub fn emit_report(
    records: &[VerificationRecord],
    path: &Path,
    format: ReportFormat,
    with_timings: bool,
) -> Result<()> {
    let text = match format {
        ReportFormat::Json => records_to_json(records, with_timings),
        ReportFormat::Csv => records_to_csv(records, with_timings),
    };
    std::fs::write(path, text)?;
    Ok(())
}
