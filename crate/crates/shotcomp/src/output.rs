use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formats::{fmt_sig, round_sig, CompressorFile};
use crate::sweep::{OutputFormat, SweepRecord};

pub const CSV_HEADER: &str =
    "method,M,rate_bits,exponent_bits,penalty_bits,type1_rate,type2_rate,exact_zero,seed";

/// Written in the `penalty_bits` column of records whose exhaustive search
/// was over budget.
pub const SKIPPED_MARKER: &str = "skipped:budget";

fn opt_num(v: Option<f64>) -> String {
    v.map(fmt_sig).unwrap_or_default()
}

fn sorted(records: &[SweepRecord]) -> Vec<&SweepRecord> {
    let mut rows: Vec<&SweepRecord> = records.iter().collect();
    rows.sort_by_key(|r| (r.method, r.m));
    rows
}

pub fn to_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in sorted(records) {
        let penalty = if r.skipped_budget { SKIPPED_MARKER.to_string() } else { opt_num(r.penalty_bits) };
        let fields = [
            r.method.name().to_string(),
            r.m.to_string(),
            fmt_sig(r.rate_bits),
            opt_num(r.exponent_bits),
            penalty,
            opt_num(r.type1_rate),
            opt_num(r.type2_rate),
            r.exact_zero.map(|z| z.to_string()).unwrap_or_default(),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct JsonRecord {
    method: &'static str,
    #[serde(rename = "M")]
    m: usize,
    rate_bits: f64,
    exponent_bits: Option<f64>,
    penalty_bits: Option<f64>,
    type1_rate: Option<f64>,
    type2_rate: Option<f64>,
    exact_zero: Option<bool>,
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    skipped: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    compressor: Option<CompressorFile>,
}

pub fn to_json(records: &[SweepRecord]) -> String {
    let rows: Vec<JsonRecord> = sorted(records)
        .into_iter()
        .map(|r| JsonRecord {
            method: r.method.name(),
            m: r.m,
            rate_bits: round_sig(r.rate_bits),
            exponent_bits: r.exponent_bits.map(round_sig),
            penalty_bits: r.penalty_bits.map(round_sig),
            type1_rate: r.type1_rate.map(round_sig),
            type2_rate: r.type2_rate.map(round_sig),
            exact_zero: r.exact_zero,
            seed: r.seed,
            skipped: r.skipped_budget.then_some("budget"),
            compressor: r.compressor.as_ref().map(CompressorFile::from),
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&rows).expect("records serialize");
    text.push('\n');
    text
}

pub fn render(records: &[SweepRecord], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => to_csv(records),
        OutputFormat::Json => to_json(records),
    }
}

/// Writes the rendered records to `path`, or to stdout when `path` is `None`.
pub fn emit(records: &[SweepRecord], format: OutputFormat, path: Option<&Path>) -> Result<()> {
    write_text(&render(records, format), path)
}

pub(crate) fn write_text(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(path) => fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e))
        }
    }
}
