//! JSONL and CSV report writers.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use super::{EngineError, Result};
use crate::catalog::CheckResult;
use crate::sequences::LucasParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Jsonl,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "jsonl" => Ok(Self::Jsonl),
            "csv" => Ok(Self::Csv),
            other => Err(EngineError::InvalidConfig(format!(
                "unknown format {other:?} (jsonl or csv)"
            ))),
        }
    }
}

#[derive(Serialize)]
struct ParamsRecord {
    a: i64,
    b: i64,
}

#[derive(Serialize)]
struct JsonRecord<'a> {
    prime: u64,
    check: &'a str,
    params: Option<ParamsRecord>,
    applicable: bool,
    pass: Option<bool>,
    lhs: Option<String>,
    modulus_power: u32,
    micros: u64,
}

#[derive(Serialize)]
struct CsvRecord<'a> {
    prime: u64,
    check: &'a str,
    params: String,
    applicable: bool,
    pass: Option<bool>,
    lhs: Option<String>,
    modulus_power: u32,
    micros: u64,
}

fn micros(r: &CheckResult, timing: bool) -> u64 {
    if timing {
        r.elapsed.as_micros() as u64
    } else {
        0
    }
}

fn params_text(p: Option<LucasParams>) -> String {
    p.map(|p| format!("a={};b={}", p.a, p.b))
        .unwrap_or_default()
}

fn sort_key(r: &CheckResult) -> (u64, crate::catalog::CheckId, Option<LucasParams>) {
    (r.prime, r.id, r.params)
}

/// Write `results` sorted by `(prime, registry order, params)`.
///
/// `micros` is `0` unless `timing` is set, which keeps reports byte-stable.
pub fn write_report<W: Write>(
    results: &[CheckResult],
    format: ReportFormat,
    out: W,
    timing: bool,
) -> Result<()> {
    let mut sorted: Vec<&CheckResult> = results.iter().collect();
    sorted.sort_by_key(|r| sort_key(r));
    match format {
        ReportFormat::Jsonl => {
            let mut out = BufWriter::new(out);
            for r in sorted {
                let rec = JsonRecord {
                    prime: r.prime,
                    check: r.id.as_str(),
                    params: r.params.map(|p| ParamsRecord { a: p.a, b: p.b }),
                    applicable: r.applicable,
                    pass: r.pass,
                    lhs: r.lhs.map(|x| x.to_string()),
                    modulus_power: r.modulus_power,
                    micros: micros(r, timing),
                };
                serde_json::to_writer(&mut out, &rec)?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
        ReportFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(out);
            w.write_record([
                "prime",
                "check",
                "params",
                "applicable",
                "pass",
                "lhs",
                "modulus_power",
                "micros",
            ])?;
            for r in sorted {
                let rec = CsvRecord {
                    prime: r.prime,
                    check: r.id.as_str(),
                    params: params_text(r.params),
                    applicable: r.applicable,
                    pass: r.pass,
                    lhs: r.lhs.map(|x| x.to_string()),
                    modulus_power: r.modulus_power,
                    micros: micros(r, timing),
                };
                w.serialize(rec)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Write to `path`, or standard output when `path` is `None`.
pub fn emit_report(
    results: &[CheckResult],
    format: ReportFormat,
    path: Option<&Path>,
    timing: bool,
) -> Result<()> {
    match path {
        Some(path) => write_report(results, format, File::create(path)?, timing),
        None => write_report(results, format, io::stdout().lock(), timing),
    }
}
