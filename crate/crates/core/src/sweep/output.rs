use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

use super::{OutputFormat, SweepRecord};

pub const CSV_HEADER: &str = "t,nh,metric,regime,classical_bound,witnessed,scenario,kind,mode";

/// Formats like C's `%.9g`: 9 significant digits, trailing zeros dropped,
/// scientific notation when the exponent is below -4 or at least 9.
pub fn format_sig9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    // rounding to 9 digits may bump the exponent, so read it back
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn records_to_csv(records: &[SweepRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            format_sig9(r.t),
            format_sig9(r.nh),
            format_sig9(r.metric),
            r.regime,
            format_sig9(r.classical_bound),
            r.witnessed,
            r.scenario,
            r.kind,
            r.mode,
        ));
    }
    out
}

pub fn records_to_json(records: &[SweepRecord]) -> String {
    let mut s = serde_json::to_string_pretty(records).expect("records serialize");
    s.push('\n');
    s
}

/// Writes to `path`, or to standard output when `path` is `None`.
pub fn write_records(records: &[SweepRecord], path: Option<&Path>, format: OutputFormat) -> Result<()> {
    let text = match format {
        OutputFormat::Csv => records_to_csv(records),
        OutputFormat::Json => records_to_json(records),
    };
    match path {
        Some(p) => fs::write(p, text).map_err(|source| Error::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| Error::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

/// Parses either output format; JSON is recognized by a leading `[`.
pub fn read_records(text: &str) -> Result<Vec<SweepRecord>> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        return serde_json::from_str(trimmed).map_err(|e| Error::Parse(format!("invalid JSON records: {e}")));
    }
    let mut lines = trimmed.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == CSV_HEADER => {}
        Some((_, header)) => {
            return Err(Error::Parse(format!(
                "unexpected CSV header `{}` (expected `{CSV_HEADER}`)",
                header.trim()
            )))
        }
        None => return Err(Error::Parse("empty input".into())),
    }
    let mut records = Vec::new();
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(Error::Parse(format!(
                "line {}: expected 9 fields, found {}",
                i + 1,
                fields.len()
            )));
        }
        let num = |k: usize| -> Result<f64> {
            fields[k]
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad number `{}`", i + 1, fields[k])))
        };
        let label = |e: Error| Error::Parse(format!("line {}: {}", i + 1, e));
        records.push(SweepRecord {
            t: num(0)?,
            nh: num(1)?,
            metric: num(2)?,
            regime: fields[3].parse().map_err(label)?,
            classical_bound: num(4)?,
            witnessed: fields[5]
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad flag `{}`", i + 1, fields[5])))?,
            scenario: fields[6].parse().map_err(label)?,
            kind: fields[7].parse().map_err(label)?,
            mode: fields[8].parse().map_err(label)?,
        });
    }
    Ok(records)
}
