//! Signal, partition and grouping ingestion.
//!
//! CSV: one signal per row, first field is the id, no header. Complex rows
//! hold `re,im` pairs. Lines starting with `#` are ignored.
//!
//! JSON: `{"signals": [{"id": "A1", "values": [..]}]}`; complex values are
//! `[re, im]` pairs.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use peakjac::{AngularPartition, CoarseningMap, ComplexSignal, Signal, StatePartition};
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Homogeneous batch of signals with unique ids.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSet<S> {
    pub ids: Vec<String>,
    pub signals: Vec<S>,
    pub source: PathBuf,
}

impl<S> SignalSet<S> {
    pub fn len(&self) -> usize {
        self.signals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signals.is_empty()
    }
}

struct RawRow {
    id: String,
    values: Vec<f64>,
    row: usize,
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn parse_error(path: &Path, row: usize, column: Option<usize>, reason: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.display().to_string(),
        row,
        column,
        reason: reason.into(),
    }
}

fn finite(path: &Path, row: usize, column: usize, v: f64, text: &str) -> CliResult<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(parse_error(path, row, Some(column), format!("value '{text}' is not finite")))
    }
}

fn csv_rows(path: &Path, text: &str) -> CliResult<Vec<RawRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let row = e.position().map_or(0, |p| p.line() as usize);
            parse_error(path, row, None, e.to_string())
        })?;
        let row = record.position().map_or(rows.len() + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let id = record[0].to_string();
        if id.is_empty() {
            return Err(parse_error(path, row, Some(1), "empty id"));
        }
        let mut values = Vec::with_capacity(record.len() - 1);
        for (c, field) in record.iter().enumerate().skip(1) {
            let v: f64 = field
                .parse()
                .map_err(|_| parse_error(path, row, Some(c + 1), format!("'{field}' is not a number")))?;
            values.push(finite(path, row, c + 1, v, field)?);
        }
        rows.push(RawRow { id, values, row });
    }
    Ok(rows)
}

fn json_number(path: &Path, row: usize, column: usize, v: &Value) -> CliResult<f64> {
    let x = v
        .as_f64()
        .ok_or_else(|| parse_error(path, row, Some(column), format!("{v} is not a number")))?;
    finite(path, row, column, x, &v.to_string())
}

/// JSON rows; complex pairs are flattened to `re, im` so both formats share
/// the same validation.
fn json_rows(path: &Path, text: &str, complex: bool) -> CliResult<Vec<RawRow>> {
    let doc: Value = serde_json::from_str(text).map_err(|e| parse_error(path, e.line(), Some(e.column()), e.to_string()))?;
    let list = doc
        .get("signals")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_error(path, 1, None, "expected an object with a \"signals\" array"))?;
    let mut rows = Vec::with_capacity(list.len());
    for (idx, item) in list.iter().enumerate() {
        let row = idx + 1;
        let id = match item.get("id") {
            None => format!("A{row}"),
            Some(Value::String(s)) if !s.is_empty() => s.clone(),
            Some(other) => return Err(parse_error(path, row, None, format!("id {other} is not a nonempty string"))),
        };
        let raw = item
            .get("values")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_error(path, row, None, "missing \"values\" array"))?;
        let mut values = Vec::with_capacity(raw.len() * if complex { 2 } else { 1 });
        for (c, v) in raw.iter().enumerate() {
            if complex {
                match v.as_array().map(Vec::as_slice) {
                    Some([re, im]) => {
                        values.push(json_number(path, row, c + 1, re)?);
                        values.push(json_number(path, row, c + 1, im)?);
                    }
                    _ => return Err(parse_error(path, row, Some(c + 1), format!("{v} is not a [re, im] pair"))),
                }
            } else {
                values.push(json_number(path, row, c + 1, v)?);
            }
        }
        rows.push(RawRow { id, values, row });
    }
    Ok(rows)
}

fn load_rows(path: &Path, complex: bool) -> CliResult<Vec<RawRow>> {
    let text = read(path)?;
    let rows = if is_json(path) {
        json_rows(path, &text, complex)?
    } else {
        csv_rows(path, &text)?
    };
    let first = rows.first().ok_or_else(|| CliError::Empty {
        path: path.display().to_string(),
    })?;
    let width = first.values.len();
    let mut seen = HashSet::new();
    for r in &rows {
        if r.values.is_empty() {
            return Err(parse_error(path, r.row, None, format!("signal '{}' has no values", r.id)));
        }
        if r.values.len() != width {
            return Err(parse_error(
                path,
                r.row,
                None,
                format!("ragged row: {} values, expected {width}", r.values.len()),
            ));
        }
        if complex && width % 2 != 0 {
            return Err(parse_error(path, r.row, None, "complex rows need re,im pairs"));
        }
        if !seen.insert(r.id.as_str()) {
            return Err(parse_error(path, r.row, Some(1), format!("duplicate id '{}'", r.id)));
        }
    }
    Ok(rows)
}

/// Real signals from a CSV or `.json` file.
pub fn load_signals(path: &Path) -> CliResult<SignalSet<Signal>> {
    let rows = load_rows(path, false)?;
    let mut set = SignalSet {
        ids: Vec::with_capacity(rows.len()),
        signals: Vec::with_capacity(rows.len()),
        source: path.to_path_buf(),
    };
    for r in rows {
        set.signals.push(Signal::new(r.values)?.with_id(r.id.clone()));
        set.ids.push(r.id);
    }
    Ok(set)
}

/// Complex signals; CSV rows read `id,re1,im1,re2,im2,...`.
pub fn load_complex_signals(path: &Path) -> CliResult<SignalSet<ComplexSignal>> {
    let rows = load_rows(path, true)?;
    let mut set = SignalSet {
        ids: Vec::with_capacity(rows.len()),
        signals: Vec::with_capacity(rows.len()),
        source: path.to_path_buf(),
    };
    for r in rows {
        let z: Vec<Complex64> = r.values.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
        set.signals.push(ComplexSignal::new(z)?.with_id(r.id.clone()));
        set.ids.push(r.id);
    }
    Ok(set)
}

/// CSV form read back by [`load_signals`]; values use shortest round-trip
/// formatting so a load/emit cycle is lossless.
pub fn signals_to_csv(set: &SignalSet<Signal>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for (id, s) in set.ids.iter().zip(&set.signals) {
        let mut record = vec![id.clone()];
        record.extend(s.values().iter().map(|&v| crate::output::num(v)));
        w.write_record(&record).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is utf-8")
}

/// Inline JSON or a path to a JSON file.
fn json_argument(arg: &str) -> CliResult<(String, String)> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(("<inline>".into(), arg.to_string()));
    }
    let path = Path::new(arg);
    Ok((path.display().to_string(), read(path)?))
}

pub fn load_partition(path: &Path) -> CliResult<StatePartition> {
    Ok(StatePartition::from_json(&read(path)?)?)
}

pub fn load_sectors(arg: &str) -> CliResult<AngularPartition> {
    let (_, text) = json_argument(arg)?;
    Ok(AngularPartition::from_json(&text)?)
}

/// `{"gain": [3, 4], "loss": ["small loss", "large loss"], ...}`: group name to
/// state indices or state names (names need a partition).
pub fn load_groups(arg: &str, k: usize, partition: Option<&StatePartition>) -> CliResult<CoarseningMap> {
    let (origin, text) = json_argument(arg)?;
    let bad = |reason: String| CliError::Usage(format!("--groups ({origin}): {reason}"));
    let doc: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| bad("expected an object mapping group names to states".into()))?;
    let mut names = Vec::with_capacity(obj.len());
    let mut groups = Vec::with_capacity(obj.len());
    for (name, members) in obj {
        let list = members
            .as_array()
            .ok_or_else(|| bad(format!("group '{name}' is not a list")))?;
        let mut idx = Vec::with_capacity(list.len());
        for m in list {
            let state = match m {
                Value::Number(_) => m
                    .as_u64()
                    .map(|v| v as usize)
                    .ok_or_else(|| bad(format!("group '{name}': {m} is not a state index")))?,
                Value::String(s) => partition
                    .and_then(|p| p.index_of(s))
                    .ok_or_else(|| bad(format!("group '{name}': unknown state '{s}'")))?,
                other => return Err(bad(format!("group '{name}': {other} is not a state"))),
            };
            idx.push(state);
        }
        names.push(name.clone());
        groups.push(idx);
    }
    Ok(CoarseningMap::named(k, &groups, names)?)
}
