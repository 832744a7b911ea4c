use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Writes to `path` through a sibling temp file and a rename, or to stdout.
pub fn emit(path: Option<&Path>, contents: &str) -> CliResult<()> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        return out
            .write_all(contents.as_bytes())
            .and_then(|_| out.flush())
            .map_err(|e| CliError::io("<stdout>", e));
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(contents.as_bytes())
        .and_then(|_| tmp.as_file().sync_all())
        .map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

/// Pretty JSON with a trailing newline. Unless `reproducible`, a
/// `generated_unix` timestamp is added to top-level objects.
pub fn json_document(mut doc: Value, reproducible: bool) -> String {
    if !reproducible {
        if let Value::Object(map) = &mut doc {
            let now = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
            map.insert("generated_unix".into(), Value::from(now));
        }
    }
    let mut s = serde_json::to_string_pretty(&doc).expect("json values serialize");
    s.push('\n');
    s
}

/// Builds CSV text from string records; fields are quoted only when needed.
pub struct CsvText(csv::Writer<Vec<u8>>);

impl Default for CsvText {
    fn default() -> Self {
        Self(csv::WriterBuilder::new().flexible(true).from_writer(Vec::new()))
    }
}

impl CsvText {
    pub fn record<I, T>(&mut self, fields: I)
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[u8]>,
    {
        self.0.write_record(fields).expect("writing to memory");
    }

    pub fn finish(self) -> String {
        String::from_utf8(self.0.into_inner().expect("writing to memory")).expect("csv output is utf-8")
    }
}

/// Shortest decimal text that parses back to the same double; exponent form
/// for very small or large magnitudes.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

/// Square matrix with an id header row and an id column.
pub fn matrix_csv(ids: &[String], values: &[f64]) -> CsvText {
    let m = ids.len();
    let mut w = CsvText::default();
    w.record(std::iter::once(String::from("id")).chain(ids.iter().cloned()));
    for (i, id) in ids.iter().enumerate() {
        w.record(std::iter::once(id.clone()).chain(values[i * m..(i + 1) * m].iter().map(|&v| num(v))));
    }
    w
}

pub fn matrix_rows(m: usize, values: &[f64]) -> Value {
    Value::from(values.chunks(m.max(1)).map(|r| r.to_vec()).collect::<Vec<_>>())
}
