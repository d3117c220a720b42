//! CSV and JSON-lines emission.
//!
//! Both formats carry the same column names. CSV output starts with one `#`
//! comment line of `key=value` pairs, then the column header, then the data.
//! Floats are written with 17 significant digits so that re-reading a file
//! reproduces every value bit for bit.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::config::{Format, OutputSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Null,
    Bool(bool),
    UInt(u64),
    Float(f64),
    Text(String),
}

impl Field {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Field::Float(x) => Some(*x),
            Field::UInt(n) => Some(*n as f64),
            Field::Text(s) => parse_special(s),
            _ => None,
        }
    }

    pub fn as_u64(&self) -> Option<u64> {
        match self {
            Field::UInt(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Field::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Field::Text(s) => Some(s),
            _ => None,
        }
    }

    fn to_text(&self) -> String {
        match self {
            Field::Null => String::new(),
            Field::Bool(b) => b.to_string(),
            Field::UInt(n) => n.to_string(),
            Field::Float(x) => format_float(*x),
            Field::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Field {
    fn from(x: f64) -> Self {
        Field::Float(x)
    }
}

impl From<u64> for Field {
    fn from(n: u64) -> Self {
        Field::UInt(n)
    }
}

impl From<usize> for Field {
    fn from(n: usize) -> Self {
        Field::UInt(n as u64)
    }
}

impl From<bool> for Field {
    fn from(b: bool) -> Self {
        Field::Bool(b)
    }
}

impl From<&str> for Field {
    fn from(s: &str) -> Self {
        Field::Text(s.to_string())
    }
}

impl From<String> for Field {
    fn from(s: String) -> Self {
        Field::Text(s)
    }
}

impl<T: Into<Field>> From<Option<T>> for Field {
    fn from(v: Option<T>) -> Self {
        v.map_or(Field::Null, Into::into)
    }
}

/// `{:.16e}` for finite values, `NaN` / `inf` / `-inf` otherwise.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

fn parse_special(s: &str) -> Option<f64> {
    match s {
        "NaN" => Some(f64::NAN),
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => None,
    }
}

/// Rows of named fields plus a `key=value` header.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new(header: Vec<(String, String)>, columns: Vec<String>) -> Self {
        Self {
            header,
            columns,
            rows: Vec::new(),
        }
    }

    /// Build a table from records whose field sets may differ; the columns are
    /// the union in first-seen order and missing fields are null.
    pub fn from_records(header: Vec<(String, String)>, records: &[Vec<(String, Field)>]) -> Self {
        let mut columns: Vec<String> = Vec::new();
        for r in records {
            for (k, _) in r {
                if !columns.contains(k) {
                    columns.push(k.clone());
                }
            }
        }
        let rows = records
            .iter()
            .map(|r| {
                columns
                    .iter()
                    .map(|c| r.iter().find(|(k, _)| k == c).map_or(Field::Null, |(_, v)| v.clone()))
                    .collect()
            })
            .collect();
        Self { header, columns, rows }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match the header");
        self.rows.push(row);
    }

    /// Non-null `(column, field)` pairs of row `i`.
    pub fn record(&self, i: usize) -> Vec<(String, Field)> {
        self.columns
            .iter()
            .zip(&self.rows[i])
            .filter(|(_, f)| **f != Field::Null)
            .map(|(c, f)| (c.clone(), f.clone()))
            .collect()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let comment: Vec<String> = self.header.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(out, "# {}", comment.join(" ")).unwrap();
        {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut out);
            w.write_record(&self.columns).unwrap();
            for row in &self.rows {
                w.write_record(row.iter().map(Field::to_text)).unwrap();
            }
            w.flush().unwrap();
        }
        out
    }

    /// One JSON object per row; null fields are left out.
    pub fn to_jsonl(&self) -> Vec<u8> {
        let mut out = String::new();
        for row in &self.rows {
            out.push('{');
            let mut first = true;
            for (c, f) in self.columns.iter().zip(row) {
                let v = match f {
                    Field::Null => continue,
                    Field::Bool(b) => b.to_string(),
                    Field::UInt(n) => n.to_string(),
                    Field::Float(x) if x.is_finite() => format_float(*x),
                    Field::Float(x) => serde_json::to_string(&format_float(*x)).unwrap(),
                    Field::Text(s) => serde_json::to_string(s).unwrap(),
                };
                if !first {
                    out.push(',');
                }
                first = false;
                write!(out, "{}:{v}", serde_json::to_string(c).unwrap()).unwrap();
            }
            out.push_str("}\n");
        }
        out.into_bytes()
    }

    pub fn to_bytes(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Jsonl => self.to_jsonl(),
        }
    }
}

fn infer(cell: &str) -> Field {
    if cell.is_empty() {
        Field::Null
    } else if cell == "true" || cell == "false" {
        Field::Bool(cell == "true")
    } else if let Ok(n) = cell.parse::<u64>() {
        Field::UInt(n)
    } else if let Some(x) = parse_special(cell) {
        Field::Float(x)
    } else if cell.contains(['e', 'E', '.']) {
        cell.parse::<f64>().map_or_else(|_| Field::Text(cell.to_string()), Field::Float)
    } else {
        Field::Text(cell.to_string())
    }
}

/// Parse CSV written by [`Table::to_csv`].
pub fn read_csv(text: &str) -> Result<Table> {
    let bad = |m: String| Error::config("csv", m);
    let (first, body) = text.split_once('\n').unwrap_or((text, ""));
    let comment = first.strip_prefix("# ").or_else(|| first.strip_prefix('#')).ok_or_else(|| bad("missing `#` header line".into()))?;
    let header = comment
        .split_whitespace()
        .map(|kv| kv.split_once('=').map(|(k, v)| (k.to_string(), v.to_string())).ok_or_else(|| bad(format!("bad header entry `{kv}`"))))
        .collect::<Result<Vec<_>>>()?;
    let mut r = csv::ReaderBuilder::new().from_reader(body.as_bytes());
    let columns: Vec<String> = r.headers().map_err(|e| bad(e.to_string()))?.iter().map(String::from).collect();
    let mut table = Table::new(header, columns);
    for rec in r.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        table.push(rec.iter().map(infer).collect());
    }
    Ok(table)
}

/// Parse JSON lines written by [`Table::to_jsonl`].
pub fn read_jsonl(text: &str) -> Result<Table> {
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let v: serde_json::Value =
            serde_json::from_str(line).map_err(|e| Error::config(format!("jsonl line {}", i + 1), e.to_string()))?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::config(format!("jsonl line {}", i + 1), "expected an object"))?;
        let rec = obj
            .iter()
            .map(|(k, v)| {
                let f = match v {
                    serde_json::Value::Null => Field::Null,
                    serde_json::Value::Bool(b) => Field::Bool(*b),
                    serde_json::Value::Number(n) => match n.as_u64() {
                        Some(u) => Field::UInt(u),
                        None => Field::Float(n.as_f64().unwrap_or(f64::NAN)),
                    },
                    serde_json::Value::String(s) => Field::Text(s.clone()),
                    other => Field::Text(other.to_string()),
                };
                (k.clone(), f)
            })
            .collect::<Vec<_>>();
        records.push(rec);
    }
    Ok(Table::from_records(Vec::new(), &records))
}

/// Write `bytes` to `path` through a temporary file in the same directory,
/// so readers never see a partial file. An existing file is replaced only
/// when `overwrite` is set.
pub fn write_atomic(path: &Path, bytes: &[u8], overwrite: bool) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(tmp.path(), e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(tmp.path(), e))?;
    let persisted = if overwrite { tmp.persist(path) } else { tmp.persist_noclobber(path) };
    persisted.map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Emit `table` to the configured file, or to stdout when no path is set.
pub fn write_output(table: &Table, output: &OutputSpec) -> Result<()> {
    let bytes = table.to_bytes(output.format);
    match output.resolved_path() {
        Some(p) => write_atomic(&p, &bytes, output.overwrite),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes).and_then(|_| out.flush()).map_err(|e| Error::io("<stdout>", e))
        }
    }
}
