//! CSV and JSON writers. Every float is written with 17 significant digits.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub const NAMES: &'static [&'static str] = &["csv", "json", "svg"];

    pub fn parse(s: &str) -> CliResult<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(CliError::usage(format!("unknown output format {other:?} (csv|json|svg)"))),
        }
    }
}

/// Result of one command: scalar summary plus optional per-step rows.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Output {
    pub summary: Map<String, Value>,
    pub rows: Vec<Map<String, Value>>,
}

impl Output {
    pub fn put(&mut self, key: &str, v: impl Into<Value>) {
        self.summary.insert(key.to_string(), v.into());
    }

    /// Insert a serializable value under `key`.
    pub fn put_ser<T: Serialize>(&mut self, key: &str, v: &T) {
        self.summary.insert(key.to_string(), to_value(v));
    }

    /// Merge the fields of a serializable struct into the summary.
    pub fn merge_ser<T: Serialize>(&mut self, v: &T) {
        if let Value::Object(m) = to_value(v) {
            self.summary.extend(m);
        }
    }

    pub fn to_json_value(&self) -> Value {
        let mut m = self.summary.clone();
        if !self.rows.is_empty() {
            m.insert("rows".into(), Value::Array(self.rows.iter().cloned().map(Value::Object).collect()));
        }
        Value::Object(m)
    }
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data always serializes")
}

/// x.xxxxxxxxxxxxxxxxe±k; non-finite values become NaN / inf / -inf.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

pub fn fmt_scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) if !n.is_f64() => i.to_string(),
            (_, Some(u)) if !n.is_f64() => u.to_string(),
            _ => fmt_f64(n.as_f64().unwrap_or(f64::NAN)),
        },
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Nested objects become dotted keys, arrays get numeric suffixes.
pub fn flatten(v: &Value, prefix: &str, out: &mut Vec<(String, Value)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(x, &join(k), out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(x, &join(&i.to_string()), out);
            }
        }
        scalar => out.push((prefix.to_string(), scalar.clone())),
    }
}

pub fn flat_map(m: &Map<String, Value>) -> Vec<(String, Value)> {
    let mut out = Vec::new();
    flatten(&Value::Object(m.clone()), "", &mut out);
    out
}

/// Rows sharing a column set; missing cells are left empty.
pub fn write_table<W: Write>(w: W, columns: &[String], rows: &[Vec<(String, Value)>]) -> CliResult<()> {
    let mut csv = csv::Writer::from_writer(w);
    let io = |e: csv::Error| CliError::Io(e.to_string());
    csv.write_record(columns).map_err(io)?;
    for r in rows {
        let cells = columns.iter().map(|c| r.iter().find(|(k, _)| k == c).map(|(_, v)| fmt_scalar(v)).unwrap_or_default());
        csv.write_record(cells).map_err(io)?;
    }
    csv.flush()?;
    Ok(())
}

/// Column order: first-seen across rows.
pub fn columns_of(rows: &[Vec<(String, Value)>]) -> Vec<String> {
    let mut cols: Vec<String> = Vec::new();
    for r in rows {
        for (k, _) in r {
            if !cols.contains(k) {
                cols.push(k.clone());
            }
        }
    }
    cols
}

pub fn write_output_csv<W: Write>(w: W, out: &Output) -> CliResult<()> {
    let rows: Vec<Vec<(String, Value)>> =
        if out.rows.is_empty() { vec![flat_map(&out.summary)] } else { out.rows.iter().map(flat_map).collect() };
    write_table(w, &columns_of(&rows), &rows)
}

struct SigFigs<'a>(PrettyFormatter<'a>);

impl Formatter for SigFigs<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt_f64(value).as_bytes())
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty JSON with 17-significant-digit floats; non-finite floats become null.
pub fn write_json<W: Write>(mut w: W, v: &Value) -> CliResult<()> {
    let mut ser = serde_json::Serializer::with_formatter(&mut w, SigFigs(PrettyFormatter::new()));
    v.serialize(&mut ser).map_err(|e| CliError::Io(e.to_string()))?;
    w.write_all(b"\n")?;
    Ok(())
}
