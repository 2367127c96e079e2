//! Report rendering. Floats are always written with 17 significant digits
//! so that every emitted value parses back to the same `f64`.

use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

struct SigFormatter;

impl Formatter for SigFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt_float(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

/// Compact JSON with 17-digit floats.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFormatter);
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) if n.is_f64() => fmt_float(n.as_f64().unwrap_or(f64::NAN)),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => to_json(other),
    }
}

fn rows(v: &Value) -> Vec<&serde_json::Map<String, Value>> {
    match v {
        Value::Array(items) => items.iter().filter_map(Value::as_object).collect(),
        Value::Object(m) => vec![m],
        _ => Vec::new(),
    }
}

pub fn to_csv(v: &Value) -> String {
    let rows = rows(v);
    let mut w = csv::Writer::from_writer(Vec::new());
    if let Some(first) = rows.first() {
        let header: Vec<&str> = first.keys().map(String::as_str).collect();
        w.write_record(&header).expect("in-memory write");
        for r in &rows {
            w.write_record(header.iter().map(|k| r.get(*k).map(cell).unwrap_or_default())).expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv writes UTF-8")
}

pub fn to_human(v: &Value) -> String {
    match v {
        Value::Object(m) => {
            let width = m.keys().map(String::len).max().unwrap_or(0);
            m.iter().map(|(k, v)| format!("{k:<width$}  {}\n", cell(v))).collect()
        }
        Value::Array(_) => {
            let rows = rows(v);
            let Some(first) = rows.first() else { return String::new() };
            let header: Vec<&String> = first.keys().collect();
            let table: Vec<Vec<String>> =
                rows.iter().map(|r| header.iter().map(|k| r.get(*k).map(cell).unwrap_or_default()).collect()).collect();
            let widths: Vec<usize> = header
                .iter()
                .enumerate()
                .map(|(i, h)| table.iter().map(|r| r[i].len()).chain([h.len()]).max().unwrap_or(0))
                .collect();
            let line = |cells: Vec<&str>| {
                let s: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                s.join("  ").trim_end().to_string() + "\n"
            };
            let mut out = line(header.iter().map(|h| h.as_str()).collect());
            for r in &table {
                out += &line(r.iter().map(String::as_str).collect());
            }
            out
        }
        other => cell(other) + "\n",
    }
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => to_json(v) + "\n",
        Format::Csv => to_csv(v),
        Format::Human => to_human(v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, f64::MIN_POSITIVE, 1.0 - f64::EPSILON] {
            let s = to_json(&json!({ "x": x }));
            let back: Value = serde_json::from_str(&s).unwrap();
            assert_eq!(back["x"].as_f64().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(to_json(&json!([1, 0.5])), "[1,5.0000000000000000e-1]");
    }

    #[test]
    fn csv_and_human_tables() {
        let v = json!([{ "k": 0, "x": 0.5, "ok": true }, { "k": 1, "x": -1.0, "ok": false }]);
        assert_eq!(to_csv(&v), "k,x,ok\n0,5.0000000000000000e-1,true\n1,-1.0000000000000000e0,false\n");
        let h = to_human(&v);
        assert_eq!(h.lines().count(), 3);
        assert!(h.starts_with("k  x"));
        let o = to_human(&json!({ "alpha": 0.5, "model": "m" }));
        assert!(o.contains("model  m"));
    }
}
