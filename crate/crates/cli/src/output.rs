use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

pub struct Outcome {
    pub input: Value,
    pub result: Value,
    pub code: u8,
    pub seed: Option<u64>,
}

impl Outcome {
    pub fn new(input: Value, result: Value) -> Self {
        Self {
            input,
            result,
            code: 0,
            seed: None,
        }
    }

    pub fn exit(mut self, code: u8) -> Self {
        self.code = code;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn record(&self, command: &str, threads: usize, elapsed_ms: u128) -> Value {
        json!({
            "command": command,
            "normalized_input": self.input,
            "result": self.result,
            "provenance": {
                "seed": self.seed,
                "threads": threads,
                "version": env!("CARGO_PKG_VERSION"),
            },
            "elapsed_ms": elapsed_ms,
            "exit_code": self.code,
        })
    }
}

/// One line, written with a single call.
pub fn append_record(path: &Path, record: &Value) -> io::Result<()> {
    let mut line = serde_json::to_vec(record)?;
    line.push(b'\n');
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    f.write_all(&line)
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> csv::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn table(rows: &[Value]) -> Option<String> {
    let Value::Object(first) = rows.first()? else {
        return None;
    };
    let keys: Vec<&String> = first.keys().collect();
    let grid: Vec<Vec<String>> = rows
        .iter()
        .map(|r| keys.iter().map(|k| cell(&r[k.as_str()])).collect())
        .collect();
    let widths: Vec<usize> = keys
        .iter()
        .enumerate()
        .map(|(i, k)| grid.iter().map(|r| r[i].len()).chain([k.len()]).max().unwrap_or(0))
        .collect();
    let line = |cells: Vec<String>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = line(keys.iter().map(|k| k.to_string()).collect()) + "\n";
    for r in grid {
        out += &(line(r) + "\n");
    }
    Some(out)
}

/// Scalars as `key: value`, arrays of objects as aligned tables.
pub fn pretty(v: &Value) -> String {
    let Value::Object(map) = v else {
        return format!("{v}\n");
    };
    let mut head = String::new();
    let mut tables = String::new();
    for (k, val) in map {
        match val {
            Value::Array(items) if items.first().is_some_and(Value::is_object) => {
                tables += &format!("\n{k}:\n");
                tables += &table(items).unwrap_or_default();
            }
            _ => head += &format!("{k}: {}\n", cell(val)),
        }
    }
    head + &tables
}
