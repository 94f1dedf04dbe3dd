use std::collections::BTreeMap;
use std::io::Write;

use serde::ser::{Serialize, Serializer};
use serde_json::Value;

use crate::failure::CliResult;

/// Serializes objects with their keys in sorted order whatever map type
/// `serde_json` was built with.
struct Sorted<'a>(&'a Value);

impl Serialize for Sorted<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Value::Object(map) => {
                let sorted: BTreeMap<&String, Sorted> = map.iter().map(|(k, v)| (k, Sorted(v))).collect();
                sorted.serialize(s)
            }
            Value::Array(items) => s.collect_seq(items.iter().map(Sorted)),
            other => other.serialize(s),
        }
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn emit_json(doc: &Value) -> CliResult {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, &Sorted(doc)).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

pub fn emit_csv(header: &[&str], rows: &[Vec<String>]) -> CliResult {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Shortest round-tripping decimal form.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}
