//! Report assembly and rendering.

use std::time::Duration;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use plumbing_core::lattice::fmt_rational;
use plumbing_core::relative::DominanceReport;
use plumbing_core::{ChernClass, Cycle, Lattice};
use serde_json::{json, Map, Value};

pub const REPORT_FORMAT: &str = "plumb-report/1";

/// A finished command: its report and whether a predicate came out false.
#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub arguments: Map<String, Value>,
    pub input: Option<(String, String)>,
    pub results: Value,
    pub explored: Option<u64>,
    pub negative: bool,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report { command, arguments: Map::new(), input: None, results: Value::Null, explored: None, negative: false }
    }

    pub fn arg(&mut self, key: &str, value: impl Into<Value>) {
        self.arguments.insert(key.into(), value.into());
    }

    pub fn to_value(&self, elapsed: Option<Duration>) -> Value {
        let mut doc = Map::new();
        doc.insert("format".into(), REPORT_FORMAT.into());
        doc.insert("command".into(), json!({ "name": self.command, "arguments": self.arguments }));
        if let Some((source, digest)) = &self.input {
            doc.insert("input".into(), json!({ "graph": source, "sha256": digest }));
        }
        doc.insert("results".into(), self.results.clone());
        let mut diag = Map::new();
        if let Some(n) = self.explored {
            diag.insert("explored".into(), n.into());
        }
        if let Some(t) = elapsed {
            let ms = (t.as_secs_f64() * 1e6).round() / 1e3;
            diag.insert("elapsed_ms".into(), json!(ms));
        }
        doc.insert("diagnostics".into(), Value::Object(diag));
        Value::Object(doc)
    }
}

pub fn render_json(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
    s.push('\n');
    s
}

/// `path: value` lines, one per scalar leaf.
pub fn render_text(doc: &Value) -> String {
    let mut out = String::new();
    flatten(doc, String::new(), &mut out);
    out
}

fn flatten(v: &Value, path: String, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                flatten(child, p, out);
            }
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten(child, format!("{path}[{i}]"), out);
            }
        }
        Value::String(s) => out.push_str(&format!("{path}: {s}\n")),
        other => out.push_str(&format!("{path}: {other}\n")),
    }
}

/// Every vertex with its coefficient, in file order.
pub fn cycle(lat: &Lattice, c: &Cycle) -> Value {
    let map: Map<String, Value> = lat.ids().iter().cloned().zip(c.coeffs().iter().map(|&x| x.into())).collect();
    Value::Object(map)
}

pub fn opt_cycle(lat: &Lattice, c: Option<&Cycle>) -> Value {
    c.map_or(Value::Null, |c| cycle(lat, c))
}

pub fn class(lat: &Lattice, c: &ChernClass) -> Value {
    let e: Map<String, Value> =
        lat.ids().iter().cloned().zip(c.e_coords().iter().map(|q| fmt_rational(q).into())).collect();
    let estar: Map<String, Value> =
        lat.ids().iter().cloned().zip(c.estar_coords().into_iter().map(Value::from)).collect();
    json!({ "e": e, "estar": estar })
}

pub fn integer(n: &BigInt) -> Value {
    n.to_i64().map_or_else(|| Value::from(n.to_string()), Value::from)
}

pub fn dominance(lat: &Lattice, d: &DominanceReport) -> Value {
    json!({
        "dominant": d.dominant,
        "margin": d.margin,
        "witness": opt_cycle(lat, d.witness.as_ref()),
    })
}

pub fn ids(lat: &Lattice, set: &plumbing_core::VertexSet) -> Value {
    set.iter().map(|v| Value::from(lat.ids()[v].clone())).collect()
}
