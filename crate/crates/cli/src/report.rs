//! Report records and their text rendering.

use std::fmt::Write as _;

use dbr_core::characterize::{Classification, Verdict};
use dbr_core::graph::{bipartition, girth};
use dbr_core::{distance_data, Graph, SpectralDecomposition};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideSummary {
    pub side_b: Vec<usize>,
    pub side_c: Vec<usize>,
    pub k: Option<usize>,
    pub ell: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub n: usize,
    pub edges: usize,
    pub degrees: Vec<usize>,
    pub bipartition: Option<SideSummary>,
    pub girth: Option<usize>,
    pub diameter: usize,
}

impl GraphSummary {
    pub fn new(g: &Graph) -> Self {
        GraphSummary {
            n: g.n(),
            edges: g.edge_count(),
            degrees: g.degrees(),
            bipartition: bipartition(g).ok().map(|p| SideSummary {
                side_b: p.side_b().to_vec(),
                side_c: p.side_c().to_vec(),
                k: p.k(),
                ell: p.ell(),
            }),
            girth: girth(g),
            diameter: distance_data(g).diameter(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub eigenvalue: f64,
    pub multiplicity: usize,
}

pub fn spectrum_table(dec: &SpectralDecomposition) -> Vec<SpectrumEntry> {
    dec.eigs()
        .iter()
        .zip(dec.mult())
        .map(|(&eigenvalue, &multiplicity)| SpectrumEntry {
            eigenvalue,
            multiplicity,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub kind: String,
    pub message: String,
}

/// Everything a command prints. Absent sections are omitted from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<SpectrumEntry>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorRecord>,
}

impl Report {
    pub fn new(command: &str, tol: f64) -> Self {
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            tol,
            graph: None,
            spectrum: None,
            verdicts: Vec::new(),
            classification: None,
            details: None,
            error: None,
        }
    }

    /// JSON with every float rounded to 12 significant digits.
    pub fn to_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        round_floats(&mut value);
        serde_json::to_string_pretty(&value).expect("value serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error: {}: {}", e.kind, e.message);
            return out;
        }
        if self.command == "classify" {
            if let Some(c) = self.classification {
                let _ = writeln!(out, "{c}");
            }
            return out;
        }
        if let Some(g) = &self.graph {
            let (lo, hi) = g
                .degrees
                .iter()
                .fold((usize::MAX, 0), |(lo, hi), &d| (lo.min(d), hi.max(d)));
            let _ = write!(out, "graph: n = {}, m = {}, degrees {lo}..{hi}", g.n, g.edges);
            match &g.bipartition {
                Some(p) => {
                    let _ = write!(out, ", bipartite {} + {}", p.side_b.len(), p.side_c.len());
                    if let (Some(k), Some(l)) = (p.k, p.ell) {
                        let _ = write!(out, " ({k}, {l})-semiregular");
                    }
                }
                None => out.push_str(", not bipartite"),
            }
            match g.girth {
                Some(x) => {
                    let _ = write!(out, ", girth {x}");
                }
                None => out.push_str(", acyclic"),
            }
            let _ = writeln!(out, ", diameter {}", g.diameter);
        }
        if let Some(spectrum) = &self.spectrum {
            out.push_str("spectrum:\n");
            for e in spectrum {
                let _ = writeln!(out, "  {:>16}  ×{}", round_sig(e.eigenvalue), e.multiplicity);
            }
        }
        if !self.verdicts.is_empty() {
            out.push_str("verdicts:\n");
            for v in &self.verdicts {
                let _ = write!(out, "  {:<22} {:<10} {}", v.theorem.name(), v.subject, v.outcome);
                if let Some(r) = v.residual {
                    let _ = write!(out, "  residual {:e}", round_sig(r));
                }
                if let Some(note) = &v.note {
                    let _ = write!(out, "  ({note})");
                }
                out.push('\n');
            }
        }
        if let Some(details) = &self.details {
            let mut d = details.clone();
            round_floats(&mut d);
            if let Value::Object(map) = d {
                for (key, value) in map {
                    let _ = writeln!(out, "{key}: {value}");
                }
            }
        }
        if let Some(c) = self.classification {
            let _ = writeln!(out, "classification: {c}");
        }
        out
    }
}

pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().and_then(|x| serde_json::Number::from_f64(round_sig(x))) {
                *n = x;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(round_sig(10.0 / 3.0), 3.33333333333);
        assert_eq!(round_sig(-2.0f64.sqrt() * 1e-9), -1.41421356237e-9);
        assert_eq!(round_sig(0.0), 0.0);
        let mut v = serde_json::json!({"a": [1.0000000000001, 3], "b": {"c": 0.1 + 0.2}});
        round_floats(&mut v);
        assert_eq!(v.to_string(), r#"{"a":[1.0,3],"b":{"c":0.3}}"#);
    }
}
