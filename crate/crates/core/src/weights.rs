// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Label-pair weights and the distance penalty.
//!
//! Weights are plain `f64` values. `f64::NEG_INFINITY` marks a forbidden
//! pair; `f64::INFINITY` is only accepted as the penalty, where it forbids
//! skipping vertices altogether.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::tree::LabeledTree;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeightsError {
    #[error("line {line}: malformed line: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: penalty must be non-negative, got {value}")]
    NegativePenalty { line: usize, value: f64 },
    #[error("line {line}: +inf is only allowed as the penalty")]
    PositiveInfinity { line: usize },
}

/// Vertex and edge weight tables plus the skip penalty.
///
/// Lookups are by ordered pair: the first label belongs to the first tree.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightScheme {
    vertex_pairs: BTreeMap<(String, String), f64>,
    vertex_default: f64,
    edge_pairs: BTreeMap<(String, String), f64>,
    edge_default: f64,
    penalty: f64,
}

impl Default for WeightScheme {
    fn default() -> Self {
        Self {
            vertex_pairs: BTreeMap::new(),
            vertex_default: f64::NEG_INFINITY,
            edge_pairs: BTreeMap::new(),
            edge_default: 0.0,
            penalty: 0.0,
        }
    }
}

fn parse_value(token: &str, line: usize) -> Result<f64, WeightsError> {
    match token {
        "inf" | "+inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => {
            let v: f64 = token.parse().map_err(|_| WeightsError::Malformed {
                line,
                reason: format!("`{token}` is not a number"),
            })?;
            if v.is_nan() || v.is_infinite() {
                return Err(WeightsError::Malformed {
                    line,
                    reason: format!("`{token}` is not a finite number"),
                });
            }
            Ok(v)
        }
    }
}

fn finite_pair_weight(token: &str, line: usize) -> Result<f64, WeightsError> {
    let v = parse_value(token, line)?;
    if v == f64::INFINITY {
        return Err(WeightsError::PositiveInfinity { line });
    }
    Ok(v)
}

fn format_value(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        // shortest representation that round-trips
        format!("{v:?}")
    }
}

impl WeightScheme {
    /// Scheme with all defaults: every vertex pair forbidden, edge pairs 0,
    /// penalty 0.
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertex_pair(mut self, a: &str, b: &str, w: f64) -> Self {
        assert!(w != f64::INFINITY, "+inf is not a valid pair weight");
        self.vertex_pairs.insert((a.into(), b.into()), w);
        self
    }

    pub fn with_edge_pair(mut self, a: &str, b: &str, w: f64) -> Self {
        assert!(w != f64::INFINITY, "+inf is not a valid pair weight");
        self.edge_pairs.insert((a.into(), b.into()), w);
        self
    }

    pub fn with_vertex_default(mut self, w: f64) -> Self {
        assert!(w != f64::INFINITY, "+inf is not a valid pair weight");
        self.vertex_default = w;
        self
    }

    pub fn with_edge_default(mut self, w: f64) -> Self {
        assert!(w != f64::INFINITY, "+inf is not a valid pair weight");
        self.edge_default = w;
        self
    }

    pub fn with_penalty(mut self, p: f64) -> Self {
        assert!(p >= 0.0, "penalty must be non-negative");
        self.penalty = p;
        self
    }

    /// Parses `vpair`, `epair`, `vdefault`, `edefault` and `penalty` lines.
    /// Later lines override earlier ones.
    pub fn parse(text: &str) -> Result<Self, WeightsError> {
        let mut scheme = Self::default();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            match fields.as_slice() {
                ["vpair", a, b, w] => {
                    let w = finite_pair_weight(w, line)?;
                    scheme
                        .vertex_pairs
                        .insert((a.to_string(), b.to_string()), w);
                }
                ["epair", a, b, w] => {
                    let w = finite_pair_weight(w, line)?;
                    scheme.edge_pairs.insert((a.to_string(), b.to_string()), w);
                }
                ["vdefault", w] => scheme.vertex_default = finite_pair_weight(w, line)?,
                ["edefault", w] => scheme.edge_default = finite_pair_weight(w, line)?,
                ["penalty", w] => {
                    let p = parse_value(w, line)?;
                    if p < 0.0 {
                        return Err(WeightsError::NegativePenalty { line, value: p });
                    }
                    scheme.penalty = p;
                }
                [key, ..] => {
                    return Err(WeightsError::Malformed {
                        line,
                        reason: format!("unexpected field count or keyword `{key}`"),
                    })
                }
                [] => unreachable!(),
            }
        }
        Ok(scheme)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "vdefault {}", format_value(self.vertex_default));
        let _ = writeln!(out, "edefault {}", format_value(self.edge_default));
        let _ = writeln!(out, "penalty {}", format_value(self.penalty));
        for ((a, b), w) in &self.vertex_pairs {
            let _ = writeln!(out, "vpair {a} {b} {}", format_value(*w));
        }
        for ((a, b), w) in &self.edge_pairs {
            let _ = writeln!(out, "epair {a} {b} {}", format_value(*w));
        }
        out
    }

    pub fn vertex_weight(&self, a: &str, b: &str) -> f64 {
        lookup(&self.vertex_pairs, a, b).unwrap_or(self.vertex_default)
    }

    pub fn edge_weight(&self, a: &str, b: &str) -> f64 {
        lookup(&self.edge_pairs, a, b).unwrap_or(self.edge_default)
    }

    pub fn penalty(&self) -> f64 {
        self.penalty
    }

    /// Skipping is forbidden; the problem reduces to maximum common subtree.
    pub fn forbids_skips(&self) -> bool {
        self.penalty == f64::INFINITY
    }

    pub fn vertex_default(&self) -> f64 {
        self.vertex_default
    }

    pub fn edge_default(&self) -> f64 {
        self.edge_default
    }
}

fn lookup(map: &BTreeMap<(String, String), f64>, a: &str, b: &str) -> Option<f64> {
    // BTreeMap<(String, String)> cannot be queried by (&str, &str) directly
    map.range((a.to_string(), b.to_string())..)
        .next()
        .filter(|((x, y), _)| x == a && y == b)
        .map(|(_, &w)| w)
}

/// Label-class lookup tables for one pair of trees, so the solvers never
/// touch strings in their inner loops.
#[derive(Debug, Clone)]
pub(crate) struct PairScorer {
    vertex_class1: Vec<usize>,
    vertex_class2: Vec<usize>,
    vertex_table: Vec<f64>,
    vertex_cols: usize,
    edge_class1: Vec<usize>,
    edge_class2: Vec<usize>,
    edge_table: Vec<f64>,
    edge_cols: usize,
    pub penalty: f64,
    pub forbids_skips: bool,
}

fn classes<'a>(labels: impl Iterator<Item = &'a str>) -> (Vec<usize>, Vec<&'a str>) {
    let mut seen: HashMap<&str, usize> = HashMap::new();
    let mut distinct = Vec::new();
    let class = labels
        .map(|l| {
            *seen.entry(l).or_insert_with(|| {
                distinct.push(l);
                distinct.len() - 1
            })
        })
        .collect();
    (class, distinct)
}

impl PairScorer {
    pub fn new(t1: &LabeledTree, t2: &LabeledTree, scheme: &WeightScheme) -> Self {
        let (vertex_class1, vl1) = classes(t1.labels().iter().map(String::as_str));
        let (vertex_class2, vl2) = classes(t2.labels().iter().map(String::as_str));
        let vertex_table = vl1
            .iter()
            .flat_map(|a| vl2.iter().map(|b| scheme.vertex_weight(a, b)))
            .collect();
        let (edge_class1, el1) = classes(t1.edges().iter().map(|e| e.label.as_str()));
        let (edge_class2, el2) = classes(t2.edges().iter().map(|e| e.label.as_str()));
        let edge_table = el1
            .iter()
            .flat_map(|a| el2.iter().map(|b| scheme.edge_weight(a, b)))
            .collect();
        Self {
            vertex_class1,
            vertex_class2,
            vertex_table,
            vertex_cols: vl2.len(),
            edge_class1,
            edge_class2,
            edge_table,
            edge_cols: el2.len(),
            penalty: scheme.penalty(),
            forbids_skips: scheme.forbids_skips(),
        }
    }

    #[inline]
    pub fn vertex(&self, u: usize, v: usize) -> f64 {
        self.vertex_table[self.vertex_class1[u] * self.vertex_cols + self.vertex_class2[v]]
    }

    /// Weight of edge `e1` of the first tree against edge `e2` of the second.
    #[inline]
    pub fn edge(&self, e1: usize, e2: usize) -> f64 {
        self.edge_table[self.edge_class1[e1] * self.edge_cols + self.edge_class2[e2]]
    }
}
