//! File formats.
//!
//! Distance matrices:
//!
//! ```json
//! {"points": ["a", "b", "w"], "omega": "w",
//!  "matrix": [[0, 1, "inf"], [1, 0, "inf"], ["inf", "inf", 0]]}
//! ```
//!
//! Curves: `{"R": 1.0, "samples": [[a, b], ...]}`, with `"kind": "circle"` for
//! halfplane curves and an optional `"t"` array of parameters.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metric::{ExtendedMetricSpace, MetricError};
use crate::planar::Vec2;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("matrix entry ({i}, {j}) is the string {value:?}; only \"inf\" is accepted")]
    BadEntry { i: usize, j: usize, value: String },
    #[error("remote point {0:?} is not among the points")]
    UnknownOmega(String),
    #[error("curve kind {0:?} does not match the expected {1:?}")]
    WrongKind(String, &'static str),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixEntry {
    Finite(f64),
    Symbol(String),
}

impl MatrixEntry {
    fn from_distance(d: f64) -> Self {
        if d.is_infinite() {
            MatrixEntry::Symbol("inf".into())
        } else {
            MatrixEntry::Finite(d)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub points: Vec<String>,
    #[serde(default)]
    pub omega: Option<String>,
    pub matrix: Vec<Vec<MatrixEntry>>,
}

impl MatrixFile {
    pub fn from_space(space: &ExtendedMetricSpace) -> Self {
        MatrixFile {
            points: space.labels().to_vec(),
            omega: space.omega().map(|w| space.label(w).to_string()),
            matrix: space
                .rows()
                .into_iter()
                .map(|row| row.into_iter().map(MatrixEntry::from_distance).collect())
                .collect(),
        }
    }

    pub fn into_space(self, eps: f64) -> Result<ExtendedMetricSpace, FormatError> {
        let omega = match &self.omega {
            Some(w) => Some(
                self.points
                    .iter()
                    .position(|p| p == w)
                    .ok_or_else(|| FormatError::UnknownOmega(w.clone()))?,
            ),
            None => None,
        };
        let mut rows = Vec::with_capacity(self.matrix.len());
        for (i, row) in self.matrix.into_iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (j, e) in row.into_iter().enumerate() {
                out.push(match e {
                    MatrixEntry::Finite(v) => v,
                    MatrixEntry::Symbol(s) if s == "inf" => f64::INFINITY,
                    MatrixEntry::Symbol(value) => return Err(FormatError::BadEntry { i, j, value }),
                });
            }
            rows.push(out);
        }
        Ok(ExtendedMetricSpace::with_tolerance(
            self.points,
            rows,
            omega,
            eps,
        )?)
    }
}

pub fn parse_space(json: &str, eps: f64) -> Result<ExtendedMetricSpace, FormatError> {
    serde_json::from_str::<MatrixFile>(json)?.into_space(eps)
}

pub fn space_to_json(space: &ExtendedMetricSpace) -> String {
    serde_json::to_string_pretty(&MatrixFile::from_space(space)).expect("matrix serializes")
}

/// Label map for a correspondence: source label to target label.
pub type LabelMap = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveFile {
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub samples: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<f64>>,
}

impl CurveFile {
    pub fn points(&self) -> Vec<Vec2> {
        self.samples.iter().map(|&[a, b]| Vec2::new(a, b)).collect()
    }
}

/// CSV with a header row; values use Rust's shortest round-trip formatting.
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", line.join(","));
    }
    out
}
