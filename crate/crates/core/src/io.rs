//! JSON forms of graphs, graph-diagonal states and witnesses.
//!
//! Qubit indices in files are 0-based. Operators carry their diagonal as
//! decimal floats and, when every entry is a short dyadic rational, also as
//! `"num/den"` strings under `exact`.

use serde::{Deserialize, Serialize};

use crate::diagonal::{wht_forward, DiagonalOperator, GraphDiagonalState};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::{self, Q};
use crate::witness::{Method, Tolerance, Verified, WitnessRecord};

/// `{"n", "graph", "diag", "stab"?, "exact"?}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub n: usize,
    pub graph: Graph,
    pub diag: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stab: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<Vec<String>>,
}

impl OperatorJson {
    pub fn new(graph: &Graph, diag: &[f64], with_stab: bool) -> Result<Self> {
        let stab =
            if with_stab { Some(DiagonalOperator::from_diag(graph, diag.to_vec())?.stab().to_vec()) } else { None };
        Ok(OperatorJson {
            n: graph.n(),
            graph: graph.clone(),
            diag: diag.to_vec(),
            stab,
            exact: rational::all_dyadic(diag).map(|q| q.iter().map(rational::format).collect()),
        })
    }

    /// Checks sizes and that `exact` and `stab`, when present, agree with
    /// `diag`. Exact entries win over the floats.
    pub fn validate(self) -> Result<(Graph, Vec<f64>)> {
        if self.graph.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: self.graph.n() });
        }
        if self.diag.len() != self.graph.dim() {
            return Err(Error::DimensionMismatch { expected: self.graph.dim(), got: self.diag.len() });
        }
        let mut diag = self.diag;
        if let Some(ex) = &self.exact {
            if ex.len() != diag.len() {
                return Err(Error::DimensionMismatch { expected: diag.len(), got: ex.len() });
            }
            for (k, (s, d)) in ex.iter().zip(diag.iter_mut()).enumerate() {
                let q = rational::parse(s)
                    .ok_or_else(|| Error::Precondition(format!("exact[{k}] = `{s}` is not a rational")))?;
                let v = rational::to_f64(&q);
                if (v - *d).abs() > 1e-12 * v.abs().max(1.0) {
                    return Err(Error::Precondition(format!("exact[{k}] = {s} disagrees with diag[{k}] = {d}")));
                }
                *d = v;
            }
        }
        if let Some(stab) = &self.stab {
            if stab.len() != diag.len() {
                return Err(Error::DimensionMismatch { expected: diag.len(), got: stab.len() });
            }
            let from_stab = wht_forward(stab)?;
            let dev = from_stab.iter().zip(&diag).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            if dev > 1e-9 {
                return Err(Error::Precondition(format!("stab and diag disagree by {dev:.2e}")));
            }
        }
        Ok((self.graph, diag))
    }
}

pub fn state_to_json(s: &GraphDiagonalState) -> Result<OperatorJson> {
    OperatorJson::new(s.graph(), s.probs(), false)
}

pub fn state_from_json(j: OperatorJson) -> Result<GraphDiagonalState> {
    let (g, diag) = j.validate()?;
    GraphDiagonalState::new(&g, diag)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceJson {
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

impl From<&Tolerance> for ToleranceJson {
    fn from(t: &Tolerance) -> Self {
        ToleranceJson { value: t.value, exact: t.exact.as_ref().map(rational::format) }
    }
}

impl TryFrom<&ToleranceJson> for Tolerance {
    type Error = Error;
    fn try_from(t: &ToleranceJson) -> Result<Self> {
        let exact: Option<Q> = match &t.exact {
            Some(s) => Some(rational::parse(s).ok_or_else(|| Error::Precondition(format!("bad tolerance `{s}`")))?),
            None => None,
        };
        Ok(Tolerance { value: t.value, exact })
    }
}

/// Operator fields plus `method`, `bsets`, `tolerance` and `verified`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessJson {
    #[serde(flatten)]
    pub op: OperatorJson,
    pub method: Method,
    pub bsets: Vec<Vec<usize>>,
    pub tolerance: Option<ToleranceJson>,
    pub verified: Verified,
    #[serde(default)]
    pub approximate: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub fn witness_to_json(w: &WitnessRecord, with_stab: bool) -> Result<WitnessJson> {
    Ok(WitnessJson {
        op: OperatorJson::new(w.graph(), w.op.diag(), with_stab)?,
        method: w.method,
        bsets: w.bsets.clone(),
        tolerance: w.tolerance.as_ref().map(ToleranceJson::from),
        verified: w.verified,
        approximate: w.approximate,
        notes: w.notes.clone(),
    })
}

pub fn witness_from_json(j: WitnessJson) -> Result<WitnessRecord> {
    let (g, diag) = j.op.validate()?;
    for &q in j.bsets.iter().flatten() {
        if q >= g.n() {
            return Err(Error::VertexOutOfRange { v: q, n: g.n() });
        }
    }
    Ok(WitnessRecord {
        op: DiagonalOperator::from_diag(&g, diag)?,
        method: j.method,
        bsets: j.bsets,
        tolerance: j.tolerance.as_ref().map(Tolerance::try_from).transpose()?,
        verified: j.verified,
        approximate: j.approximate,
        notes: j.notes,
    })
}
