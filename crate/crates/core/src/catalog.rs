//! The 19 LU classes of connected graph states on up to six qubits, with
//! their reference witnesses.
//!
//! Witnesses are stored as `½·1 − |G⟩⟨G| − Σ coef · Σ_{s ∈ indices} |s⟩⟨s|`,
//! where character `k` of an index string is the excitation of qubit `k`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::{self, Q};

const DATA: &str = include_str!("../data/catalog.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    /// Edge list follows from the class name (star, path, ring, Y/H/E shapes).
    #[serde(rename = "from-name")]
    FromName,
    /// Figure-only graph; the edge list was accepted because its LP-optimal
    /// white-noise threshold reproduces the reference tolerance.
    #[serde(rename = "validated-by-Table-II")]
    ValidatedByTolerance,
}

impl Provenance {
    pub fn label(&self) -> &'static str {
        match self {
            Provenance::FromName => "from-name",
            Provenance::ValidatedByTolerance => "validated-by-Table-II",
        }
    }
}

#[derive(Deserialize)]
struct RawEntry {
    id: usize,
    name: String,
    n: usize,
    provenance: Provenance,
    reference_tolerance: String,
    edges: Vec<[usize; 2]>,
    terms: Vec<RawTerm>,
}

#[derive(Deserialize)]
struct RawTerm {
    coef: String,
    indices: Vec<String>,
}

/// Reference white-noise tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RefTolerance {
    Exact(Q),
    /// Only a three-decimal value is known.
    Approx(f64),
}

impl RefTolerance {
    pub fn value(&self) -> f64 {
        match self {
            RefTolerance::Exact(q) => rational::to_f64(q),
            RefTolerance::Approx(v) => *v,
        }
    }

    pub fn label(&self) -> String {
        match self {
            RefTolerance::Exact(q) => rational::format(q),
            RefTolerance::Approx(v) => format!("≈{v:.3}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Term {
    pub coef: f64,
    /// Printed coefficient, e.g. `1/2` or `0.336`.
    pub coef_label: String,
    pub approximate: bool,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: usize,
    pub name: String,
    pub graph: Graph,
    pub provenance: Provenance,
    pub reference: RefTolerance,
    pub terms: Vec<Term>,
}

impl CatalogEntry {
    /// True when some witness coefficient is only known to three decimals.
    pub fn approximate(&self) -> bool {
        self.terms.iter().any(|t| t.approximate)
    }
}

fn parse_index(s: &str, n: usize) -> Option<usize> {
    if s.len() != n {
        return None;
    }
    s.chars().enumerate().try_fold(0usize, |acc, (k, ch)| match ch {
        '0' => Some(acc),
        '1' => Some(acc | 1 << k),
        _ => None,
    })
}

fn load() -> Result<Vec<CatalogEntry>> {
    let raw: Vec<RawEntry> = serde_json::from_str(DATA)?;
    raw.into_iter()
        .map(|r| {
            let graph = Graph::new(r.n, r.edges.iter().map(|e| (e[0], e[1])))?;
            let reference = match rational::parse(&r.reference_tolerance) {
                Some(q) if r.reference_tolerance.contains('/') => RefTolerance::Exact(q),
                _ => RefTolerance::Approx(
                    r.reference_tolerance.parse().map_err(|_| Error::Precondition("bad catalog tolerance".into()))?,
                ),
            };
            let terms = r
                .terms
                .into_iter()
                .map(|t| {
                    let (coef, approximate) = match rational::parse(&t.coef) {
                        Some(q) => (rational::to_f64(&q), false),
                        None => (
                            t.coef.parse().map_err(|_| Error::Precondition(format!("bad coefficient {}", t.coef)))?,
                            true,
                        ),
                    };
                    let indices = t
                        .indices
                        .iter()
                        .map(|s| parse_index(s, r.n).ok_or_else(|| Error::Precondition(format!("bad index {s}"))))
                        .collect::<Result<_>>()?;
                    Ok(Term { coef, coef_label: t.coef, approximate, indices })
                })
                .collect::<Result<_>>()?;
            Ok(CatalogEntry { id: r.id, name: r.name, graph, provenance: r.provenance, reference, terms })
        })
        .collect()
}

pub fn entries() -> &'static [CatalogEntry] {
    static CELL: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CELL.get_or_init(|| load().expect("embedded catalog is well-formed"))
}

pub fn entry(id: usize) -> Result<&'static CatalogEntry> {
    entries().iter().find(|e| e.id == id).ok_or(Error::BadCatalogId(id))
}
