//! Explicit `P_M` operators proving that set-based witnesses are fully
//! decomposable.
//!
//! For a bipartition `M` the graph `G'` drops all edges inside either side.
//! Starting from `{0}`, every set member `β` with a neighbor in `G'` doubles
//! the index set by XOR-ing in its `G'` neighborhood. The certificate is the
//! set reached one change before the end, without index 0. `G` and `G'`
//! differ by controlled-Z gates local to each side, which commute with the
//! `Z` flips, so the indices carry over to the graph basis of `G` unchanged.

use rayon::prelude::*;
use serde::Serialize;

use crate::diagonal::{Certificate, DiagonalOperator, NONNEG_TOL};
use crate::error::{Error, Result};
use crate::graph::{bits, canonical_masks, mask_of, BSet, Bipartition, Graph};

/// `P_M = Σ_{a ∈ indices} |a⟩⟨a|` for one bipartition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificatePM {
    pub mask: usize,
    pub indices: Vec<usize>,
    #[serde(skip)]
    pub gprime: Graph,
}

impl CertificatePM {
    pub fn is_zero(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn to_certificate(&self) -> Certificate {
        let mut p = vec![0.0; self.gprime.dim()];
        for &a in &self.indices {
            p[a] = 1.0;
        }
        Certificate { mask: self.mask, p }
    }
}

fn run(g: &Graph, order: &[usize], m: &Bipartition) -> CertificatePM {
    let gprime = g.delete_intra_partition_edges(m);
    let mut set = vec![0usize];
    let mut before_last = set.clone();
    let mut r = 0;
    for &beta in order {
        let flip = gprime.nbr_mask(beta);
        if flip == 0 {
            continue;
        }
        r += 1;
        before_last = set.clone();
        let grown: Vec<usize> = set.iter().map(|&a| a ^ flip).collect();
        set.extend(grown);
        set.sort_unstable();
        set.dedup();
    }
    let indices = if r <= 1 { vec![] } else { before_last.into_iter().filter(|&a| a != 0).collect() };
    CertificatePM { mask: m.mask(), indices, gprime }
}

/// Certificate for the single-set witness built on `b`.
pub fn certificate_pm(g: &Graph, b: &BSet, m: &Bipartition) -> Result<CertificatePM> {
    if m.n() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: m.n() });
    }
    Ok(run(g, b.members(), m))
}

/// Certificate for a minimum over several sets whose members from different
/// sets share all or none of their neighbors. Members with equal
/// neighborhoods act as one qubit per side of `M`, so one representative per
/// (neighborhood, side) class enters the construction.
pub fn certificate_pm_combined(g: &Graph, sets: &[Vec<usize>], m: &Bipartition) -> Result<CertificatePM> {
    if m.n() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: m.n() });
    }
    let union = sets.iter().fold(0, |acc, s| acc | mask_of(s));
    let mut seen: Vec<(usize, bool)> = Vec::new();
    let mut order = Vec::new();
    for q in bits(union) {
        let key = (g.nbr_mask(q), m.contains(q));
        if !seen.contains(&key) {
            seen.push(key);
            order.push(q);
        }
    }
    Ok(run(g, &order, m))
}

/// Diagonal check of every certificate: `P_M ⪰ 0` holds by construction, so
/// only the graph-basis diagonal of `(W − P_M)^{T_M}` is tested. Returns
/// `(mask, min entry)` per bipartition.
pub fn check_pm_certificates(w: &DiagonalOperator, certs: &[CertificatePM]) -> Result<Vec<(usize, f64)>> {
    let masks = canonical_masks(w.n());
    masks
        .par_iter()
        .map(|&mask| {
            let c = certs.iter().find(|c| c.mask == mask).ok_or(Error::MissingCertificates)?;
            let mut d = w.diag().to_vec();
            for &a in &c.indices {
                d[a] -= 1.0;
            }
            let q = DiagonalOperator::from_diag(w.graph(), d)?.partial_transpose(&Bipartition::new(w.n(), mask)?);
            Ok((mask, q.min_diag_entry()))
        })
        .collect()
}

/// Certificates for every canonical bipartition of a witness built on `sets`.
pub fn certificates_for(g: &Graph, sets: &[Vec<usize>]) -> Result<Vec<CertificatePM>> {
    canonical_masks(g.n())
        .into_iter()
        .map(|mask| {
            let m = Bipartition::new(g.n(), mask)?;
            match sets {
                [one] => certificate_pm(g, &BSet::new(g, one)?, &m),
                _ => certificate_pm_combined(g, sets, &m),
            }
        })
        .collect()
}

/// True when every `(W − P_M)^{T_M}` diagonal is nonnegative.
pub fn certified(checks: &[(usize, f64)]) -> bool {
    checks.iter().all(|&(_, v)| v >= -NONNEG_TOL)
}
