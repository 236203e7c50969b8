//! Graph-diagonal operators and states.
//!
//! An operator `Σ_a d_a |a⟩⟨a|` is stored by its graph-basis diagonal `d`.
//! Its expansion `Σ_x c_x S_x` over stabilizer elements is related by an
//! unnormalized Walsh–Hadamard transform, `d = H c`, and partial
//! transposition is a sign flip on `c`.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{canonical_masks, Bipartition, Graph};
use crate::stabilizer::ymask_table;

/// Absolute tolerance of nonnegativity checks.
pub const NONNEG_TOL: f64 = 1e-9;

/// In-place unnormalized Walsh–Hadamard transform. Length must be a power of two.
pub fn fwht(data: &mut [f64]) {
    debug_assert!(data.len().is_power_of_two());
    let len = data.len();
    let mut h = 1;
    while h < len {
        for block in data.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, d) = (*a + *b, *a - *b);
                *a = s;
                *b = d;
            }
        }
        h <<= 1;
    }
}

/// `d_a = Σ_x c_x (−1)^{popcount(a & x)}`.
pub fn wht_forward(c: &[f64]) -> Result<Vec<f64>> {
    if !c.len().is_power_of_two() {
        return Err(Error::NotPowerOfTwo(c.len()));
    }
    let mut d = c.to_vec();
    fwht(&mut d);
    Ok(d)
}

/// Inverse of [`wht_forward`], including the `2^-n` factor.
pub fn wht_inverse(d: &[f64]) -> Result<Vec<f64>> {
    let mut c = wht_forward(d)?;
    let s = 1.0 / c.len() as f64;
    c.iter_mut().for_each(|v| *v *= s);
    Ok(c)
}

/// Graph-diagonal Hermitian operator.
#[derive(Clone, Debug)]
pub struct DiagonalOperator {
    graph: Graph,
    diag: Vec<f64>,
    stab: OnceLock<Vec<f64>>,
}

impl PartialEq for DiagonalOperator {
    fn eq(&self, o: &Self) -> bool {
        self.graph == o.graph && self.diag == o.diag
    }
}

impl DiagonalOperator {
    pub fn from_diag(graph: &Graph, diag: Vec<f64>) -> Result<Self> {
        if diag.len() != graph.dim() {
            return Err(Error::DimensionMismatch { expected: graph.dim(), got: diag.len() });
        }
        Ok(DiagonalOperator { graph: graph.clone(), diag, stab: OnceLock::new() })
    }

    pub fn from_stab(graph: &Graph, stab: Vec<f64>) -> Result<Self> {
        if stab.len() != graph.dim() {
            return Err(Error::DimensionMismatch { expected: graph.dim(), got: stab.len() });
        }
        let diag = wht_forward(&stab)?;
        let cell = OnceLock::new();
        let _ = cell.set(stab);
        Ok(DiagonalOperator { graph: graph.clone(), diag, stab: cell })
    }

    pub fn identity(graph: &Graph) -> Self {
        Self::from_diag(graph, vec![1.0; graph.dim()]).expect("sized by graph")
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// Stabilizer coefficients, computed on first use.
    pub fn stab(&self) -> &[f64] {
        self.stab.get_or_init(|| wht_inverse(&self.diag).expect("power-of-two length"))
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    pub fn min_diag_entry(&self) -> f64 {
        self.diag.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_nonneg(&self, tol: f64) -> bool {
        self.min_diag_entry() >= -tol
    }

    /// `W^{T_M}`, still graph-diagonal.
    pub fn partial_transpose(&self, m: &Bipartition) -> DiagonalOperator {
        let ym = ymask_table(&self.graph);
        let stab: Vec<f64> = self
            .stab()
            .iter()
            .zip(&ym)
            .map(|(&c, &y)| if (y & m.mask()).count_ones() % 2 == 1 { -c } else { c })
            .collect();
        DiagonalOperator::from_stab(&self.graph, stab).expect("same size")
    }

    /// `tr(W ρ)`.
    pub fn expectation(&self, state: &GraphDiagonalState) -> Result<f64> {
        if state.graph != self.graph {
            return Err(if state.probs.len() != self.diag.len() {
                Error::DimensionMismatch { expected: self.diag.len(), got: state.probs.len() }
            } else {
                Error::GraphMismatch
            });
        }
        Ok(self.diag.iter().zip(&state.probs).map(|(d, s)| d * s).sum())
    }

    /// Elementwise minimum of diagonals.
    pub fn min_with(&self, o: &DiagonalOperator) -> Result<DiagonalOperator> {
        if o.graph != self.graph {
            return Err(Error::GraphMismatch);
        }
        let d = self.diag.iter().zip(&o.diag).map(|(a, b)| a.min(*b)).collect();
        DiagonalOperator::from_diag(&self.graph, d)
    }

    pub fn sweep(&self) -> PtSweep<'_> {
        PtSweep::new(self)
    }
}

/// Minimum diagonal entry of `W^{T_M}` for many bipartitions. Workers share
/// the stabilizer coefficients; each owns a scratch copy.
pub struct PtSweep<'a> {
    stab: &'a [f64],
    ymask: Vec<usize>,
}

impl<'a> PtSweep<'a> {
    fn new(op: &'a DiagonalOperator) -> Self {
        PtSweep { stab: op.stab(), ymask: ymask_table(op.graph()) }
    }

    pub fn min_entry(&self, mask: usize, scratch: &mut Vec<f64>) -> f64 {
        scratch.clear();
        scratch.extend(
            self.stab.iter().zip(&self.ymask).map(|(&c, &y)| if (y & mask).count_ones() & 1 == 1 { -c } else { c }),
        );
        fwht(scratch);
        scratch.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `(mask, min entry)` for each mask, computed in parallel.
    pub fn run(&self, masks: &[usize]) -> Vec<(usize, f64)> {
        masks.par_iter().map_init(Vec::new, |buf, &m| (m, self.min_entry(m, buf))).collect()
    }

    pub fn run_all(&self) -> Vec<(usize, f64)> {
        let n = self.ymask.len().trailing_zeros() as usize;
        self.run(&canonical_masks(n))
    }
}

/// Graph-diagonal `P_M ⪰ 0` witnessing `W = P_M + Q_M^{T_M}` for one bipartition.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Certificate {
    pub mask: usize,
    pub p: Vec<f64>,
}

/// Graph-diagonal density matrix `Σ_k s_k |k⟩⟨k|`.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphDiagonalState {
    graph: Graph,
    probs: Vec<f64>,
}

impl GraphDiagonalState {
    pub fn new(graph: &Graph, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != graph.dim() {
            return Err(Error::DimensionMismatch { expected: graph.dim(), got: probs.len() });
        }
        if let Some(p) = probs.iter().find(|p| p.is_nan() || **p < 0.0) {
            return Err(Error::NotAState(format!("negative or NaN weight {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::NotAState(format!("weights sum to {total}")));
        }
        Ok(GraphDiagonalState { graph: graph.clone(), probs })
    }

    pub fn pure(graph: &Graph) -> Self {
        white_noise_state(graph, 0.0).expect("p = 0 is valid")
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `λ self + (1 − λ) other`.
    pub fn mix(&self, o: &GraphDiagonalState, lambda: f64) -> Result<Self> {
        if o.graph != self.graph {
            return Err(Error::GraphMismatch);
        }
        let p = self.probs.iter().zip(&o.probs).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
        Ok(GraphDiagonalState { graph: self.graph.clone(), probs: p })
    }
}

/// `(1 − p)|G⟩⟨G| + p 1/2^n`.
pub fn white_noise_state(graph: &Graph, p: f64) -> Result<GraphDiagonalState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::NoiseOutOfRange(p));
    }
    let dim = graph.dim();
    let mut probs = vec![p / dim as f64; dim];
    probs[0] += 1.0 - p;
    Ok(GraphDiagonalState { graph: graph.clone(), probs })
}
