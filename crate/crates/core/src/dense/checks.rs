//! Brute-force checks of the matrix-element and Schmidt-coefficient facts the
//! analytic constructions rest on. Each function evaluates one instance and
//! returns the quantity a test compares against zero or a bound.

use num_complex::Complex64 as C64;
use rand::Rng;

use super::{
    materialize_basis_vector, materialize_graph_state, pt_matrix_element, schmidt_coefficients, DenseHermitian,
};
use crate::error::Result;
use crate::graph::{bits, Bipartition, Graph};

/// Random graph with edge probability `p`, redrawn until connected.
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    loop {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(p) {
                    edges.push((i, j));
                }
            }
        }
        let g = Graph::new(n, edges).expect("indices in range");
        if g.is_connected() {
            return g;
        }
    }
}

/// Random nonempty strict subset of `n` qubits.
pub fn random_bipartition<R: Rng>(rng: &mut R, n: usize) -> usize {
    rng.gen_range(1..(1usize << n) - 1)
}

/// `|⟨c|(|a⟩⟨a|)^{T_M}|c⟩|` when some qubit `i` with `c_i ≠ a_i` has its
/// closed neighborhood on one side of `M`; `None` if no such qubit exists.
pub fn vanishing_element(g: &Graph, mask: usize, a: usize, c: usize) -> Result<Option<f64>> {
    let full = g.full_mask();
    let applies = bits(a ^ c).any(|i| {
        let closed = g.nbr_mask(i) | 1 << i;
        closed & mask == closed || closed & !mask & full == closed
    });
    if !applies {
        return Ok(None);
    }
    let va = materialize_basis_vector(g, a)?;
    let vc = materialize_basis_vector(g, c)?;
    Ok(Some(pt_matrix_element(&va, &vc, mask).norm()))
}

/// Max deviation of `(|a⟩⟨a| + |c⟩⟨c|)^{T_k}` from itself, with `c` the
/// neighborhood flip of `a` at `k`.
pub fn flip_pair_pt_defect(g: &Graph, k: usize, a: usize) -> Result<f64> {
    let c = a ^ g.nbr_mask(k);
    let va = materialize_basis_vector(g, a)?;
    let vc = materialize_basis_vector(g, c)?;
    let d = g.dim();
    let mut data = vec![C64::new(0.0, 0.0); d * d];
    for v in [&va, &vc] {
        let amps = v.amps();
        for r in 0..d {
            for col in 0..d {
                data[r * d + col] += amps[r] * amps[col].conj();
            }
        }
    }
    let sum = DenseHermitian::new(g.n(), data)?;
    Ok(sum.partial_transpose(1 << k).max_abs_diff(&sum))
}

/// `|⟨a|(|G⟩⟨G|)^{T_q}|a⟩|` on a periodic square grid when some `i ≠ q` has
/// `a_i = 1` and some neighbor `j` of `q` has `a_j = 0`; `None` otherwise.
pub fn torus_vanishing_element(g: &Graph, q: usize, a: usize) -> Result<Option<f64>> {
    let other_one = a & !(1 << q) != 0;
    let nbr_zero = g.nbr_mask(q) & !a != 0;
    if !(other_one && nbr_zero) {
        return Ok(None);
    }
    let psi = materialize_graph_state(g)?;
    let va = materialize_basis_vector(g, a)?;
    Ok(Some(pt_matrix_element(&psi, &va, 1 << q).norm()))
}

/// Outcome of the Schmidt bound on a bipartite-reduced graph.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtBound {
    pub m: usize,
    pub max_lambda_sq: f64,
    pub bound: f64,
}

/// Deletes intra-partition edges of `g`, greedily picks a set of qubits with
/// neighbors that are pairwise non-adjacent without common neighbors, and
/// compares the largest squared Schmidt coefficient with `2^{−m}`.
pub fn schmidt_bound(g: &Graph, mask: usize) -> Result<SchmidtBound> {
    let gp = g.delete_intra_partition_edges(&Bipartition::new(g.n(), mask)?);
    let mut chosen: Vec<usize> = Vec::new();
    for v in 0..gp.n() {
        let nv = gp.nbr_mask(v);
        if nv != 0 && chosen.iter().all(|&u| !gp.has_edge(u, v) && gp.nbr_mask(u) & nv == 0) {
            chosen.push(v);
        }
    }
    let psi = materialize_graph_state(&gp)?;
    let lam = schmidt_coefficients(&psi, mask)?;
    let m = chosen.len();
    Ok(SchmidtBound { m, max_lambda_sq: lam[0] * lam[0], bound: 0.5f64.powi(m as i32) })
}
