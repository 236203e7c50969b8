//! Linear programs over graph-diagonal witnesses.
//!
//! For a bipartition `M`, the partial transpose acts on a graph-diagonal
//! vector as `Φ_M = H · S_M · H / 2^n`, with `H` the Walsh–Hadamard matrix
//! and `S_M` the stabilizer sign pattern. Its entries depend only on `a ⊕ b`,
//! so each `Φ_M` is stored as one length-`2^n` kernel.

pub mod ipm;
pub mod simplex;

use rayon::prelude::*;
use serde::Serialize;

use ipm::Structured;
pub use simplex::{simplex_solve, LpProblem, LpSolution, LpStatus};

use crate::diagonal::{fwht, white_noise_state, Certificate, DiagonalOperator, GraphDiagonalState, NONNEG_TOL};
use crate::error::{Error, Result};
use crate::graph::{canonical_masks, Bipartition, Graph};
use crate::stabilizer::ymask_table;
use crate::witness::{white_noise_tolerance, Method, Verified, WitnessRecord};

/// Largest system accepted by the per-bipartition certification program.
pub const MAX_CERTIFY_QUBITS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    FullyDecomposable,
    FullyPpt,
}

/// Stabilizer sign pattern `σ_M(x) = (−1)^{|y(x) ∧ M|}`.
pub fn sign_pattern(g: &Graph, mask: usize) -> Vec<f64> {
    ymask_table(g).iter().map(|&y| if (y & mask).count_ones() & 1 == 1 { -1.0 } else { 1.0 }).collect()
}

/// `(Φ_M x)_a = Σ_b kernel[a ⊕ b] x_b`.
pub fn pt_kernel(g: &Graph, mask: usize) -> Vec<f64> {
    let mut f = sign_pattern(g, mask);
    fwht(&mut f);
    let inv = 1.0 / f.len() as f64;
    f.iter_mut().for_each(|v| *v *= inv);
    f
}

/// Row `a` of `Φ_M` as sparse `(b, coefficient)` pairs offset by `base`.
fn kernel_row(kernel: &[f64], a: usize, base: usize, scale: f64) -> impl Iterator<Item = (usize, f64)> + '_ {
    kernel.iter().enumerate().filter(|(_, &v)| v != 0.0).map(move |(x, &v)| (base + (a ^ x), scale * v))
}

/// Largest qubit count accepted by the joint programs.
pub fn max_qubits(mode: Mode) -> usize {
    match mode {
        Mode::FullyDecomposable => 8,
        Mode::FullyPpt => 10,
    }
}

fn check_cap(what: &'static str, mode: Mode, n: usize) -> Result<()> {
    let max = max_qubits(mode);
    if n > max {
        Err(Error::CapExceeded { what, n, max })
    } else {
        Ok(())
    }
}

/// Result of the witness optimization for one state.
#[derive(Clone, Debug)]
pub struct LpWitness {
    /// Trace-normalized witness, `tr(W) = 1`.
    pub record: WitnessRecord,
    /// `tr(Wρ)` for the returned witness.
    pub value: f64,
    /// Dual bound: no witness of the class does better than this.
    pub lower_bound: f64,
    /// Graph-diagonal `P_M` from the solution (all zero in fully PPT mode).
    pub certificates: Vec<Certificate>,
    pub iterations: usize,
}

/// Optimal trace-normalized witness of the given class for a graph-diagonal state.
pub fn optimal_witness(state: &GraphDiagonalState, mode: Mode) -> Result<LpWitness> {
    let g = state.graph();
    let n = g.n();
    if n < 2 {
        return Err(Error::BadParams("need at least two qubits".into()));
    }
    check_cap("witness optimization", mode, n)?;
    let dim = g.dim();
    let masks = canonical_masks(n);
    let program = Structured {
        signs: masks.iter().map(|&m| sign_pattern(g, m)).collect(),
        cost: state.probs(),
        with_p: mode == Mode::FullyDecomposable,
        boxed: false,
        trace: true,
    };
    let sol = program.solve_ipm()?;
    let (w, v, _) = program.repair(&sol);
    let value = dot(state.probs(), &w);

    let op = DiagonalOperator::from_diag(g, w)?;
    let certificates: Vec<Certificate> = match mode {
        Mode::FullyDecomposable => masks.iter().zip(v).map(|(&mask, p)| Certificate { mask, p }).collect(),
        Mode::FullyPpt => masks.iter().map(|&mask| Certificate { mask, p: vec![0.0; dim] }).collect(),
    };
    let ok = certificate_margin(&op, &certificates)? >= -NONNEG_TOL;
    let tolerance = white_noise_tolerance(&op).ok().map(|mut t| {
        t.exact = None;
        t
    });
    let record = WitnessRecord {
        op,
        method: Method::LpOptimal,
        bsets: vec![],
        tolerance,
        verified: match (ok, mode) {
            (false, _) => Verified::Unverified,
            (true, Mode::FullyDecomposable) => Verified::DecomposableCertified,
            (true, Mode::FullyPpt) => Verified::PptChecked,
        },
        approximate: false,
        notes: vec![format!("trace-normalized ({mode:?}); divide by −2⟨G|W|G⟩ for the ⟨G|W|G⟩ = −½ form")],
    };
    Ok(LpWitness { record, value, lower_bound: sol.dual_value, certificates, iterations: sol.iterations })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Per certificate, the smaller of the least diagonal entry of
/// `(W − P_M)^{T_M}` and the least entry of `P_M`.
pub fn certificate_margins(w: &DiagonalOperator, certs: &[Certificate]) -> Result<Vec<(usize, f64)>> {
    certs
        .par_iter()
        .map(|c| {
            let d: Vec<f64> = w.diag().iter().zip(&c.p).map(|(a, b)| a - b).collect();
            let q = DiagonalOperator::from_diag(w.graph(), d)?.partial_transpose(&Bipartition::new(w.n(), c.mask)?);
            let pmin = c.p.iter().copied().fold(f64::INFINITY, f64::min);
            Ok((c.mask, q.min_diag_entry().min(pmin)))
        })
        .collect()
}

/// Smallest margin over all certificates.
pub fn certificate_margin(w: &DiagonalOperator, certs: &[Certificate]) -> Result<f64> {
    Ok(certificate_margins(w, certs)?.into_iter().map(|(_, v)| v).fold(f64::INFINITY, f64::min))
}

/// White-noise detection threshold of the optimal witness class.
#[derive(Clone, Debug)]
pub struct Threshold {
    /// Largest noise level still detected; `None` if the pure state is not.
    pub p: Option<f64>,
    /// Root of the affine line through the pure-state optimum.
    pub estimate: Option<f64>,
    /// Final bisection bracket `[detected, not detected]`.
    pub bracket: Option<(f64, f64)>,
    /// Optimum for the pure graph state.
    pub pure_value: f64,
    pub witness: LpWitness,
}

const BISECT_STEPS: usize = 8;

/// For white-noise states `tr(Wρ_p) = (1 − p)⟨G|W|G⟩ + p/2^n` whenever
/// `tr(W) = 1`, so one solve at `p = 0` predicts the root. The prediction is
/// then bracketed on the noisy states themselves and bisected.
pub fn threshold(g: &Graph, mode: Mode) -> Result<Threshold> {
    let witness = optimal_witness(&GraphDiagonalState::pure(g), mode)?;
    let v0 = witness.value;
    if v0.is_nan() || v0 >= -NONNEG_TOL {
        return Ok(Threshold { p: None, estimate: None, bracket: None, pure_value: v0, witness });
    }
    let guess = v0 / (v0 - 1.0 / g.dim() as f64);
    let detects = |p: f64| -> Result<bool> { Ok(optimal_witness(&white_noise_state(g, p)?, mode)?.value < 0.0) };
    let mut delta = 1e-6;
    let (mut lo, mut hi) = loop {
        let (lo, hi) = ((guess - delta).max(0.0), (guess + delta).min(1.0));
        if detects(lo)? && !detects(hi)? {
            break (lo, hi);
        }
        delta *= 10.0;
        if delta > 0.1 {
            return Err(Error::Lp(format!("no detection bracket near the predicted threshold {guess}")));
        }
    };
    for _ in 0..BISECT_STEPS {
        let mid = 0.5 * (lo + hi);
        if detects(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Threshold { p: Some(0.5 * (lo + hi)), estimate: Some(guess), bracket: Some((lo, hi)), pure_value: v0, witness })
}

/// No fully decomposable witness detects the state.
pub fn is_ppt_mixture(state: &GraphDiagonalState) -> Result<bool> {
    Ok(optimal_witness(state, Mode::FullyDecomposable)?.value >= -NONNEG_TOL)
}

/// Per-bipartition outcome of the decomposability program.
#[derive(Clone, Debug, Serialize)]
pub struct CertifyRecord {
    pub mask: usize,
    pub feasible: bool,
    /// Phase-one residual; zero when feasible.
    pub infeasibility: f64,
    pub p: Option<Vec<f64>>,
    pub q: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertifyReport {
    pub pass: bool,
    pub per_m: Vec<CertifyRecord>,
}

impl CertifyReport {
    pub fn certificates(&self) -> Option<Vec<Certificate>> {
        self.per_m.iter().map(|r| r.p.clone().map(|p| Certificate { mask: r.mask, p })).collect()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CertifyRecord> {
        self.per_m.iter().filter(|r| !r.feasible)
    }
}

/// Searches graph-diagonal `P_M, Q_M ≥ 0` with `W = P_M + Q_M^{T_M}` for
/// every canonical bipartition.
pub fn certify_decomposable(w: &DiagonalOperator) -> Result<CertifyReport> {
    let g = w.graph();
    let n = g.n();
    if n > MAX_CERTIFY_QUBITS {
        return Err(Error::CapExceeded { what: "decomposability certification", n, max: MAX_CERTIFY_QUBITS });
    }
    let dim = g.dim();
    let per_m = canonical_masks(n)
        .into_par_iter()
        .map(|mask| {
            let kernel = pt_kernel(g, mask);
            let mut p = LpProblem::with_vars(2 * dim);
            for a in 0..dim {
                let mut row = vec![(a, 1.0)];
                row.extend(kernel_row(&kernel, a, dim, 1.0));
                p.add_row(row, w.diag()[a]);
            }
            let sol = simplex_solve(&p)?;
            let feasible = sol.status == LpStatus::Optimal;
            let (pv, qv) = if feasible {
                (Some(sol.primal[..dim].to_vec()), Some(sol.primal[dim..].to_vec()))
            } else {
                (None, None)
            };
            Ok(CertifyRecord { mask, feasible, infeasibility: sol.infeasibility, p: pv, q: qv })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CertifyReport { pass: per_m.iter().all(|r| r.feasible), per_m })
}

/// `N(ρ) = −min tr(Wρ)` over witnesses with `W = P_M + Q_M^{T_M}`,
/// `0 ≤ P_M, Q_M ≤ 1`, restricted to graph-diagonal operators.
#[derive(Clone, Debug)]
pub struct Monotone {
    pub value: f64,
    pub witness: DiagonalOperator,
    pub iterations: usize,
}

pub fn monotone_n(state: &GraphDiagonalState) -> Result<Monotone> {
    let g = state.graph();
    let n = g.n();
    if n < 2 {
        return Err(Error::BadParams("need at least two qubits".into()));
    }
    check_cap("monotone", Mode::FullyDecomposable, n)?;
    let masks = canonical_masks(n);
    let program = Structured {
        signs: masks.iter().map(|&m| sign_pattern(g, m)).collect(),
        cost: state.probs(),
        with_p: true,
        boxed: true,
        trace: false,
    };
    let sol = program.solve_ipm()?;
    let (w, _, _) = program.repair(&sol);
    Ok(Monotone {
        value: (-dot(state.probs(), &w)).max(0.0),
        witness: DiagonalOperator::from_diag(g, w)?,
        iterations: sol.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Family;

    #[test]
    fn kernel_matches_sign_map() {
        let g = Graph::named(&Family::Linear(4)).unwrap();
        let w = DiagonalOperator::from_diag(&g, (0..16).map(|a| (a * 7 % 5) as f64 - 1.5).collect()).unwrap();
        for mask in canonical_masks(4) {
            let k = pt_kernel(&g, mask);
            let want = w.partial_transpose(&Bipartition::new(4, mask).unwrap());
            for a in 0..16 {
                let got: f64 = (0..16).map(|b| k[a ^ b] * w.diag()[b]).sum();
                assert!((got - want.diag()[a]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bell_threshold() {
        let g = Graph::named(&Family::Linear(2)).unwrap();
        for mode in [Mode::FullyDecomposable, Mode::FullyPpt] {
            let t = threshold(&g, mode).unwrap();
            assert!((t.estimate.unwrap() - 2.0 / 3.0).abs() < 1e-9);
            let (lo, hi) = t.bracket.unwrap();
            assert!(lo <= 2.0 / 3.0 + 1e-10 && 2.0 / 3.0 <= hi + 1e-10 && hi - lo < 1e-8, "{mode:?} {lo} {hi}");
        }
    }

    #[test]
    fn cl4_and_ghz4() {
        let cl4 = Graph::named(&Family::Linear(4)).unwrap();
        let t = threshold(&cl4, Mode::FullyDecomposable).unwrap();
        assert!((t.p.unwrap() - 8.0 / 13.0).abs() < 1e-6);
        assert_eq!(t.witness.record.verified, Verified::DecomposableCertified);
        let tol = t.witness.record.tolerance.unwrap().value;
        assert!((tol - 8.0 / 13.0).abs() < 1e-6);
        let ghz = Graph::named(&Family::Star(4)).unwrap();
        assert!((threshold(&ghz, Mode::FullyDecomposable).unwrap().p.unwrap() - 8.0 / 15.0).abs() < 1e-6);
    }

    #[test]
    fn white_noise_line() {
        let cl4 = Graph::named(&Family::Linear(4)).unwrap();
        let below =
            optimal_witness(&white_noise_state(&cl4, 8.0 / 13.0 - 1e-4).unwrap(), Mode::FullyDecomposable).unwrap();
        let above =
            optimal_witness(&white_noise_state(&cl4, 8.0 / 13.0 + 1e-4).unwrap(), Mode::FullyDecomposable).unwrap();
        assert!(below.value < 0.0 && above.value > 0.0);
        assert!(!is_ppt_mixture(&GraphDiagonalState::pure(&cl4)).unwrap());
        assert!(is_ppt_mixture(&white_noise_state(&cl4, 1.0).unwrap()).unwrap());
    }

    #[test]
    fn ppt_not_better_than_decomposable() {
        let g = Graph::named(&Family::Ring(5)).unwrap();
        let s = GraphDiagonalState::pure(&g);
        let d = optimal_witness(&s, Mode::FullyDecomposable).unwrap().value;
        let p = optimal_witness(&s, Mode::FullyPpt).unwrap().value;
        assert!(p >= d - 1e-9);
    }

    #[test]
    fn certify() {
        let g = Graph::named(&Family::Linear(4)).unwrap();
        let w = crate::witness::lemma3_witness(&g, &[0, 3]).unwrap();
        let rep = certify_decomposable(&w.op).unwrap();
        assert!(rep.pass);
        assert!(certificate_margin(&w.op, &rep.certificates().unwrap()).unwrap() >= -1e-9);
        let bell = Graph::named(&Family::Linear(2)).unwrap();
        let bad = DiagonalOperator::from_diag(&bell, vec![-1.5, 0.5, 0.5, 0.5]).unwrap();
        let rep = certify_decomposable(&bad).unwrap();
        assert!(!rep.pass);
        assert_eq!(rep.failures().next().unwrap().mask, 2);
    }

    #[test]
    fn monotone_pure_and_mixed() {
        let g = Graph::named(&Family::Linear(3)).unwrap();
        let pure = monotone_n(&GraphDiagonalState::pure(&g)).unwrap().value;
        assert!(pure <= 0.5 + 1e-9 && pure > 0.5 - 1e-6);
        assert!(monotone_n(&white_noise_state(&g, 1.0).unwrap()).unwrap().value.abs() < 1e-9);
    }

    #[test]
    fn caps() {
        let g = Graph::named(&Family::Linear(11)).unwrap();
        assert!(matches!(
            optimal_witness(&GraphDiagonalState::pure(&g), Mode::FullyPpt),
            Err(Error::CapExceeded { n: 11, max: 10, .. })
        ));
    }
}
