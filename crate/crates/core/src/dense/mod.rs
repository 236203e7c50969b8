//! Brute-force dense linear algebra used as an independent oracle for the
//! fast graph-diagonal code paths.
//!
//! Computational-basis index bit `q` is qubit `q` (LSB = qubit 0).

pub mod checks;
pub mod eigen;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::diagonal::{Certificate, DiagonalOperator};
use crate::error::{Error, Result};
use crate::graph::{canonical_masks, Graph};
use crate::stabilizer::PauliWord;

pub const MAX_DENSE_QUBITS: usize = 8;
pub const MAX_VECTOR_QUBITS: usize = 12;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

fn cap(what: &'static str, n: usize, max: usize) -> Result<()> {
    if n > max {
        Err(Error::CapExceeded { what, n, max })
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(n: usize, amps: Vec<C64>) -> Result<Self> {
        cap("state vector", n, MAX_VECTOR_QUBITS)?;
        if amps.len() != 1 << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, got: amps.len() });
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotAState(format!("vector norm² {norm}")));
        }
        Ok(StateVector { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    /// `⟨self|o⟩`.
    pub fn inner(&self, o: &StateVector) -> C64 {
        self.amps.iter().zip(&o.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn outer(&self) -> DenseHermitian {
        let d = self.amps.len();
        let mut data = vec![ZERO; d * d];
        for r in 0..d {
            for c in 0..d {
                data[r * d + c] = self.amps[r] * self.amps[c].conj();
            }
        }
        DenseHermitian { n: self.n, data }
    }
}

/// `|G⟩`: CZ on every edge applied to `|+⟩^n`.
pub fn materialize_graph_state(g: &Graph) -> Result<StateVector> {
    cap("state vector", g.n(), MAX_VECTOR_QUBITS)?;
    let dim = g.dim();
    let amp = (dim as f64).sqrt().recip();
    let mut v = vec![C64::new(amp, 0.0); dim];
    for &(i, j) in g.edges() {
        for (z, a) in v.iter_mut().enumerate() {
            if z >> i & 1 == 1 && z >> j & 1 == 1 {
                *a = -*a;
            }
        }
    }
    StateVector::new(g.n(), v)
}

/// `|a⟩ = ∏_k Z_k^{a_k} |G⟩`.
pub fn materialize_basis_vector(g: &Graph, a: usize) -> Result<StateVector> {
    let mut v = materialize_graph_state(g)?;
    for (z, amp) in v.amps.iter_mut().enumerate() {
        if (z & a).count_ones() % 2 == 1 {
            *amp = -*amp;
        }
    }
    Ok(v)
}

/// Hermitian matrix on `n` qubits, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseHermitian {
    n: usize,
    data: Vec<C64>,
}

impl DenseHermitian {
    pub fn new(n: usize, data: Vec<C64>) -> Result<Self> {
        cap("dense matrix", n, MAX_DENSE_QUBITS)?;
        let d = 1 << n;
        if data.len() != d * d {
            return Err(Error::DimensionMismatch { expected: d * d, got: data.len() });
        }
        let m = DenseHermitian { n, data };
        let dev = m.hermiticity_defect();
        if dev > 1e-12 {
            return Err(Error::Precondition(format!("matrix is not Hermitian (defect {dev:e})")));
        }
        Ok(m)
    }

    pub fn identity(n: usize) -> Result<Self> {
        let d = 1 << n;
        let mut data = vec![ZERO; d * d];
        (0..d).for_each(|i| data[i * d + i] = ONE);
        Self::new(n, data)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.dim() + c]
    }

    fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in r..d {
                worst = worst.max((self.data[r * d + c] - self.data[c * d + r].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, o: &DenseHermitian) -> f64 {
        self.data.iter().zip(&o.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn sub(&self, o: &DenseHermitian) -> DenseHermitian {
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect();
        DenseHermitian { n: self.n, data }
    }

    /// Plain matrix product (the result need not be Hermitian).
    pub fn matmul_raw(&self, o: &DenseHermitian) -> Vec<C64> {
        let d = self.dim();
        let mut out = vec![ZERO; d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.data[r * d + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..d {
                    out[r * d + c] += a * o.data[k * d + c];
                }
            }
        }
        out
    }

    pub fn raw(&self) -> &[C64] {
        &self.data
    }

    /// Transposition of the qubits in `mask` in the computational basis.
    pub fn partial_transpose(&self, mask: usize) -> DenseHermitian {
        let d = self.dim();
        let mut data = vec![ZERO; d * d];
        for r in 0..d {
            for c in 0..d {
                let r2 = (r & !mask) | (c & mask);
                let c2 = (c & !mask) | (r & mask);
                data[r * d + c] = self.data[r2 * d + c2];
            }
        }
        DenseHermitian { n: self.n, data }
    }

    /// `⟨v|A|v⟩` (real part).
    pub fn expectation(&self, v: &StateVector) -> f64 {
        let d = self.dim();
        let mut acc = ZERO;
        for r in 0..d {
            let row: C64 = (0..d).map(|c| self.data[r * d + c] * v.amps[c]).sum();
            acc += v.amps[r].conj() * row;
        }
        acc.re
    }

    /// Ascending spectrum.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(self)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }
}

/// Kronecker product of the single-qubit factors, times `i^phase`.
pub fn materialize_pauli(w: &PauliWord) -> Result<DenseHermitian> {
    cap("dense matrix", w.n, MAX_DENSE_QUBITS)?;
    let i = C64::new(0.0, 1.0);
    let single = |x: bool, z: bool| -> [C64; 4] {
        match (x, z) {
            (false, false) => [ONE, ZERO, ZERO, ONE],
            (true, false) => [ZERO, ONE, ONE, ZERO],
            (false, true) => [ONE, ZERO, ZERO, -ONE],
            (true, true) => [ZERO, -i, i, ZERO],
        }
    };
    let mut m = vec![i.powu(w.phase_power as u32)];
    let mut d = 1;
    // kron(σ_q, m) places qubit q above all previously added qubits.
    for q in 0..w.n {
        let s = single(w.x_mask >> q & 1 == 1, w.z_mask >> q & 1 == 1);
        let nd = 2 * d;
        let mut out = vec![ZERO; nd * nd];
        for (br, bc) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let f = s[br * 2 + bc];
            if f == ZERO {
                continue;
            }
            for r in 0..d {
                for c in 0..d {
                    out[(br * d + r) * nd + bc * d + c] = f * m[r * d + c];
                }
            }
        }
        m = out;
        d = nd;
    }
    DenseHermitian::new(w.n, m)
}

/// `Σ_a d_a |a⟩⟨a|` from explicit basis vectors.
pub fn materialize_diag_op(op: &DiagonalOperator) -> Result<DenseHermitian> {
    let g = op.graph();
    cap("dense matrix", g.n(), MAX_DENSE_QUBITS)?;
    let d = g.dim();
    let mut data = vec![ZERO; d * d];
    for (a, &w) in op.diag().iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let v = materialize_basis_vector(g, a)?;
        for r in 0..d {
            let vr = v.amps[r] * w;
            for c in 0..d {
                data[r * d + c] += vr * v.amps[c].conj();
            }
        }
    }
    DenseHermitian::new(g.n(), data)
}

/// `⟨a|A|a⟩` for every graph-basis vector.
pub fn graph_diagonal(a: &DenseHermitian, g: &Graph) -> Result<Vec<f64>> {
    (0..g.dim()).map(|k| Ok(a.expectation(&materialize_basis_vector(g, k)?))).collect()
}

pub fn dense_partial_transpose(a: &DenseHermitian, mask: usize) -> DenseHermitian {
    a.partial_transpose(mask)
}

/// Spectrum via the real symmetric embedding `[[Re, −Im], [Im, Re]]`, whose
/// eigenvalues are those of `A`, each doubled. Real input skips the embedding.
pub fn hermitian_eigenvalues(a: &DenseHermitian) -> Result<Vec<f64>> {
    let d = a.dim();
    if a.data.iter().all(|v| v.im == 0.0) {
        let mut re: Vec<f64> = a.data.iter().map(|v| v.re).collect();
        return eigen::symmetric_eigenvalues(&mut re, d);
    }
    let n2 = 2 * d;
    let mut m = vec![0.0; n2 * n2];
    for r in 0..d {
        for c in 0..d {
            let v = a.data[r * d + c];
            m[r * n2 + c] = v.re;
            m[(r + d) * n2 + c + d] = v.re;
            m[r * n2 + c + d] = -v.im;
            m[(r + d) * n2 + c] = v.im;
        }
    }
    let doubled = eigen::symmetric_eigenvalues(&mut m, n2)?;
    Ok(doubled.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect())
}

/// Sum of the magnitudes of the negative eigenvalues of `ρ^{T_M}`.
pub fn negativity(rho: &DenseHermitian, mask: usize) -> Result<f64> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
        return Err(Error::NotAState(format!("trace {tr}")));
    }
    if rho.min_eigenvalue()? < -1e-9 {
        return Err(Error::NotAState("not positive semidefinite".into()));
    }
    let ev = rho.partial_transpose(mask).eigenvalues()?;
    Ok(ev.iter().filter(|&&e| e < 0.0).map(|e| -e).sum())
}

/// Schmidt coefficients across `mask | rest`, descending, from the Gram
/// matrix of the smaller side.
pub fn schmidt_coefficients(v: &StateVector, mask: usize) -> Result<Vec<f64>> {
    let n = v.n;
    let full = (1usize << n) - 1;
    let mask = mask & full;
    let small = if mask.count_ones() <= n as u32 / 2 { mask } else { full & !mask };
    let big = full & !small;
    let ks = small.count_ones() as usize;
    let (sp, bp) = (positions(small), positions(big));
    let ds = 1usize << ks;
    let db = 1usize << (n - ks);
    // psi[i][j] with i indexing the small side.
    let mut psi = vec![ZERO; ds * db];
    for (z, &amp) in v.amps.iter().enumerate() {
        psi[gather(z, &sp) * db + gather(z, &bp)] = amp;
    }
    let real = psi.iter().all(|a| a.im == 0.0);
    let rho: Vec<C64> = (0..ds * ds)
        .map(|k| {
            let (r, c) = (k / ds, k % ds);
            (0..db).map(|j| psi[r * db + j] * psi[c * db + j].conj()).sum()
        })
        .collect();
    let ev = if real {
        let mut gram: Vec<f64> = rho.iter().map(|r| r.re).collect();
        eigen::symmetric_eigenvalues(&mut gram, ds)?
    } else {
        hermitian_eigenvalues(&DenseHermitian { n: ks, data: rho })?
    };
    let mut out: Vec<f64> = ev.iter().map(|&l| l.max(0.0).sqrt()).collect();
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

fn positions(mask: usize) -> Vec<usize> {
    crate::graph::bits(mask).collect()
}

fn gather(z: usize, pos: &[usize]) -> usize {
    pos.iter().enumerate().fold(0, |acc, (k, &p)| acc | (z >> p & 1) << k)
}

/// `⟨φ|(|ψ⟩⟨ψ|)^{T_M}|φ⟩` without forming the `4^n` operator.
pub fn pt_matrix_element(psi: &StateVector, phi: &StateVector, mask: usize) -> C64 {
    let d = psi.amps.len();
    let mut acc = ZERO;
    for r in 0..d {
        let pr = phi.amps[r].conj();
        if pr == ZERO {
            continue;
        }
        for c in 0..d {
            let r2 = (r & !mask) | (c & mask);
            let c2 = (c & !mask) | (r & mask);
            acc += pr * psi.amps[r2] * psi.amps[c2].conj() * phi.amps[c];
        }
    }
    acc
}

/// Which witness class to verify.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DenseMode {
    FullyPpt,
    Decomposable,
}

#[derive(Clone, Debug, Serialize)]
pub struct MRecord {
    pub mask: usize,
    pub min_eig: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub mode: DenseMode,
    pub pass: bool,
    pub per_m: Vec<MRecord>,
}

impl VerifyReport {
    pub fn from_records(mode: DenseMode, per_m: Vec<MRecord>) -> Self {
        VerifyReport { mode, pass: per_m.iter().all(|r| r.pass), per_m }
    }

    pub fn failures(&self) -> impl Iterator<Item = &MRecord> {
        self.per_m.iter().filter(|r| !r.pass)
    }
}

fn psd_margin(a: &DenseHermitian) -> Result<(f64, bool)> {
    let e = a.min_eigenvalue()?;
    Ok((e, e >= -1e-9 * a.max_abs().max(1.0)))
}

/// Dense check of `W^{T_M} ⪰ 0` (fully PPT) or of `P_M ⪰ 0` and
/// `(W − P_M)^{T_M} ⪰ 0` with the given certificates, for every canonical M.
pub fn verify_witness(w: &DiagonalOperator, mode: DenseMode, certs: Option<&[Certificate]>) -> Result<VerifyReport> {
    let g = w.graph();
    cap("dense verification", g.n(), MAX_DENSE_QUBITS)?;
    let wd = materialize_diag_op(w)?;
    let masks = canonical_masks(g.n());
    let records: Result<Vec<MRecord>> = match mode {
        DenseMode::FullyPpt => masks
            .par_iter()
            .map(|&m| {
                let (min_eig, pass) = psd_margin(&wd.partial_transpose(m))?;
                Ok(MRecord { mask: m, min_eig, pass })
            })
            .collect(),
        DenseMode::Decomposable => {
            let certs = certs.ok_or(Error::MissingCertificates)?;
            masks
                .par_iter()
                .map(|&m| {
                    let cert = certs.iter().find(|c| c.mask == m).ok_or(Error::MissingCertificates)?;
                    let p = DiagonalOperator::from_diag(g, cert.p.clone())?;
                    let pd = materialize_diag_op(&p)?;
                    let (e1, ok1) = psd_margin(&pd)?;
                    let (e2, ok2) = psd_margin(&wd.sub(&pd).partial_transpose(m))?;
                    Ok(MRecord { mask: m, min_eig: e1.min(e2), pass: ok1 && ok2 })
                })
                .collect()
        }
    };
    Ok(VerifyReport::from_records(mode, records?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Family;
    use crate::stabilizer::{generator_word, stab_element};

    fn g(f: Family) -> Graph {
        Graph::named(&f).unwrap()
    }

    #[test]
    fn bell_state_amplitudes() {
        let v = materialize_graph_state(&g(Family::Linear(2))).unwrap();
        let re: Vec<f64> = v.amps().iter().map(|a| a.re).collect();
        assert_eq!(re, vec![0.5, 0.5, 0.5, -0.5]);
        let e = materialize_graph_state(&Graph::new(3, []).unwrap()).unwrap();
        assert!(e.amps().iter().all(|a| a.re > 0.0 && a.im == 0.0));
    }

    #[test]
    fn basis_is_orthonormal_and_stabilized() {
        let c5 = g(Family::Ring(5));
        for (a, b) in [(0, 0), (3, 3), (1, 2), (7, 30), (31, 0), (5, 12)] {
            let ip = materialize_basis_vector(&c5, a).unwrap().inner(&materialize_basis_vector(&c5, b).unwrap());
            let want = if a == b { 1.0 } else { 0.0 };
            assert!((ip.re - want).abs() < 1e-14 && ip.im.abs() < 1e-14);
        }
        let l3 = g(Family::Linear(3));
        for a in 0..8 {
            let v = materialize_basis_vector(&l3, a).unwrap();
            for i in 0..3 {
                let gi = materialize_pauli(&generator_word(&l3, i).unwrap()).unwrap();
                let s = if a >> i & 1 == 1 { -1.0 } else { 1.0 };
                assert!((gi.expectation(&v) - s).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn pauli_materialization() {
        let l3 = g(Family::Linear(3));
        let g1 = materialize_pauli(&generator_word(&l3, 1).unwrap()).unwrap();
        // Z ⊗ X ⊗ Z: flips bit 1, sign from bits 0 and 2.
        for c in 0..8usize {
            let r = c ^ 0b010;
            let s = if (c & 0b101).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            assert_eq!(g1.get(r, c), C64::new(s, 0.0));
        }
        let id = materialize_pauli(&PauliWord::identity(3)).unwrap();
        assert_eq!(id, DenseHermitian::identity(3).unwrap());
        let bell = g(Family::Linear(2));
        let prod = materialize_pauli(&generator_word(&bell, 0).unwrap())
            .unwrap()
            .matmul_raw(&materialize_pauli(&generator_word(&bell, 1).unwrap()).unwrap());
        let w = materialize_pauli(&stab_element(&bell, 0b11)).unwrap();
        assert!(prod.iter().zip(w.raw()).all(|(a, b)| (a - b).norm() == 0.0));
    }

    #[test]
    fn eigen_examples() {
        let x = materialize_pauli(&PauliWord { n: 1, x_mask: 1, z_mask: 0, phase_power: 0 }).unwrap();
        let ev = x.eigenvalues().unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-15 && (ev[1] - 1.0).abs() < 1e-15);
        let y = materialize_pauli(&PauliWord { n: 1, x_mask: 1, z_mask: 1, phase_power: 0 }).unwrap();
        let ev = y.eigenvalues().unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
        let bell = materialize_graph_state(&g(Family::Linear(2))).unwrap().outer();
        let ev = bell.partial_transpose(0b01).eigenvalues().unwrap();
        let want = [-0.5, 0.5, 0.5, 0.5];
        assert!(ev.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-14));
    }

    #[test]
    fn partial_transpose_basics() {
        let id = DenseHermitian::identity(3).unwrap();
        assert_eq!(id.partial_transpose(0b010), id);
        let rho = materialize_graph_state(&g(Family::Ring(3))).unwrap().outer();
        let t = rho.partial_transpose(0b011);
        assert_eq!(t.partial_transpose(0b011), rho);
        assert!((t.trace() - rho.trace()).norm() < 1e-15);
    }

    #[test]
    fn negativity_examples() {
        let bell = materialize_graph_state(&g(Family::Linear(2))).unwrap().outer();
        assert!((negativity(&bell, 0b01).unwrap() - 0.5).abs() < 1e-14);
        let mut mixed = DenseHermitian::identity(2).unwrap();
        mixed.data.iter_mut().for_each(|v| *v *= 0.25);
        assert!(negativity(&mixed, 0b01).unwrap().abs() < 1e-15);
        let p = 2.0 / 3.0;
        let noisy: Vec<C64> = bell.data.iter().zip(&mixed.data).map(|(a, b)| a * (1.0 - p) + b * p).collect();
        let noisy = DenseHermitian::new(2, noisy).unwrap();
        assert!(negativity(&noisy, 0b01).unwrap().abs() <= 1e-9);
    }

    #[test]
    fn schmidt_examples() {
        let bell = materialize_graph_state(&g(Family::Linear(2))).unwrap();
        let s = schmidt_coefficients(&bell, 0b01).unwrap();
        assert!(s.iter().all(|v| (v - 0.5f64.sqrt()).abs() < 1e-14));
        let prod = materialize_graph_state(&Graph::new(2, []).unwrap()).unwrap();
        let s = schmidt_coefficients(&prod, 0b01).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-14 && s[1].abs() < 1e-7);
    }

    #[test]
    fn broken_witness_fails() {
        let bell = g(Family::Linear(2));
        let w = DiagonalOperator::from_diag(&bell, vec![-1.5, 0.5, 0.5, 0.5]).unwrap();
        let rep = verify_witness(&w, DenseMode::FullyPpt, None).unwrap();
        assert!(!rep.pass);
        assert!(rep.failures().all(|r| r.min_eig < -0.1));
        assert!(matches!(verify_witness(&w, DenseMode::Decomposable, None), Err(Error::MissingCertificates)));
    }

    #[test]
    fn caps() {
        let big = g(Family::Linear(9));
        let w = DiagonalOperator::identity(&big);
        assert!(matches!(materialize_diag_op(&w), Err(Error::CapExceeded { .. })));
        assert!(materialize_graph_state(&g(Family::Linear(13))).is_err());
    }
}
