//! Primal-dual interior-point solver for the joint witness programs.
//!
//! The programs share one shape: a free vector `w`, and per bipartition `k`
//! nonnegative `u_k` (and optionally `v_k`, optionally capped at 1) with
//!
//! ```text
//! min sᵀw   s.t.   w − Φ_k u_k − v_k = 0  for all k,   [1ᵀw = 1]
//! ```
//!
//! Eliminating the bounded variables leaves one `N × N` block
//! `G_k = Φ_k Θ_u Φ_k + Θ_v` per bipartition, coupled only through `w`, so a
//! Newton step costs `K` block inverses plus one Schur complement in `w`.
//! Without `v_k`, `G_k⁻¹ = Φ_k Θ_u⁻¹ Φ_k` exactly since `Φ_k² = 1`.
//!
//! Mehrotra predictor-corrector steps. The primal and dual equality
//! constraints are re-imposed exactly on every direction, so rounding in the
//! reduced solve only perturbs complementarity.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rayon::prelude::*;

use crate::diagonal::fwht;
use crate::error::{Error, Result};

pub const IPM_TOL: f64 = 1e-10;
/// Accuracy still accepted when the Newton systems degenerate before
/// [`IPM_TOL`] is reached.
pub const ACCEPT_TOL: f64 = 1e-7;
const MAX_ITER: usize = 200;
const PATIENCE: usize = 6;
const STEP_FRACTION: f64 = 0.995;
const REFINE_ROUNDS: usize = 6;
/// Proximal term on `w`, relative to the Schur complement diagonal.
const PROX: f64 = 1e-13;
/// Extra diagonal shifts tried when a Newton system breaks down.
const RESCUE: [f64; 4] = [0.0, 1e-12, 1e-10, 1e-8];
/// Step length below which a shifted retry is attempted.
const MIN_STEP: f64 = 0.05;

pub struct Structured<'a> {
    /// Stabilizer sign pattern of each bipartition.
    pub signs: Vec<Vec<f64>>,
    pub cost: &'a [f64],
    pub with_p: bool,
    pub boxed: bool,
    pub trace: bool,
}

#[derive(Clone, Debug)]
pub struct IpmSolution {
    pub w: Vec<f64>,
    /// `v_k`, empty when the program has none.
    pub v: Vec<Vec<f64>>,
    /// `sᵀw` and the dual bound at the returned iterate.
    pub value: f64,
    pub dual_value: f64,
    pub iterations: usize,
    /// Largest of the relative primal residual, dual residual and gap.
    pub accuracy: f64,
}

/// `Φ x = H (σ ⊙ H x) / N`.
fn phi(sign: &[f64], x: &[f64]) -> Vec<f64> {
    let mut t = x.to_vec();
    fwht(&mut t);
    t.iter_mut().zip(sign).for_each(|(a, s)| *a *= s);
    fwht(&mut t);
    let inv = 1.0 / x.len() as f64;
    t.iter_mut().for_each(|a| *a *= inv);
    t
}

/// Accumulates `σσᵀ ∘ T` with `T_xy = (Hθ)[x ⊕ y]`; conjugating by `H / N`
/// afterwards gives `Φ diag(θ) Φ`.
fn add_phi_diag_phi(sign: &[f64], theta: &[f64], out: &mut [f64]) {
    let n = theta.len();
    let mut t = theta.to_vec();
    fwht(&mut t);
    for (x, row) in out.chunks_mut(n).enumerate() {
        for (y, r) in row.iter_mut().enumerate() {
            *r += sign[x] * sign[y] * t[x ^ y];
        }
    }
}

fn conjugate_by_h(m: &mut [f64], n: usize) {
    m.chunks_mut(n).for_each(fwht);
    for i in 0..n {
        for j in i + 1..n {
            m.swap(i * n + j, j * n + i);
        }
    }
    m.chunks_mut(n).for_each(fwht);
    let s = 1.0 / (n * n) as f64;
    m.iter_mut().for_each(|v| *v *= s);
}

fn max_diag(m: &[f64], n: usize) -> f64 {
    (0..n).map(|i| m[i * n + i]).fold(0.0, f64::max)
}

fn factorize(m: Vec<f64>, n: usize, shift: f64) -> Option<Cholesky<f64, Dyn>> {
    let mut m = DMatrix::from_vec(n, n, m);
    let d = shift * (0..n).map(|i| m[(i, i)]).fold(0.0, f64::max);
    for i in 0..n {
        m[(i, i)] += d;
    }
    m.cholesky()
}

fn all_finite<'b>(mut it: impl Iterator<Item = &'b f64>) -> bool {
    it.all(|v| v.is_finite())
}

fn max_abs<'b>(it: impl Iterator<Item = &'b f64>) -> f64 {
    it.fold(0.0f64, |a, v| a.max(v.abs()))
}

enum Blocks {
    /// `Θ_u⁻¹` per block.
    Exact(Vec<Vec<f64>>),
    Inverse(Vec<DMatrix<f64>>),
}

struct Factor {
    blocks: Blocks,
    s: Cholesky<f64, Dyn>,
    s_inv_one: Option<DVector<f64>>,
}

#[derive(Clone)]
struct Iterate {
    x: Vec<f64>,
    z: Vec<f64>,
    zu: Vec<f64>,
    w: Vec<f64>,
    y: Vec<Vec<f64>>,
    yt: f64,
}

struct Residuals {
    rb: Vec<Vec<f64>>,
    rbt: f64,
    rc: Vec<f64>,
    rf: Vec<f64>,
    pobj: f64,
    dobj: f64,
    accuracy: f64,
}

impl Structured<'_> {
    fn dim(&self) -> usize {
        self.cost.len()
    }

    fn nb(&self) -> usize {
        if self.with_p {
            2 * self.dim()
        } else {
            self.dim()
        }
    }

    fn upper(&self) -> f64 {
        if self.boxed {
            1.0
        } else {
            f64::INFINITY
        }
    }

    /// `A_B x` per block: `−Φ u − v`.
    fn a_b(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let n = self.dim();
        x.par_chunks(self.nb())
            .zip(&self.signs)
            .map(|(blk, sg)| {
                let mut r: Vec<f64> = phi(sg, &blk[..n]).into_iter().map(|v| -v).collect();
                if self.with_p {
                    r.iter_mut().zip(&blk[n..]).for_each(|(a, b)| *a -= b);
                }
                r
            })
            .collect()
    }

    /// `A_Bᵀ y`: `−Φ y_k` on `u_k`, `−y_k` on `v_k`.
    fn a_bt(&self, y: &[Vec<f64>]) -> Vec<f64> {
        let parts: Vec<Vec<f64>> = self
            .signs
            .par_iter()
            .zip(y)
            .map(|(sg, yk)| {
                let mut r: Vec<f64> = phi(sg, yk).into_iter().map(|v| -v).collect();
                if self.with_p {
                    r.extend(yk.iter().map(|v| -v));
                }
                r
            })
            .collect();
        parts.concat()
    }

    fn residuals(&self, p: &Iterate) -> Residuals {
        let ax = self.a_b(&p.x);
        let rb: Vec<Vec<f64>> = ax.iter().map(|a| a.iter().zip(&p.w).map(|(a, w)| -a - w).collect()).collect();
        let rbt = if self.trace { 1.0 - p.w.iter().sum::<f64>() } else { 0.0 };
        let aty = self.a_bt(&p.y);
        let rc: Vec<f64> = (0..p.x.len()).map(|j| -aty[j] - p.z[j] + if self.boxed { p.zu[j] } else { 0.0 }).collect();
        let mut rf: Vec<f64> = self.cost.iter().map(|c| c - p.yt).collect();
        for yk in &p.y {
            rf.iter_mut().zip(yk).for_each(|(a, b)| *a -= b);
        }
        let pobj: f64 = self.cost.iter().zip(&p.w).map(|(a, b)| a * b).sum();
        let dobj = if self.trace { p.yt } else { 0.0 } - if self.boxed { p.zu.iter().sum::<f64>() } else { 0.0 };
        let pres = max_abs(rb.iter().flatten()).max(rbt.abs());
        let dres = max_abs(rc.iter().chain(&rf)) / (1.0 + max_abs(self.cost.iter()));
        let gap = (pobj - dobj).abs() / (1.0 + pobj.abs());
        let mut accuracy = pres.max(dres).max(gap);
        if !(pobj.is_finite() && dobj.is_finite() && all_finite(p.w.iter())) {
            accuracy = f64::NAN;
        }
        Residuals { rb, rbt, rc, rf, pobj, dobj, accuracy }
    }

    fn factor(&self, theta: &[f64], shift: f64) -> Option<Factor> {
        let (n, nb) = (self.dim(), self.nb());
        let mut s_dense = vec![0.0; n * n];
        let blocks = if self.with_p {
            let inv: Vec<DMatrix<f64>> = theta
                .par_chunks(nb)
                .zip(&self.signs)
                .map(|(th, sg)| {
                    let mut g = vec![0.0; n * n];
                    add_phi_diag_phi(sg, &th[..n], &mut g);
                    conjugate_by_h(&mut g, n);
                    for i in 0..n {
                        g[i * n + i] += th[n + i];
                    }
                    let inv = factorize(g, n, shift)?.inverse();
                    all_finite(inv.iter()).then_some(inv)
                })
                .collect::<Option<_>>()?;
            for m in &inv {
                s_dense.iter_mut().zip(m.as_slice()).for_each(|(a, b)| *a += b);
            }
            Blocks::Inverse(inv)
        } else {
            let inv_theta: Vec<Vec<f64>> = theta.chunks(nb).map(|b| b.iter().map(|t| 1.0 / t).collect()).collect();
            for (sg, it) in self.signs.iter().zip(&inv_theta) {
                add_phi_diag_phi(sg, it, &mut s_dense);
            }
            conjugate_by_h(&mut s_dense, n);
            Blocks::Exact(inv_theta)
        };
        if !all_finite(s_dense.iter()) || max_diag(&s_dense, n) <= 0.0 {
            return None;
        }
        let s = factorize(s_dense, n, PROX.max(shift))?;
        let s_inv_one = self.trace.then(|| s.solve(&DVector::from_element(n, 1.0)));
        Some(Factor { blocks, s, s_inv_one })
    }

    fn apply_block_inverse(&self, f: &Factor, k: usize, r: &[f64]) -> Vec<f64> {
        match &f.blocks {
            Blocks::Exact(inv_theta) => {
                let mut t = phi(&self.signs[k], r);
                t.iter_mut().zip(&inv_theta[k]).for_each(|(a, b)| *a *= b);
                phi(&self.signs[k], &t)
            }
            Blocks::Inverse(m) => (&m[k] * DVector::from_column_slice(r)).as_slice().to_vec(),
        }
    }

    /// `G_k y_k` without forming `G_k`.
    fn apply_block(&self, theta: &[f64], k: usize, y: &[f64]) -> Vec<f64> {
        let (n, nb) = (self.dim(), self.nb());
        let th = &theta[k * nb..(k + 1) * nb];
        let mut t = phi(&self.signs[k], y);
        t.iter_mut().zip(&th[..n]).for_each(|(a, b)| *a *= b);
        let mut r = phi(&self.signs[k], &t);
        if self.with_p {
            r.iter_mut().zip(&th[n..]).zip(y).for_each(|((a, b), c)| *a += b * c);
        }
        r
    }

    /// Solves the reduced system for `(dy, dy_t, dw)`.
    fn solve(&self, f: &Factor, g: &[Vec<f64>], g_t: f64, r2: &[f64]) -> (Vec<Vec<f64>>, f64, Vec<f64>) {
        let n = self.dim();
        let ginv_g: Vec<Vec<f64>> =
            (0..self.signs.len()).into_par_iter().map(|k| self.apply_block_inverse(f, k, &g[k])).collect();
        let mut h = vec![0.0; n];
        for v in &ginv_g {
            h.iter_mut().zip(v).for_each(|(a, b)| *a += b);
        }
        h.iter_mut().zip(r2).for_each(|(a, b)| *a -= b);
        let a = f.s.solve(&DVector::from_vec(h));
        let (dyt, dw) = match &f.s_inv_one {
            Some(b) => {
                let dyt = (g_t - a.sum()) / b.sum();
                (dyt, (a + b * dyt).as_slice().to_vec())
            }
            None => (0.0, a.as_slice().to_vec()),
        };
        let dy = (0..self.signs.len())
            .into_par_iter()
            .map(|k| {
                let diff: Vec<f64> = g[k].iter().zip(&dw).map(|(a, b)| a - b).collect();
                self.apply_block_inverse(f, k, &diff)
            })
            .collect();
        (dy, dyt, dw)
    }

    /// [`Self::solve`] plus a few rounds of iterative refinement, each kept
    /// only while it shrinks the residual.
    fn solve_refined(
        &self,
        f: &Factor,
        theta: &[f64],
        g: &[Vec<f64>],
        g_t: f64,
        r2: &[f64],
    ) -> (Vec<Vec<f64>>, f64, Vec<f64>) {
        let residual = |dy: &[Vec<f64>], dyt: f64, dw: &[f64]| {
            let e: Vec<Vec<f64>> = (0..self.signs.len())
                .into_par_iter()
                .map(|k| {
                    let gy = self.apply_block(theta, k, &dy[k]);
                    (0..dw.len()).map(|i| g[k][i] - gy[i] - dw[i]).collect()
                })
                .collect();
            let e_t = if self.trace { g_t - dw.iter().sum::<f64>() } else { 0.0 };
            let mut e_f: Vec<f64> = r2.iter().map(|v| v - dyt).collect();
            for yk in dy {
                e_f.iter_mut().zip(yk).for_each(|(a, b)| *a -= b);
            }
            let err = max_abs(e.iter().flatten().chain(&e_f)).max(e_t.abs());
            (e, e_t, e_f, err)
        };
        let (mut dy, mut dyt, mut dw) = self.solve(f, g, g_t, r2);
        let (mut e, mut e_t, mut e_f, mut err) = residual(&dy, dyt, &dw);
        let scale = max_abs(g.iter().flatten().chain(r2)).max(g_t.abs());
        for _ in 0..REFINE_ROUNDS {
            if err.is_nan() || err <= 1e-15 * scale {
                break;
            }
            let (cy, cyt, cw) = self.solve(f, &e, e_t, &e_f);
            let ny: Vec<Vec<f64>> =
                dy.iter().zip(&cy).map(|(a, b)| a.iter().zip(b).map(|(a, b)| a + b).collect()).collect();
            let nw: Vec<f64> = dw.iter().zip(&cw).map(|(a, b)| a + b).collect();
            let next = residual(&ny, dyt + cyt, &nw);
            if next.3.is_nan() || next.3 >= err {
                break;
            }
            (dy, dyt, dw) = (ny, dyt + cyt, nw);
            (e, e_t, e_f, err) = next;
        }
        (dy, dyt, dw)
    }

    /// One predictor-corrector step, or `None` if the Newton systems are
    /// numerically singular at this diagonal shift.
    fn step(&self, p: &Iterate, r: &Residuals, shift: f64, primal_du: bool) -> Option<(Iterate, f64)> {
        let (n, nb) = (self.dim(), self.nb());
        let total = p.x.len();
        let boxed = self.boxed;
        let ub = self.upper();
        let ncomp = if boxed { 2 * total } else { total } as f64;
        let slack: Vec<f64> = if boxed { p.x.iter().map(|v| ub - v).collect() } else { vec![] };
        let mu = (p.x.iter().zip(&p.z).map(|(a, b)| a * b).sum::<f64>()
            + slack.iter().zip(&p.zu).map(|(a, b)| a * b).sum::<f64>())
            / ncomp;
        let theta: Vec<f64> =
            (0..total).map(|j| 1.0 / (p.z[j] / p.x[j] + if boxed { p.zu[j] / slack[j] } else { 0.0 })).collect();
        let fac = self.factor(&theta, shift)?;

        let direction = |rxz: &[f64], rxu: &[f64]| {
            let r1: Vec<f64> =
                (0..total).map(|j| r.rc[j] - rxz[j] / p.x[j] + if boxed { rxu[j] / slack[j] } else { 0.0 }).collect();
            let tr1: Vec<f64> = theta.iter().zip(&r1).map(|(a, b)| a * b).collect();
            let atr = self.a_b(&tr1);
            let g: Vec<Vec<f64>> =
                r.rb.iter().zip(&atr).map(|(r, a)| r.iter().zip(a).map(|(r, a)| r + a).collect()).collect();
            let (mut dy, dyt, dw) = self.solve_refined(&fac, &theta, &g, r.rbt, &r.rf);
            // Whatever the reduced solve missed of the free-variable
            // equations is spread evenly over the blocks.
            let mut miss: Vec<f64> = r.rf.iter().map(|v| v - dyt).collect();
            for d in &dy {
                miss.iter_mut().zip(d).for_each(|(a, b)| *a -= b);
            }
            let share = 1.0 / dy.len() as f64;
            for d in dy.iter_mut() {
                d.iter_mut().zip(&miss).for_each(|(a, b)| *a += b * share);
            }
            let atdy = self.a_bt(&dy);
            let mut dx: Vec<f64> = (0..total).map(|j| theta[j] * (atdy[j] - r1[j])).collect();
            // du from the primal equations.
            if primal_du {
                dx.par_chunks_mut(nb).zip(&r.rb).zip(&self.signs).for_each(|((blk, rb), sg)| {
                    let mut t: Vec<f64> = dw.iter().zip(rb).map(|(a, b)| a - b).collect();
                    if self.with_p {
                        t.iter_mut().zip(&blk[n..]).for_each(|(a, b)| *a -= b);
                    }
                    blk[..n].copy_from_slice(&phi(sg, &t));
                });
            }
            let dzu: Vec<f64> =
                if boxed { (0..total).map(|j| (rxu[j] + p.zu[j] * dx[j]) / slack[j]).collect() } else { vec![] };
            // dz from the dual equations.
            let dz: Vec<f64> = (0..total).map(|j| r.rc[j] - atdy[j] + if boxed { dzu[j] } else { 0.0 }).collect();
            (dx, dz, dzu, dy, dyt, dw)
        };
        let max_steps = |dx: &[f64], dz: &[f64], dzu: &[f64]| {
            let (mut ap, mut ad) = (1.0f64, 1.0f64);
            for j in 0..total {
                if dx[j] < 0.0 {
                    ap = ap.min(-p.x[j] / dx[j]);
                }
                if dz[j] < 0.0 {
                    ad = ad.min(-p.z[j] / dz[j]);
                }
                if boxed {
                    if dx[j] > 0.0 {
                        ap = ap.min(slack[j] / dx[j]);
                    }
                    if dzu[j] < 0.0 {
                        ad = ad.min(-p.zu[j] / dzu[j]);
                    }
                }
            }
            (ap, ad)
        };

        // Predictor.
        let rxz: Vec<f64> = p.x.iter().zip(&p.z).map(|(a, b)| -a * b).collect();
        let rxu: Vec<f64> = slack.iter().zip(&p.zu).map(|(a, b)| -a * b).collect();
        let (dx, dz, dzu, ..) = direction(&rxz, &rxu);
        let (ap, ad) = max_steps(&dx, &dz, &dzu);
        let mut mu_aff = (0..total).map(|j| (p.x[j] + ap * dx[j]) * (p.z[j] + ad * dz[j])).sum::<f64>();
        if boxed {
            mu_aff += (0..total).map(|j| (slack[j] - ap * dx[j]) * (p.zu[j] + ad * dzu[j])).sum::<f64>();
        }
        let sigma = (mu_aff / ncomp / mu).powi(3).clamp(0.0, 1.0);

        // Corrector.
        let rxz: Vec<f64> = (0..total).map(|j| sigma * mu - p.x[j] * p.z[j] - dx[j] * dz[j]).collect();
        let rxu: Vec<f64> =
            if boxed { (0..total).map(|j| sigma * mu - slack[j] * p.zu[j] + dx[j] * dzu[j]).collect() } else { vec![] };
        let (dx, dz, dzu, dy, dyt, dw) = direction(&rxz, &rxu);
        if !(all_finite(dx.iter().chain(&dz).chain(&dzu).chain(&dw).chain(dy.iter().flatten())) && dyt.is_finite()) {
            return None;
        }
        let (ap, ad) = max_steps(&dx, &dz, &dzu);
        let (ap, ad) = ((ap * STEP_FRACTION).min(1.0), (ad * STEP_FRACTION).min(1.0));

        let mut q = p.clone();
        q.x.iter_mut().zip(&dx).for_each(|(a, b)| *a += ap * b);
        q.w.iter_mut().zip(&dw).for_each(|(a, b)| *a += ap * b);
        q.z.iter_mut().zip(&dz).for_each(|(a, b)| *a += ad * b);
        q.zu.iter_mut().zip(&dzu).for_each(|(a, b)| *a += ad * b);
        q.y.iter_mut().zip(&dy).for_each(|(yk, d)| yk.iter_mut().zip(d).for_each(|(a, b)| *a += ad * b));
        q.yt += ad * dyt;
        let ok = q.x.iter().all(|&v| v > 0.0 && (!boxed || v < ub)) && q.z.iter().chain(&q.zu).all(|&v| v > 0.0);
        ok.then_some((q, ap.min(ad)))
    }

    pub fn solve_ipm(&self) -> Result<IpmSolution> {
        let n = self.dim();
        let nb = self.nb();
        let kb = self.signs.len();
        let total = kb * nb;
        let start = 1.0 / n as f64;
        let mut p = Iterate {
            x: vec![if self.boxed { 0.5 } else { start }; total],
            z: vec![start; total],
            zu: if self.boxed { vec![start; total] } else { vec![] },
            w: vec![0.0; n],
            y: vec![vec![0.0; n]; kb],
            yt: 0.0,
        };

        let mut best: Option<IpmSolution> = None;
        let mut stale = 0;
        for it in 0..MAX_ITER {
            let r = self.residuals(&p);
            if r.accuracy.is_nan() {
                break;
            }
            if best.as_ref().is_none_or(|b| r.accuracy < b.accuracy) {
                let v = if self.with_p { p.x.chunks(nb).map(|b| b[n..].to_vec()).collect() } else { vec![] };
                best = Some(IpmSolution {
                    w: p.w.clone(),
                    v,
                    value: r.pobj,
                    dual_value: r.dobj,
                    iterations: it,
                    accuracy: r.accuracy,
                });
                stale = 0;
            } else {
                stale += 1;
            }
            let b = best.as_ref().map_or(f64::INFINITY, |b| b.accuracy);
            if b < IPM_TOL || (b < ACCEPT_TOL && stale >= PATIENCE) {
                break;
            }
            // A blocked step usually means the reduced solve was inaccurate;
            // retry with a shift, or with the plain Newton du, and keep the
            // longest step found.
            let mut chosen: Option<(Iterate, f64)> = None;
            for (shift, primal_du) in RESCUE.iter().flat_map(|&s| [(s, true), (s, false)]) {
                if let Some(c) = self.step(&p, &r, shift, primal_du) {
                    if chosen.as_ref().is_none_or(|b| c.1 > b.1) {
                        chosen = Some(c);
                    }
                    if chosen.as_ref().is_some_and(|b| b.1 >= MIN_STEP) {
                        break;
                    }
                }
            }
            match chosen {
                Some((q, _)) => p = q,
                None => break,
            }
        }
        match best {
            Some(b) if b.accuracy < ACCEPT_TOL => Ok(b),
            b => Err(Error::Lp(format!(
                "interior-point method stalled at accuracy {:.1e}",
                b.map_or(f64::INFINITY, |b| b.accuracy)
            ))),
        }
    }

    /// Moves an approximate solution onto the feasible set: `v_k` is
    /// clipped into its bounds and `w` shifted by a multiple of the identity
    /// (which every `Φ_k` fixes) until each `Φ_k(w − v_k)` is in bounds too.
    /// With a trace row the result is renormalized; with box bounds it is
    /// scaled back into the box. Returns `(w, v, shift)`.
    pub fn repair(&self, sol: &IpmSolution) -> (Vec<f64>, Vec<Vec<f64>>, f64) {
        let ub = self.upper();
        let v: Vec<Vec<f64>> = sol.v.iter().map(|vk| vk.iter().map(|x| x.clamp(0.0, ub)).collect()).collect();
        let eps = self
            .signs
            .par_iter()
            .enumerate()
            .map(|(k, sg)| {
                let d: Vec<f64> = match v.get(k) {
                    Some(vk) => sol.w.iter().zip(vk).map(|(a, b)| a - b).collect(),
                    None => sol.w.clone(),
                };
                phi(sg, &d).iter().fold(0.0f64, |e, &u| e.max(-u).max(if self.boxed { u - ub } else { 0.0 }))
            })
            .reduce(|| 0.0, f64::max);
        let mut w: Vec<f64> = sol.w.iter().map(|a| a + eps).collect();
        let scale = if self.trace {
            w.iter().sum::<f64>()
        } else if self.boxed {
            1.0 + 2.0 * eps
        } else {
            1.0
        };
        w.iter_mut().for_each(|a| *a /= scale);
        let v = v.into_iter().map(|vk| vk.into_iter().map(|a| a / scale).collect()).collect();
        (w, v, eps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_is_involution() {
        let sign = vec![1.0, -1.0, 1.0, 1.0, -1.0, 1.0, -1.0, -1.0];
        let x: Vec<f64> = (0..8).map(|i| i as f64 * 0.3 - 1.0).collect();
        let back = phi(&sign, &phi(&sign, &x));
        assert!(back.iter().zip(&x).all(|(a, b)| (a - b).abs() < 1e-12));
    }

    #[test]
    fn dense_block_matches_products() {
        let sign = vec![1.0, -1.0, -1.0, 1.0];
        let theta = vec![0.5, 2.0, 1.0, 3.0];
        let mut m = vec![0.0; 16];
        add_phi_diag_phi(&sign, &theta, &mut m);
        conjugate_by_h(&mut m, 4);
        for b in 0..4 {
            let mut e = vec![0.0; 4];
            e[b] = 1.0;
            let mut t = phi(&sign, &e);
            t.iter_mut().zip(&theta).for_each(|(a, th)| *a *= th);
            let col = phi(&sign, &t);
            for a in 0..4 {
                assert!((m[a * 4 + b] - col[a]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn repair_restores_feasibility() {
        // Bell pair, single bipartition.
        let sign = vec![1.0, -1.0, -1.0, -1.0];
        let cost = [1.0, 0.0, 0.0, 0.0];
        let prog = Structured { signs: vec![sign.clone()], cost: &cost, with_p: true, boxed: false, trace: true };
        let sol = IpmSolution {
            w: vec![-1.0, 0.0, 0.0, 0.0],
            v: vec![vec![0.0, 0.0, -1e-9, 0.0]],
            value: 0.0,
            dual_value: 0.0,
            iterations: 0,
            accuracy: 0.0,
        };
        let (w, v, eps) = prog.repair(&sol);
        assert!((eps - 0.5).abs() < 1e-12);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(v[0].iter().all(|&a| a >= 0.0));
        let d: Vec<f64> = w.iter().zip(&v[0]).map(|(a, b)| a - b).collect();
        assert!(phi(&sign, &d).iter().all(|&u| u >= -1e-15));
    }
}
