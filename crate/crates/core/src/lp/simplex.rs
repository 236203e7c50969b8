//! Dense bounded two-phase primal simplex.
//!
//! Solves `min cᵀx` subject to `Ax = b`, `l ≤ x ≤ u` where every lower bound
//! is `0` or `−∞` and upper bounds are finite or `+∞`. Nonbasic variables sit
//! at a finite bound, or at zero when free. Singleton columns that can absorb
//! their row's residual form the starting basis; other rows get artificials.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub const PIVOT_TOL: f64 = 1e-10;
pub const FEAS_TOL: f64 = 1e-9;
pub const MAX_ITERATIONS: usize = 1_000_000;

/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const STALL_LIMIT: usize = 50;

#[derive(Clone, Debug, Default)]
pub struct LpProblem {
    pub c: Vec<f64>,
    /// Sparse rows: `(column, coefficient)`.
    pub rows: Vec<Vec<(usize, f64)>>,
    pub b: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LpProblem {
    pub fn with_vars(n: usize) -> Self {
        LpProblem { c: vec![0.0; n], rows: vec![], b: vec![], lower: vec![0.0; n], upper: vec![f64::INFINITY; n] }
    }

    pub fn num_vars(&self) -> usize {
        self.c.len()
    }

    pub fn add_row(&mut self, row: Vec<(usize, f64)>, rhs: f64) {
        self.rows.push(row);
        self.b.push(rhs);
    }

    /// Bytes of the dense tableau the solver would allocate.
    pub fn tableau_bytes(rows: usize, vars: usize) -> usize {
        (rows + 1) * (vars + rows + 1) * std::mem::size_of::<f64>()
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n || self.rows.len() != self.b.len() {
            return Err(Error::Lp("inconsistent problem dimensions".into()));
        }
        for (j, (&l, &u)) in self.lower.iter().zip(&self.upper).enumerate() {
            if !(l == 0.0 || l == f64::NEG_INFINITY) || u < l || u.is_nan() {
                return Err(Error::Lp(format!("unsupported bounds [{l}, {u}] on variable {j}")));
            }
        }
        if self.rows.iter().flatten().any(|&(j, v)| j >= n || !v.is_finite()) {
            return Err(Error::Lp("row references an invalid variable".into()));
        }
        Ok(())
    }

    /// Largest `|Ax − b|` and bound violation at `x`.
    pub fn residuals(&self, x: &[f64]) -> (f64, f64) {
        let eq = self
            .rows
            .iter()
            .zip(&self.b)
            .map(|(r, &b)| (r.iter().map(|&(j, v)| v * x[j]).sum::<f64>() - b).abs())
            .fold(0.0, f64::max);
        let bound = x
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(&v, (&l, &u))| (l - v).max(v - u).max(0.0))
            .fold(0.0, f64::max);
        (eq, bound)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: f64,
    pub primal: Vec<f64>,
    pub iterations: usize,
    /// Sum of artificial values left after phase one.
    pub infeasibility: f64,
}

struct Tableau {
    m: usize,
    cols: usize,
    /// `m` constraint rows then the reduced-cost row, each `cols` wide.
    t: Vec<f64>,
    basis: Vec<usize>,
    x: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    iterations: usize,
}

enum Step {
    Optimal,
    Unbounded,
    Limit,
}

impl Tableau {
    fn row(&self, i: usize) -> &[f64] {
        &self.t[i * self.cols..(i + 1) * self.cols]
    }

    fn is_basic(&self) -> Vec<bool> {
        let mut v = vec![false; self.cols];
        self.basis.iter().for_each(|&j| v[j] = true);
        v
    }

    /// Loads cost vector `c` as the reduced-cost row.
    fn set_costs(&mut self, c: &[f64]) {
        let (m, cols) = (self.m, self.cols);
        let mut d = c.to_vec();
        for i in 0..m {
            let cb = c[self.basis[i]];
            if cb != 0.0 {
                let r = &self.t[i * cols..(i + 1) * cols];
                d.iter_mut().zip(r).for_each(|(dj, &a)| *dj -= cb * a);
            }
        }
        self.t[m * cols..].copy_from_slice(&d);
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let cols = self.cols;
        let (before, rest) = self.t.split_at_mut(r * cols);
        let (prow, after) = rest.split_at_mut(cols);
        let inv = 1.0 / prow[j];
        prow.iter_mut().for_each(|v| *v *= inv);
        prow[j] = 1.0;
        let nz: Vec<(usize, f64)> = prow.iter().enumerate().filter(|(_, &v)| v != 0.0).map(|(k, &v)| (k, v)).collect();
        let update = |row: &mut [f64]| {
            let f = row[j];
            if f != 0.0 {
                for &(k, v) in &nz {
                    row[k] -= f * v;
                }
                row[j] = 0.0;
            }
        };
        if nz.len() * (self.m + 1) > 1 << 16 {
            before.par_chunks_mut(cols).for_each(update);
            after.par_chunks_mut(cols).for_each(update);
        } else {
            before.chunks_mut(cols).for_each(update);
            after.chunks_mut(cols).for_each(update);
        }
        self.basis[r] = j;
    }

    /// Runs simplex iterations on the current reduced-cost row.
    fn optimize(&mut self, iteration_cap: usize) -> Step {
        let mut stalled = 0usize;
        loop {
            if self.iterations >= iteration_cap {
                return Step::Limit;
            }
            let basic = self.is_basic();
            let d = self.row(self.m);
            let bland = stalled > STALL_LIMIT;
            let mut enter: Option<(usize, f64)> = None;
            let mut best = FEAS_TOL;
            for (j, &dj) in d.iter().enumerate() {
                if basic[j] || self.upper[j] - self.lower[j] <= 0.0 {
                    continue;
                }
                let at_upper = self.x[j] >= self.upper[j];
                let at_lower = self.x[j] <= self.lower[j];
                let dir = if dj < -FEAS_TOL && !at_upper {
                    1.0
                } else if dj > FEAS_TOL && !at_lower {
                    -1.0
                } else {
                    continue;
                };
                if bland {
                    enter = Some((j, dir));
                    break;
                }
                if dj.abs() > best {
                    best = dj.abs();
                    enter = Some((j, dir));
                }
            }
            let Some((j, dir)) = enter else {
                return Step::Optimal;
            };

            // Ratio test.
            let mut step = self.upper[j] - self.lower[j];
            let mut leave: Option<(usize, f64)> = None;
            let mut leave_piv = 0.0;
            for i in 0..self.m {
                let a = self.t[i * self.cols + j] * dir;
                if a.abs() <= PIVOT_TOL {
                    continue;
                }
                let bi = self.basis[i];
                let xb = self.x[bi];
                let (lim, bound) = if a > 0.0 {
                    if self.lower[bi] == f64::NEG_INFINITY {
                        continue;
                    }
                    (((xb - self.lower[bi]) / a).max(0.0), self.lower[bi])
                } else {
                    if self.upper[bi] == f64::INFINITY {
                        continue;
                    }
                    (((self.upper[bi] - xb) / -a).max(0.0), self.upper[bi])
                };
                let better = match leave {
                    None => lim < step,
                    Some((r, _)) => {
                        if lim < step - PIVOT_TOL {
                            true
                        } else if lim <= step + PIVOT_TOL {
                            if bland {
                                bi < self.basis[r]
                            } else {
                                a.abs() > leave_piv
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    step = lim;
                    leave = Some((i, bound));
                    leave_piv = a.abs();
                }
            }
            if !step.is_finite() {
                return Step::Unbounded;
            }
            self.iterations += 1;
            stalled = if step <= FEAS_TOL { stalled + 1 } else { 0 };

            // Move along the edge.
            let delta = dir * step;
            for i in 0..self.m {
                let a = self.t[i * self.cols + j];
                if a != 0.0 {
                    self.x[self.basis[i]] -= a * delta;
                }
            }
            self.x[j] += delta;
            match leave {
                None => {
                    // Bound flip.
                    self.x[j] = if dir > 0.0 { self.upper[j] } else { self.lower[j] };
                }
                Some((r, bound)) => {
                    let out = self.basis[r];
                    self.pivot(r, j);
                    self.x[out] = bound;
                }
            }
        }
    }
}

/// Solves the problem; the returned primal is clipped onto the bounds.
pub fn simplex_solve(p: &LpProblem) -> Result<LpSolution> {
    p.validate()?;
    let (m, n) = (p.rows.len(), p.num_vars());

    // Nonbasic start values and per-row residuals.
    let mut x0: Vec<f64> = p.lower.iter().map(|&l| if l.is_finite() { l } else { 0.0 }).collect();
    let resid: Vec<f64> =
        p.rows.iter().zip(&p.b).map(|(r, &b)| b - r.iter().map(|&(j, v)| v * x0[j]).sum::<f64>()).collect();

    // Crash basis from singleton columns.
    let mut count = vec![0usize; n];
    p.rows.iter().flatten().filter(|(_, v)| *v != 0.0).for_each(|&(j, _)| count[j] += 1);
    let mut used = vec![false; n];
    let mut basis = vec![usize::MAX; m];
    for (i, row) in p.rows.iter().enumerate() {
        for &(j, v) in row {
            if count[j] == 1 && !used[j] && v.abs() > PIVOT_TOL {
                let val = resid[i] / v;
                if val >= p.lower[j] - FEAS_TOL && val <= p.upper[j] + FEAS_TOL {
                    basis[i] = j;
                    used[j] = true;
                    break;
                }
            }
        }
    }
    let arts: Vec<usize> = (0..m).filter(|&i| basis[i] == usize::MAX).collect();
    let cols = n + arts.len();
    let mut t = vec![0.0; (m + 1) * cols];
    for (i, row) in p.rows.iter().enumerate() {
        for &(j, v) in row {
            t[i * cols + j] += v;
        }
    }
    let mut lower = p.lower.clone();
    let mut upper = p.upper.clone();
    for (k, &i) in arts.iter().enumerate() {
        let col = n + k;
        t[i * cols + col] = if resid[i] < 0.0 { -1.0 } else { 1.0 };
        basis[i] = col;
        lower.push(0.0);
        upper.push(f64::INFINITY);
        x0.push(0.0);
    }
    // Normalize crash rows so each basic column is a unit vector.
    for i in 0..m {
        let j = basis[i];
        let piv = t[i * cols + j];
        if piv != 1.0 {
            t[i * cols..(i + 1) * cols].iter_mut().for_each(|v| *v /= piv);
        }
        x0[j] = resid[i] / piv;
    }
    let mut tab = Tableau { m, cols, t, basis, x: x0, lower, upper, iterations: 0 };

    let mut infeasibility = 0.0;
    if !arts.is_empty() {
        let mut c1 = vec![0.0; cols];
        c1[n..].iter_mut().for_each(|v| *v = 1.0);
        tab.set_costs(&c1);
        match tab.optimize(MAX_ITERATIONS) {
            Step::Limit => return Ok(finish(p, &tab, LpStatus::IterationLimit, 0.0)),
            Step::Unbounded => return Err(Error::Lp("phase one reported an unbounded ray".into())),
            Step::Optimal => {}
        }
        infeasibility = tab.x[n..].iter().sum();
        if infeasibility > FEAS_TOL * (1.0 + p.b.iter().fold(0.0f64, |a, &v| a.max(v.abs()))) {
            return Ok(finish(p, &tab, LpStatus::Infeasible, infeasibility));
        }
        for j in n..cols {
            tab.upper[j] = 0.0;
            tab.x[j] = 0.0;
        }
    }
    let mut c2 = p.c.clone();
    c2.resize(cols, 0.0);
    tab.set_costs(&c2);
    let status = match tab.optimize(MAX_ITERATIONS) {
        Step::Optimal => LpStatus::Optimal,
        Step::Unbounded => LpStatus::Unbounded,
        Step::Limit => LpStatus::IterationLimit,
    };
    Ok(finish(p, &tab, status, infeasibility))
}

fn finish(p: &LpProblem, tab: &Tableau, status: LpStatus, infeasibility: f64) -> LpSolution {
    let n = p.num_vars();
    let primal: Vec<f64> = (0..n).map(|j| tab.x[j].max(p.lower[j]).min(p.upper[j])).collect();
    let value = primal.iter().zip(&p.c).map(|(x, c)| x * c).sum();
    LpSolution { status, value, primal, iterations: tab.iterations, infeasibility }
}
