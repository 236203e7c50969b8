//! The acceptance suite, shared by `graphwit selftest` and the `acceptance`
//! test target. Each criterion runs a list of checks and passes only if all
//! of them do.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::{self, RefTolerance};
use crate::dense::checks::{
    flip_pair_pt_defect, random_bipartition, random_connected_graph, schmidt_bound, torus_vanishing_element,
    vanishing_element,
};
use crate::dense::{materialize_diag_op, negativity, verify_witness, DenseMode};
use crate::diagonal::{DiagonalOperator, GraphDiagonalState, NONNEG_TOL};
use crate::error::Result;
use crate::graph::{canonical_masks, sample_canonical_masks, valid_subsets, Bipartition, Family, Graph};
use crate::lp::{certify_decomposable, monotone_n, threshold, Mode};
use crate::rational::{self, Q};
use crate::witness::{
    alternating_bsets, catalog_witness, certificates_for, combined_witness, corollary_tolerance, lemma3_witness,
    lemma5_ppt_witness, projector_witness, torus_witness, two_setting_improved, two_setting_witness, Class,
    CombineMode, WitnessRecord,
};

pub const CRITERIA: [usize; 8] = [1, 2, 3, 4, 5, 6, 7, 8];

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub seed: u64,
    /// Bipartitions drawn by the sampled 16-qubit sweep.
    pub sample: usize,
    /// Also sweep all 32767 bipartitions of the 16-qubit witnesses.
    pub full_sweep: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: 20240611, sample: 1000, full_sweep: true }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: usize,
    pub title: &'static str,
    pub pass: bool,
    pub checks: Vec<Check>,
    /// Observations that do not enter the verdict.
    pub notes: Vec<String>,
    pub seconds: f64,
}

impl Outcome {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let passed = self.checks.iter().filter(|c| c.pass).count();
        write!(
            f,
            "criterion {}: {} [{}/{} checks, {:.1}s] {}",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            passed,
            self.checks.len(),
            self.seconds,
            self.title
        )
    }
}

struct Log {
    checks: Vec<Check>,
    notes: Vec<String>,
}

impl Log {
    fn new() -> Self {
        Log { checks: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, label: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { label: label.into(), pass, detail: detail.into() });
    }

    /// Records an error from a step as a failed check.
    fn try_check(&mut self, label: impl Into<String>, f: impl FnOnce() -> Result<(bool, String)>) {
        let label = label.into();
        match f() {
            Ok((pass, detail)) => self.check(label, pass, detail),
            Err(e) => self.check(label, false, format!("error: {e}")),
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

pub fn title(id: usize) -> &'static str {
    match id {
        1 => "LP thresholds of the 19 catalog classes",
        2 => "analytic tolerances equal the LP optimum",
        3 => "closed-form tolerances, exact",
        4 => "fully PPT sweeps at 7 and 16 qubits",
        5 => "dense oracle agreement",
        6 => "entanglement monotone",
        7 => "matrix-element and Schmidt lemma suites",
        8 => "improved two-setting witness",
        _ => "unknown criterion",
    }
}

/// Runs one criterion; `None` for an unknown id.
pub fn run(id: usize, opts: &Options) -> Option<Outcome> {
    let f: fn(&mut Log, &Options) = match id {
        1 => lp_thresholds,
        2 => analytic_vs_lp,
        3 => closed_forms,
        4 => ppt_sweeps,
        5 => dense_agreement,
        6 => monotone,
        7 => lemma_suites,
        8 => improved_two_setting,
        _ => return None,
    };
    let start = Instant::now();
    let mut log = Log::new();
    f(&mut log, opts);
    Some(Outcome {
        id,
        title: title(id),
        pass: !log.checks.is_empty() && log.checks.iter().all(|c| c.pass),
        checks: log.checks,
        notes: log.notes,
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn rng_for(opts: &Options, id: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed ^ id.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn named(f: Family) -> Graph {
    Graph::named(&f).expect("fixed family")
}

fn exact_tol(w: &WitnessRecord) -> Option<Q> {
    w.tolerance.and_then(|t| t.exact)
}

fn lp_thresholds(log: &mut Log, _: &Options) {
    for e in catalog::entries() {
        let start = Instant::now();
        let res = threshold(&e.graph, Mode::FullyDecomposable);
        let secs = start.elapsed().as_secs_f64();
        let label = format!("No. {} {}", e.id, e.name);
        let (want, tol) = match e.reference {
            RefTolerance::Exact(q) => (rational::to_f64(&q), 1e-6),
            RefTolerance::Approx(v) => (v, 5e-4),
        };
        match res {
            Ok(t) => {
                let p = t.p.unwrap_or(f64::NAN);
                let dev = (p - want).abs();
                log.check(
                    &label,
                    dev <= tol,
                    format!("p = {p:.9}, reference {} ({want:.9}), |Δ| = {dev:.1e} ≤ {tol:.0e}", e.reference.label()),
                );
                if e.graph.n() == 6 {
                    log.check(format!("{label} runtime"), secs <= 120.0, format!("{secs:.2}s ≤ 120s"));
                }
            }
            Err(err) => log.check(label, false, format!("error: {err}")),
        }
    }
}

fn analytic_vs_lp(log: &mut Log, _: &Options) {
    let cases: [(usize, CombineMode, Vec<Vec<usize>>); 3] = [
        (4, CombineMode::Lemma4, vec![vec![0, 3]]),
        (6, CombineMode::Lemma4, vec![vec![0, 3], vec![4, 3]]),
        (11, CombineMode::Lemma4, vec![vec![0, 3], vec![1, 3], vec![0, 2], vec![1, 2]]),
    ];
    for (id, mode, sets) in cases {
        log.try_check(format!("No. {id}"), || {
            let g = &catalog::entry(id)?.graph;
            let w = match sets.as_slice() {
                [one] => lemma3_witness(g, one)?,
                _ => combined_witness(g, &sets, mode, false)?,
            };
            let analytic = w.tolerance.map_or(f64::NAN, |t| t.value);
            let lp = threshold(g, Mode::FullyDecomposable)?.p.unwrap_or(f64::NAN);
            let dev = (analytic - lp).abs();
            Ok((dev <= 1e-6, format!("analytic {analytic:.9} vs LP {lp:.9}, |Δ| = {dev:.1e}")))
        });
    }
}

/// The sixteen-qubit witnesses: the four-member set witness and the two
/// fully PPT combinations on the open 4×4 grid, and the torus witness.
fn grid_witnesses() -> Result<Vec<(&'static str, WitnessRecord)>> {
    let grid = named(Family::Grid { w: 4, h: 4, periodic: false });
    let pool = [0, 2, 5, 7, 8, 10, 13, 15];
    let subsets = valid_subsets(&grid, &pool)?;
    Ok(vec![
        ("lemma5 grid 4x4 {1,4,10,16}", lemma5_ppt_witness(&grid, &[0, 3, 9, 15])?),
        (
            "lemma6 grid 4x4, four sets",
            combined_witness(&grid, &[vec![0, 10], vec![5, 15], vec![2, 8], vec![7, 13]], CombineMode::Lemma6, false)?,
        ),
        ("lemma6 grid 4x4, all valid subsets", combined_witness(&grid, &subsets, CombineMode::Lemma6, false)?),
        ("torus 4x4", torus_witness(&named(Family::Grid { w: 4, h: 4, periodic: true }))?),
    ])
}

fn cl7_ppt_witnesses() -> Result<Vec<(&'static str, WitnessRecord)>> {
    let cl7 = named(Family::Linear(7));
    Ok(vec![
        ("lemma5 Cl7 {1,4,7}", lemma5_ppt_witness(&cl7, &[0, 3, 6])?),
        ("lemma6 Cl7, two sets", combined_witness(&cl7, &[vec![0, 4], vec![2, 6]], CombineMode::Lemma6, false)?),
        (
            "lemma6 Cl7, three sets",
            combined_witness(&cl7, &[vec![0, 4], vec![2, 6], vec![0, 6]], CombineMode::Lemma6, false)?,
        ),
    ])
}

fn closed_forms(log: &mut Log, _: &Options) {
    let q = |a: i128, b: i128| Q::new(a, b);
    fn exact(log: &mut Log, label: &str, got: Option<Q>, want: Q) {
        let shown = got.as_ref().map_or("none".to_string(), rational::format);
        log.check(label, got == Some(want), format!("{shown} (want {})", rational::format(&want)));
    }
    let grid = named(Family::Grid { w: 4, h: 4, periodic: false });
    let one = Q::from_integer(1);
    let closed = one / (one - q(1, 1 << 15) + q(5, 16));
    match lemma3_witness(&grid, &[0, 3, 9, 15]) {
        Ok(w) => {
            exact(log, "lemma3 grid 4x4 |B| = 4", exact_tol(&w), closed);
            let formula = corollary_tolerance(16, 4).ok().and_then(|t| t.0.exact);
            exact(log, "closed form for n = 16, b = 4", formula, closed);
        }
        Err(e) => log.check("lemma3 grid 4x4 |B| = 4", false, format!("error: {e}")),
    }
    match cl7_ppt_witnesses() {
        Ok(ws) => {
            for ((label, w), want) in ws.iter().zip([q(64, 109), q(64, 113), q(64, 111)]) {
                exact(log, label, exact_tol(w), want);
            }
        }
        Err(e) => log.check("seven-qubit witnesses", false, format!("error: {e}")),
    }
    match grid_witnesses() {
        Ok(ws) => {
            let n_sets = ws[2].1.bsets.len();
            log.check("valid subsets of {1,3,6,8,9,11,14,16}", n_sets == 13, format!("{n_sets} sets (want 13)"));
            for ((label, w), want) in
                ws.iter().zip([q(32768, 51455), q(32768, 54335), q(32768, 49791), q(32768, 53503)])
            {
                exact(log, label, exact_tol(w), want);
            }
        }
        Err(e) => log.check("sixteen-qubit witnesses", false, format!("error: {e}")),
    }
}

fn sweep_check(log: &mut Log, label: &str, w: &WitnessRecord, masks: &[usize], limit: Duration) {
    let start = Instant::now();
    let res = w.op.sweep().run(masks);
    let took = start.elapsed();
    let worst = res.iter().copied().min_by(|a, b| a.1.total_cmp(&b.1));
    let ok = res.iter().all(|&(_, v)| v >= -NONNEG_TOL);
    let (wm, wv) = worst.unwrap_or((0, f64::NAN));
    log.check(
        format!("{label}: {} bipartitions", masks.len()),
        ok,
        format!("min PT diagonal entry {wv:.3e} (mask {wm:#x})"),
    );
    log.check(
        format!("{label}: sweep time"),
        took <= limit,
        format!("{:.2}s ≤ {:.0}s", took.as_secs_f64(), limit.as_secs_f64()),
    );
}

fn ppt_sweeps(log: &mut Log, opts: &Options) {
    match cl7_ppt_witnesses() {
        Ok(ws) => {
            let masks = canonical_masks(7);
            for (label, w) in &ws {
                sweep_check(log, label, w, &masks, Duration::from_secs(1));
            }
        }
        Err(e) => log.check("seven-qubit witnesses", false, format!("error: {e}")),
    }
    let ws = match grid_witnesses() {
        Ok(ws) => ws,
        Err(e) => return log.check("sixteen-qubit witnesses", false, format!("error: {e}")),
    };
    let all = canonical_masks(16);
    let sample = sample_canonical_masks(16, opts.sample, opts.seed);
    for (label, w) in &ws {
        sweep_check(log, &format!("{label} (sampled)"), w, &sample, Duration::from_secs(20));
        if opts.full_sweep {
            sweep_check(log, label, w, &all, Duration::from_secs(600));
        }
    }
    if !opts.full_sweep {
        log.note("full 16-qubit sweeps skipped");
    }
}

fn random_operator(rng: &mut ChaCha8Rng, g: &Graph) -> DiagonalOperator {
    DiagonalOperator::from_diag(g, (0..g.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect()).expect("sized by graph")
}

/// A witness, its name and the sets behind its certificates.
type Labelled = (String, WitnessRecord, Option<Vec<Vec<usize>>>);

type Draw<'a> = Box<dyn FnMut(&mut ChaCha8Rng) -> Result<Option<f64>> + 'a>;

/// Analytic witnesses up to eight qubits, each with its claimed class and,
/// for decomposable ones, the sets its `P_M` certificates come from.
fn small_analytic_witnesses() -> Result<Vec<Labelled>> {
    let cl4 = named(Family::Linear(4));
    let cl7 = named(Family::Linear(7));
    let y5 = catalog::entry(6)?.graph.clone();
    let h6 = catalog::entry(11)?.graph.clone();
    let y5_sets = vec![vec![0, 3], vec![4, 3]];
    let h6_sets = vec![vec![0, 3], vec![1, 3], vec![0, 2], vec![1, 2]];
    let (b1, b2) = alternating_bsets(7);
    let mut out: Vec<Labelled> = vec![
        ("projector Cl5".into(), projector_witness(&named(Family::Linear(5)))?, None),
        ("projector ring 8".into(), projector_witness(&named(Family::Ring(8)))?, None),
        ("lemma3 Cl4 {1,4}".into(), lemma3_witness(&cl4, &[0, 3])?, Some(vec![vec![0, 3]])),
        (
            "lemma3 Cl8 {1,4,7}".into(),
            lemma3_witness(&named(Family::Linear(8)), &[0, 3, 6])?,
            Some(vec![vec![0, 3, 6]]),
        ),
        ("lemma4 Y5".into(), combined_witness(&y5, &y5_sets, CombineMode::Lemma4, false)?, Some(y5_sets)),
        ("lemma4 H6".into(), combined_witness(&h6, &h6_sets, CombineMode::Lemma4, false)?, Some(h6_sets)),
        ("two-setting Cl7".into(), two_setting_witness(&cl7)?, None),
        ("improved two-setting Cl7".into(), two_setting_improved(&cl7, &b1, &b2)?, None),
    ];
    for (label, w) in cl7_ppt_witnesses()? {
        out.push((label.into(), w, None));
    }
    for e in catalog::entries() {
        out.push((format!("catalog No. {}", e.id), catalog_witness(e.id)?, None));
    }
    Ok(out)
}

fn dense_agreement(log: &mut Log, opts: &Options) {
    let mut rng = rng_for(opts, 5);
    let mut worst = 0.0f64;
    let mut failed = None;
    for k in 0..50 {
        let n = rng.gen_range(2..=6);
        let g = random_connected_graph(&mut rng, n, 0.5);
        let op = random_operator(&mut rng, &g);
        let run = || -> Result<f64> {
            let dense = materialize_diag_op(&op)?;
            let mut dev = 0.0f64;
            for mask in canonical_masks(n) {
                let fast = materialize_diag_op(&op.partial_transpose(&Bipartition::new(n, mask)?))?;
                dev = dev.max(fast.max_abs_diff(&dense.partial_transpose(mask)));
            }
            Ok(dev)
        };
        match run() {
            Ok(d) => worst = worst.max(d),
            Err(e) => failed = Some(format!("operator {k}: {e}")),
        }
    }
    match failed {
        Some(msg) => log.check("diagonal PT vs dense PT on 50 operators", false, msg),
        None => log.check(
            "diagonal PT vs dense PT on 50 operators",
            worst < 1e-12,
            format!("max deviation {worst:.2e} < 1e-12, every canonical bipartition"),
        ),
    }

    let ws = match small_analytic_witnesses() {
        Ok(ws) => ws,
        Err(e) => return log.check("analytic witnesses", false, format!("error: {e}")),
    };
    for (label, w, sets) in ws {
        log.try_check(label, || {
            let class = w.method.claimed_class();
            let (report, source) = match class {
                Class::FullyPpt => (verify_witness(&w.op, DenseMode::FullyPpt, None)?, "no"),
                Class::FullyDecomposable => {
                    let (certs, source) = match sets {
                        Some(s) => {
                            (certificates_for(w.graph(), &s)?.iter().map(|c| c.to_certificate()).collect(), "analytic")
                        }
                        None => {
                            let rep = certify_decomposable(&w.op)?;
                            match rep.certificates() {
                                Some(c) => (c, "LP"),
                                None => {
                                    let bad: Vec<usize> = rep.failures().map(|r| r.mask).collect();
                                    return Ok((false, format!("no LP certificate for masks {bad:?}")));
                                }
                            }
                        }
                    };
                    (verify_witness(&w.op, DenseMode::Decomposable, Some(&certs))?, source)
                }
            };
            let min = report.per_m.iter().map(|r| r.min_eig).fold(f64::INFINITY, f64::min);
            let bad: Vec<usize> = report.failures().map(|r| r.mask).collect();
            Ok((
                report.pass,
                format!(
                    "{class:?} with {source} certificates, n = {}, min eigenvalue {min:.3e}, failing masks {bad:?}",
                    w.graph().n()
                ),
            ))
        });
    }
}

/// Random weights raised to a power so that a fair share of the draws are
/// entangled.
fn random_state(rng: &mut ChaCha8Rng, g: &Graph) -> GraphDiagonalState {
    let raw: Vec<f64> = (0..g.dim()).map(|_| rng.gen::<f64>().powi(4) + 1e-12).collect();
    let total: f64 = raw.iter().sum();
    let mut probs: Vec<f64> = raw.iter().map(|v| v / total).collect();
    let drift: f64 = 1.0 - probs.iter().sum::<f64>();
    probs[0] += drift;
    GraphDiagonalState::new(g, probs).expect("normalized")
}

fn monotone(log: &mut Log, opts: &Options) {
    for e in catalog::entries() {
        log.try_check(format!("pure No. {} {}", e.id, e.name), || {
            let v = monotone_n(&GraphDiagonalState::pure(&e.graph))?.value;
            Ok(((v - 0.5).abs() <= 1e-6, format!("N = {v:.10}")))
        });
    }

    let mut rng = rng_for(opts, 6);
    let bell = named(Family::Linear(2));
    let (mut worst, mut entangled, mut err) = (0.0f64, 0, None);
    for k in 0..100 {
        let s = random_state(&mut rng, &bell);
        let mut run = || -> Result<f64> {
            let n = monotone_n(&s)?.value;
            let rho = materialize_diag_op(&DiagonalOperator::from_diag(&bell, s.probs().to_vec())?)?;
            let neg = negativity(&rho, 0b01)?;
            if neg > 1e-9 {
                entangled += 1;
            }
            Ok((n - neg).abs())
        };
        match run() {
            Ok(d) => worst = worst.max(d),
            Err(e) => err = Some(format!("state {k}: {e}")),
        }
    }
    match err {
        Some(msg) => log.check("two-qubit states vs negativity", false, msg),
        None => log.check(
            "two-qubit states vs negativity",
            worst <= 1e-7,
            format!("100 states ({entangled} entangled), max |N − negativity| = {worst:.2e}"),
        ),
    }

    let (mut top, mut err) = (f64::NEG_INFINITY, None);
    for k in 0..100 {
        let n = rng.gen_range(2..=5);
        let g = random_connected_graph(&mut rng, n, 0.5);
        let s = random_state(&mut rng, &g);
        match monotone_n(&s) {
            Ok(m) => top = top.max(m.value),
            Err(e) => err = Some(format!("state {k} (n = {n}): {e}")),
        }
    }
    match err {
        Some(msg) => log.check("upper bound on random states", false, msg),
        None => log.check("upper bound on random states", top <= 0.5 + 1e-9, format!("100 states, max N = {top:.10}")),
    }
    log.note("monotone restricted to graph-diagonal states and witnesses");
}

fn lemma_suites(log: &mut Log, opts: &Options) {
    const INSTANCES: usize = 200;
    let mut rng = rng_for(opts, 7);
    let mut suite = |label: &str, mut draw: Draw<'_>| {
        let (mut count, mut tries, mut worst) = (0usize, 0usize, 0.0f64);
        while count < INSTANCES && tries < 100 * INSTANCES {
            tries += 1;
            match draw(&mut rng) {
                Ok(Some(d)) => {
                    count += 1;
                    worst = worst.max(d);
                }
                Ok(None) => {}
                Err(e) => return log.check(label, false, format!("error: {e}")),
            }
        }
        log.check(label, count >= INSTANCES && worst <= 1e-12, format!("{count} instances, max deviation {worst:.2e}"));
    };
    suite(
        "PT matrix elements vanish off one-sided closed neighborhoods",
        Box::new(|rng| {
            let n = rng.gen_range(2..=6);
            let g = random_connected_graph(rng, n, 0.5);
            let mask = random_bipartition(rng, n);
            let (a, c) = (rng.gen_range(0..g.dim()), rng.gen_range(0..g.dim()));
            vanishing_element(&g, mask, a, c)
        }),
    );
    suite(
        "flip pairs are invariant under single-qubit PT",
        Box::new(|rng| {
            let n = rng.gen_range(2..=6);
            let g = random_connected_graph(rng, n, 0.5);
            let (k, a) = (rng.gen_range(0..n), rng.gen_range(0..g.dim()));
            flip_pair_pt_defect(&g, k, a).map(Some)
        }),
    );
    let torus = named(Family::Grid { w: 3, h: 3, periodic: true });
    suite(
        "torus 3x3 PT elements vanish",
        Box::new(|rng| torus_vanishing_element(&torus, rng.gen_range(0..9), rng.gen_range(0..512))),
    );
    suite(
        "largest squared Schmidt coefficient ≤ 2^-m",
        Box::new(|rng| {
            let n = rng.gen_range(2..=8);
            let g = random_connected_graph(rng, n, 0.4);
            let b = schmidt_bound(&g, random_bipartition(rng, n))?;
            Ok(Some((b.max_lambda_sq - b.bound).max(0.0)))
        }),
    );
}

fn improved_two_setting(log: &mut Log, _: &Options) {
    let cl7 = named(Family::Linear(7));
    let (b1, b2) = alternating_bsets(7);
    let (base, imp) = match (two_setting_witness(&cl7), two_setting_improved(&cl7, &b1, &b2)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return log.check("construction", false, format!("error: {e}")),
    };
    let (d0, d1) = (base.op.diag(), imp.op.diag());
    let above = d1.iter().zip(d0).filter(|(a, b)| a > b).count();
    let below = d1.iter().zip(d0).filter(|(a, b)| a < b).count();
    log.check("elementwise ≤ the two-setting witness", above == 0, format!("{above} entries above"));
    log.check("strictly smaller somewhere", below >= 1, format!("{below} of 128 entries smaller"));
    log.try_check("fully PPT under dense verification", || {
        let r = verify_witness(&imp.op, DenseMode::FullyPpt, None)?;
        let min = r.per_m.iter().map(|m| m.min_eig).fold(f64::INFINITY, f64::min);
        let bad = r.failures().count();
        Ok((r.pass, format!("{bad} of {} bipartitions fail, min eigenvalue {min:.3e}", r.per_m.len())))
    });
    let pt_invariant = canonical_masks(7).iter().all(|&m| {
        Bipartition::new(7, m).map(|b| imp.op.partial_transpose(&b).diag() == imp.op.diag()).unwrap_or(false)
    });
    log.note(format!("W_imp^(T_M) = W_imp for every M: {pt_invariant}; <G|W_imp|G> = {}", imp.op.diag()[0]));
    match certify_decomposable(&imp.op).and_then(|rep| {
        let certs = rep.certificates();
        match certs {
            Some(c) => verify_witness(&imp.op, DenseMode::Decomposable, Some(&c)).map(|r| r.pass),
            None => Ok(false),
        }
    }) {
        Ok(ok) => log.note(format!(
            "fully decomposable with LP certificates, dense check: {}",
            if ok { "pass" } else { "fail" }
        )),
        Err(e) => log.note(format!("decomposable check errored: {e}")),
    }
}
