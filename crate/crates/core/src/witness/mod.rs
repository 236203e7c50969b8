//! Analytic witness constructions and white-noise tolerances.
//!
//! Every analytic witness is normalized so that `⟨G|W|G⟩ = −½`, and all
//! diagonals are computed from indicator formulas on the graph-basis index.

mod certificate;

pub use certificate::{
    certificate_pm, certificate_pm_combined, certificates_for, certified, check_pm_certificates, CertificatePM,
};

use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::diagonal::DiagonalOperator;
use crate::error::{Error, Result};
use crate::graph::{mask_of, BSet, Family, Graph};
use crate::rational::{self, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Projector,
    Lemma3,
    Lemma4Min,
    Lemma5Ppt,
    Lemma6Min,
    Torus,
    TwoSetting,
    TwoSettingImproved,
    Catalog,
    LpOptimal,
}

impl Method {
    /// Witness class the construction is proven to belong to.
    pub fn claimed_class(&self) -> Class {
        match self {
            Method::Lemma5Ppt | Method::Lemma6Min | Method::Torus | Method::Projector => Class::FullyPpt,
            _ => Class::FullyDecomposable,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    FullyPpt,
    FullyDecomposable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verified {
    Unverified,
    PptChecked,
    DecomposableCertified,
}

/// A witness operator with construction metadata.
#[derive(Clone, Debug)]
pub struct WitnessRecord {
    pub op: DiagonalOperator,
    pub method: Method,
    pub bsets: Vec<Vec<usize>>,
    pub tolerance: Option<Tolerance>,
    pub verified: Verified,
    /// Some coefficient is only known to a few decimals.
    pub approximate: bool,
    pub notes: Vec<String>,
}

impl WitnessRecord {
    fn analytic(op: DiagonalOperator, method: Method, bsets: Vec<Vec<usize>>) -> Result<Self> {
        let tolerance = Some(white_noise_tolerance(&op)?);
        Ok(WitnessRecord {
            op,
            method,
            bsets,
            tolerance,
            verified: Verified::Unverified,
            approximate: false,
            notes: vec![],
        })
    }

    pub fn graph(&self) -> &Graph {
        self.op.graph()
    }

    /// `⟨G|W|G⟩`.
    pub fn pure_expectation(&self) -> f64 {
        self.op.diag()[0]
    }

    /// Exact diagonal when every entry is a short dyadic rational.
    pub fn diag_exact(&self) -> Option<Vec<Q>> {
        match self.method {
            Method::LpOptimal => None,
            _ => rational::all_dyadic(self.op.diag()),
        }
    }
}

/// White-noise tolerance, exact when the diagonal is dyadic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub value: f64,
    pub exact: Option<Q>,
}

impl Tolerance {
    pub fn label(&self) -> String {
        match &self.exact {
            Some(q) => format!("{} ≈ {:.6}", rational::format(q), self.value),
            None => format!("{:.6}", self.value),
        }
    }
}

fn require_connected(g: &Graph) -> Result<()> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(Error::Disconnected)
    }
}

fn build(g: &Graph, f: impl Fn(usize) -> f64) -> DiagonalOperator {
    DiagonalOperator::from_diag(g, (0..g.dim()).map(f).collect()).expect("sized by graph")
}

fn base(a: usize) -> f64 {
    if a == 0 {
        -0.5
    } else {
        0.5
    }
}

/// `½·1 − |G⟩⟨G|`.
pub fn projector_witness(g: &Graph) -> Result<WitnessRecord> {
    require_connected(g)?;
    WitnessRecord::analytic(build(g, base), Method::Projector, vec![])
}

fn lemma3_correction(bmask: usize, a: usize) -> f64 {
    if (a & bmask).count_ones() >= 2 {
        0.5
    } else {
        0.0
    }
}

fn lemma5_correction(bmask: usize, a: usize) -> f64 {
    let m = (a & bmask).count_ones();
    if m >= 2 {
        0.5 - 0.5f64.powi(m as i32)
    } else {
        0.0
    }
}

fn set_witness(g: &Graph, members: &[usize], method: Method, corr: fn(usize, usize) -> f64) -> Result<WitnessRecord> {
    require_connected(g)?;
    let b = BSet::new(g, members)?;
    if b.len() < 2 {
        let mut w = projector_witness(g)?;
        w.notes.push(format!("set of size {} subtracts nothing; emitted the projector witness", b.len()));
        return Ok(w);
    }
    let bm = b.mask();
    WitnessRecord::analytic(build(g, |a| base(a) - corr(bm, a)), method, vec![b.members().to_vec()])
}

/// Fully decomposable witness subtracting `½` on every index with at least
/// two excitations inside `B`.
pub fn lemma3_witness(g: &Graph, members: &[usize]) -> Result<WitnessRecord> {
    set_witness(g, members, Method::Lemma3, lemma3_correction)
}

/// Fully PPT witness subtracting `½ − 2^{−m}` where `m ≥ 2` counts the
/// excitations inside `B`.
pub fn lemma5_ppt_witness(g: &Graph, members: &[usize]) -> Result<WitnessRecord> {
    set_witness(g, members, Method::Lemma5Ppt, lemma5_correction)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineMode {
    /// Fully decomposable inputs built from sets whose members in different
    /// sets have equal or disjoint neighborhoods.
    Lemma4,
    /// Fully PPT inputs whose sets have a non-adjacent union.
    Lemma6,
}

fn combine_violation(g: &Graph, sets: &[Vec<usize>], mode: CombineMode) -> Option<String> {
    let union = sets.iter().fold(0, |m, s| m | mask_of(s));
    for a in crate::graph::bits(union) {
        if g.nbr_mask(a) & union != 0 {
            let b = crate::graph::bits(g.nbr_mask(a) & union).next().unwrap_or(a);
            return Some(format!("qubits {a} and {b} (0-based) of the union of sets are adjacent"));
        }
    }
    if mode == CombineMode::Lemma4 {
        for (i, si) in sets.iter().enumerate() {
            for sk in &sets[i + 1..] {
                for &a in si {
                    for &b in sk {
                        let (na, nb) = (g.nbr_mask(a), g.nbr_mask(b));
                        if a != b && na != nb && na & nb != 0 {
                            return Some(format!(
                                "qubits {a} and {b} (0-based) from different sets share a neighbor but have different neighborhoods"
                            ));
                        }
                    }
                }
            }
        }
    }
    None
}

/// Elementwise minimum of witnesses built on one graph. Preconditions are
/// checked strictly; `force` downgrades a violation to an unverified record.
pub fn combine_min(ws: &[WitnessRecord], mode: CombineMode, force: bool) -> Result<WitnessRecord> {
    let first = ws.first().ok_or_else(|| Error::Precondition("nothing to combine".into()))?;
    let g = first.graph().clone();
    let want = match mode {
        CombineMode::Lemma4 => Method::Lemma3,
        CombineMode::Lemma6 => Method::Lemma5Ppt,
    };
    let mut notes = Vec::new();
    let mut bad = None;
    for w in ws {
        if w.graph() != &g {
            return Err(Error::GraphMismatch);
        }
        if w.method != want {
            bad.get_or_insert(format!("input built by {:?}, expected {:?}", w.method, want));
        }
    }
    let sets: Vec<Vec<usize>> = ws.iter().flat_map(|w| w.bsets.iter().cloned()).collect();
    if bad.is_none() {
        bad = combine_violation(&g, &sets, mode);
    }
    if let Some(msg) = bad {
        if !force {
            return Err(Error::Precondition(msg));
        }
        notes.push(format!("forced past a failed precondition: {msg}"));
    } else {
        notes.push(
            match mode {
                CombineMode::Lemma4 => {
                    "checked: each set valid; cross-set members share all or no neighbors; union non-adjacent"
                }
                CombineMode::Lemma6 => "checked: each set valid; union non-adjacent",
            }
            .to_string(),
        );
    }
    let mut op = first.op.clone();
    for w in &ws[1..] {
        op = op.min_with(&w.op)?;
    }
    let method = match mode {
        CombineMode::Lemma4 => Method::Lemma4Min,
        CombineMode::Lemma6 => Method::Lemma6Min,
    };
    let mut rec = WitnessRecord::analytic(op, method, sets)?;
    rec.notes = notes;
    Ok(rec)
}

/// Convenience: build the per-set witnesses and combine them.
pub fn combined_witness(g: &Graph, sets: &[Vec<usize>], mode: CombineMode, force: bool) -> Result<WitnessRecord> {
    let ws = sets
        .iter()
        .map(|s| match mode {
            CombineMode::Lemma4 => lemma3_witness(g, s),
            CombineMode::Lemma6 => lemma5_ppt_witness(g, s),
        })
        .collect::<Result<Vec<_>>>()?;
    combine_min(&ws, mode, force)
}

fn side_of_torus(g: &Graph) -> Result<usize> {
    let l = (g.n() as f64).sqrt().round() as usize;
    if l >= 3 && l * l == g.n() && *g == Graph::named(&Family::Grid { w: l, h: l, periodic: true })? {
        Ok(l)
    } else {
        Err(Error::Precondition("torus witness needs a periodic square grid of side ≥ 3".into()))
    }
}

/// Diagonal masks of the `L × L` torus: `c − r ≡ i` and `r + c ≡ j` (mod L).
pub fn torus_diagonals(l: usize) -> (Vec<usize>, Vec<usize>) {
    let mut up = vec![0usize; l];
    let mut down = vec![0usize; l];
    for r in 0..l {
        for c in 0..l {
            up[(c + l - r) % l] |= 1 << (r * l + c);
            down[(r + c) % l] |= 1 << (r * l + c);
        }
    }
    (up, down)
}

/// Fully PPT witness for the periodic square grid: subtracts `¼` wherever
/// some pair of qubit-disjoint diagonals both carry odd parity.
pub fn torus_witness(g: &Graph) -> Result<WitnessRecord> {
    let l = side_of_torus(g)?;
    let (up, down) = torus_diagonals(l);
    let pairs: Vec<(usize, usize)> =
        up.iter().flat_map(|&u| down.iter().filter(move |&&d| u & d == 0).map(move |&d| (u, d))).collect();
    let odd = |a: usize, m: usize| (a & m).count_ones() % 2 == 1;
    let op = build(g, |a| {
        let hit = pairs.iter().any(|&(u, d)| odd(a, u) && odd(a, d));
        base(a) - if hit { 0.25 } else { 0.0 }
    });
    WitnessRecord::analytic(op, Method::Torus, vec![])
}

fn require_path(g: &Graph) -> Result<()> {
    if g.n() >= 2 && *g == Graph::named(&Family::Linear(g.n()))? {
        Ok(())
    } else {
        Err(Error::Precondition("two-setting witness needs a linear cluster graph".into()))
    }
}

/// Qubits at odd and even 1-based positions.
fn position_masks(n: usize) -> (usize, usize) {
    let odd = (0..n).step_by(2).fold(0, |m, q| m | 1 << q);
    (odd, ((1 << n) - 1) & !odd)
}

/// `3/2·1 − (∏_{odd i} g_i⁺ + ∏_{even i} g_i⁺)` on a linear cluster.
pub fn two_setting_witness(g: &Graph) -> Result<WitnessRecord> {
    require_path(g)?;
    let (odd, even) = position_masks(g.n());
    let op = build(g, |a| 1.5 - f64::from(u8::from(a & odd == 0)) - f64::from(u8::from(a & even == 0)));
    WitnessRecord::analytic(op, Method::TwoSetting, vec![])
}

/// Default alternating sets `{1,5,9,…}` and `{3,7,11,…}` (1-based).
pub fn alternating_bsets(n: usize) -> (Vec<usize>, Vec<usize>) {
    ((0..n).step_by(4).collect(), (2..n).step_by(4).collect())
}

/// Two-setting witness minus the larger of the two fully PPT corrections
/// built on sets at odd 1-based positions.
pub fn two_setting_improved(g: &Graph, b1: &[usize], b2: &[usize]) -> Result<WitnessRecord> {
    require_path(g)?;
    let (odd, _) = position_masks(g.n());
    let mut masks = Vec::new();
    for b in [b1, b2] {
        let set = BSet::new(g, b)?;
        if set.mask() & !odd != 0 {
            return Err(Error::Precondition("sets must sit on odd 1-based positions".into()));
        }
        masks.push(set.mask());
    }
    let base = two_setting_witness(g)?;
    let d = base.op.diag();
    let op = build(g, |a| d[a] - lemma5_correction(masks[0], a).max(lemma5_correction(masks[1], a)));
    let mut rec = WitnessRecord::analytic(op, Method::TwoSettingImproved, vec![b1.to_vec(), b2.to_vec()])?;
    rec.bsets.iter_mut().for_each(|s| s.sort_unstable());
    Ok(rec)
}

/// Reference witness of a catalog class.
pub fn catalog_witness(id: usize) -> Result<WitnessRecord> {
    let e = catalog::entry(id)?;
    let mut d: Vec<f64> = (0..e.graph.dim()).map(base).collect();
    for t in &e.terms {
        for &a in &t.indices {
            d[a] -= t.coef;
        }
    }
    let op = DiagonalOperator::from_diag(&e.graph, d)?;
    let mut rec = WitnessRecord::analytic(op, Method::Catalog, vec![])?;
    rec.approximate = e.approximate();
    rec.notes.push(format!("catalog No. {} ({})", e.id, e.name));
    Ok(rec)
}

/// `p_tol = [1 − tr(W) / (2^n ⟨G|W|G⟩)]^{−1}`.
pub fn white_noise_tolerance(op: &DiagonalOperator) -> Result<Tolerance> {
    let w0 = op.diag()[0];
    if w0.is_nan() || w0 >= 0.0 {
        return Err(Error::NotDetecting(w0));
    }
    let dim = op.diag().len() as f64;
    let value = 1.0 / (1.0 - op.trace() / (dim * w0));
    let exact = rational::all_dyadic(op.diag()).map(|q| {
        let tr: Q = q.iter().sum();
        let one = Q::from_integer(1);
        one / (one - tr / (Q::from_integer(op.diag().len() as i128) * q[0]))
    });
    Ok(Tolerance { value, exact })
}

/// Closed-form tolerance `(1 − 2^{−n+1} + 2^{−b}(b+1))^{−1}` of the set
/// witness with `|B| = b`, and the fidelity it needs, `≈ b·2^{−b}`.
pub fn corollary_tolerance(n: usize, b: usize) -> Result<(Tolerance, f64)> {
    if b < 2 || b > n || n > 100 {
        return Err(Error::BadParams(format!("need 2 ≤ b ≤ n, got n = {n}, b = {b}")));
    }
    let p2 = |k: usize| Q::new(1, 1i128 << k);
    let one = Q::from_integer(1);
    let q = one / (one - p2(n - 1) + p2(b) * Q::from_integer(b as i128 + 1));
    let f_req = b as f64 * 0.5f64.powi(b as i32);
    Ok((Tolerance { value: rational::to_f64(&q), exact: Some(q) }, f_req))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Family;

    fn g(f: Family) -> Graph {
        Graph::named(&f).unwrap()
    }

    fn exact(w: &WitnessRecord) -> Q {
        w.tolerance.unwrap().exact.unwrap()
    }

    #[test]
    fn projector_tolerances() {
        assert_eq!(exact(&projector_witness(&g(Family::Star(4))).unwrap()), Q::new(8, 15));
        assert_eq!(exact(&projector_witness(&g(Family::Star(6))).unwrap()), Q::new(32, 63));
        assert_eq!(exact(&projector_witness(&g(Family::Linear(2))).unwrap()), Q::new(2, 3));
        assert_eq!(exact(&projector_witness(&g(Family::Star(5))).unwrap()), Q::new(16, 31));
        assert!(matches!(projector_witness(&Graph::new(3, [(0, 1)]).unwrap()), Err(Error::Disconnected)));
    }

    #[test]
    fn lemma3_cl4() {
        let w = lemma3_witness(&g(Family::Linear(4)), &[0, 3]).unwrap();
        assert_eq!(exact(&w), Q::new(8, 13));
        let subtracted: Vec<usize> = (1..16).filter(|&a| w.op.diag()[a] == 0.0).collect();
        assert_eq!(subtracted, vec![0b1001, 0b1011, 0b1101, 0b1111]);
        assert!(lemma3_witness(&g(Family::Linear(4)), &[0, 2]).is_err());
        let single = lemma3_witness(&g(Family::Linear(4)), &[1]).unwrap();
        assert_eq!(single.method, Method::Projector);
        assert_eq!(single.notes.len(), 1);
    }

    #[test]
    fn lemma5_tiers() {
        let w = lemma5_ppt_witness(&g(Family::Linear(7)), &[0, 3, 6]).unwrap();
        assert_eq!(exact(&w), Q::new(64, 109));
        assert_eq!(w.op.diag()[0b1001], 0.25);
        assert_eq!(w.op.diag()[0b1001001], 0.125);
        let grid = g(Family::Grid { w: 4, h: 4, periodic: false });
        let w = lemma5_ppt_witness(&grid, &[0, 3, 9, 15]).unwrap();
        assert_eq!(exact(&w), Q::new(32768, 51455));
        assert_eq!(w.op.diag()[(1 << 0) | (1 << 3) | (1 << 9) | (1 << 15)], 1.0 / 16.0);
    }

    #[test]
    fn corollary() {
        assert_eq!(corollary_tolerance(4, 2).unwrap().0.exact, Some(Q::new(8, 13)));
        let (t, f) = corollary_tolerance(16, 4).unwrap();
        assert!((t.value - 0.7619).abs() < 1e-4);
        assert_eq!(f, 0.25);
        assert!(corollary_tolerance(5, 1).is_err());
        let mut prev = 0.0;
        for b in 2..=20 {
            let v = corollary_tolerance(40, b).unwrap().0.value;
            if b >= 3 {
                assert!(v > prev);
            }
            prev = v;
        }
        assert!(prev > 0.9999);
    }

    #[test]
    fn lemma3_trace_formula() {
        for n in 4..=9 {
            let lin = g(Family::Linear(n));
            let b: Vec<usize> = (0..n).step_by(3).collect();
            if b.len() < 2 {
                continue;
            }
            let w = lemma3_witness(&lin, &b).unwrap();
            let k = b.len() as i32;
            let want = 2f64.powi(n as i32 - 1) - 1.0 - 2f64.powi(n as i32 - k - 1) * (2f64.powi(k) - k as f64 - 1.0);
            assert_eq!(w.op.trace(), want);
        }
    }

    #[test]
    fn combinations() {
        let cl7 = g(Family::Linear(7));
        let two = combined_witness(&cl7, &[vec![0, 4], vec![2, 6]], CombineMode::Lemma6, false).unwrap();
        assert_eq!(exact(&two), Q::new(64, 113));
        let three = combined_witness(&cl7, &[vec![0, 4], vec![2, 6], vec![0, 6]], CombineMode::Lemma6, false).unwrap();
        assert_eq!(exact(&three), Q::new(64, 111));
        // {0,3} and {1,4}: qubits 0 and 1 are adjacent.
        let err = combined_witness(&cl7, &[vec![0, 3], vec![1, 4]], CombineMode::Lemma6, false).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        let forced = combined_witness(&cl7, &[vec![0, 3], vec![1, 4]], CombineMode::Lemma6, true).unwrap();
        assert!(forced.notes[0].starts_with("forced"));
        let mixed = [lemma3_witness(&cl7, &[0, 3]).unwrap(), lemma5_ppt_witness(&cl7, &[0, 3]).unwrap()];
        assert!(combine_min(&mixed, CombineMode::Lemma6, false).is_err());
    }

    #[test]
    fn y5_combination_adds_back_overlap() {
        let y5 = catalog::entry(6).unwrap().graph.clone();
        let w = combined_witness(&y5, &[vec![0, 3], vec![4, 3]], CombineMode::Lemma4, false).unwrap();
        assert_eq!(w.op.diag(), catalog_witness(6).unwrap().op.diag());
        assert_eq!(exact(&w), Q::new(16, 25));
    }

    #[test]
    fn h6_combination() {
        let h6 = catalog::entry(11).unwrap().graph.clone();
        let sets = [vec![0, 3], vec![1, 3], vec![0, 2], vec![1, 2]];
        let w = combined_witness(&h6, &sets, CombineMode::Lemma4, false).unwrap();
        assert_eq!(exact(&w), Q::new(32, 45));
        assert_eq!(w.op.diag(), catalog_witness(11).unwrap().op.diag());
    }

    #[test]
    fn torus() {
        let t = g(Family::Grid { w: 4, h: 4, periodic: true });
        let w = torus_witness(&t).unwrap();
        assert_eq!(exact(&w), Q::new(32768, 53503));
        assert_eq!(w.op.diag()[0], -0.5);
        let (up, down) = torus_diagonals(4);
        // 1-based {1,6,11,16} and {2,5,12,15}
        assert_eq!(up[0], mask_of(&[0, 5, 10, 15]));
        assert_eq!(down[1], mask_of(&[1, 4, 11, 14]));
        let a = 1 << 0 | 1 << 1;
        assert_eq!(w.op.diag()[a], 0.25);
        assert!(torus_witness(&g(Family::Grid { w: 4, h: 4, periodic: false })).is_err());
    }

    #[test]
    fn two_setting() {
        let cl7 = g(Family::Linear(7));
        let w = two_setting_witness(&cl7).unwrap();
        assert_eq!(w.op.diag()[0], -0.5);
        let proj = projector_witness(&cl7).unwrap();
        assert!(w.op.diag().iter().zip(proj.op.diag()).all(|(a, b)| a >= b));
        let (b1, b2) = alternating_bsets(7);
        assert_eq!((b1.clone(), b2.clone()), (vec![0, 4], vec![2, 6]));
        let imp = two_setting_improved(&cl7, &b1, &b2).unwrap();
        let g1 = |a: usize, q: usize| a >> q & 1 == 1;
        for a in 0..128 {
            let mut want = w.op.diag()[a];
            let (p15, p37) = (g1(a, 0) && g1(a, 4), g1(a, 2) && g1(a, 6));
            want -= 0.25 * f64::from(u8::from(p15)) + 0.25 * f64::from(u8::from(p37));
            want += 0.25 * f64::from(u8::from(p15 && p37));
            assert_eq!(imp.op.diag()[a], want);
        }
        assert!(two_setting_witness(&g(Family::Ring(7))).is_err());
        assert!(two_setting_improved(&cl7, &[1, 5], &b2).is_err());
    }

    #[test]
    fn catalog_entries() {
        let w4 = catalog_witness(4).unwrap();
        assert_eq!(w4.op.diag(), lemma3_witness(&g(Family::Linear(4)), &[0, 3]).unwrap().op.diag());
        assert_eq!(exact(&catalog_witness(14).unwrap()), Q::new(128, 179));
        let w17 = catalog_witness(17).unwrap();
        assert!(w17.approximate && (w17.tolerance.unwrap().value - 0.696).abs() < 5e-4);
        for id in 1..=19 {
            let w = catalog_witness(id).unwrap();
            assert_eq!(w.pure_expectation(), -0.5);
            assert!(w.op.min_diag_entry() >= -0.5);
        }
    }

    #[test]
    fn non_detecting() {
        let b = g(Family::Linear(2));
        let op = DiagonalOperator::identity(&b);
        assert!(matches!(white_noise_tolerance(&op), Err(Error::NotDetecting(_))));
    }
}
