mod args;

use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};

use graphwit::catalog::{self, Provenance};
use graphwit::dense::{verify_witness, DenseMode, VerifyReport};
use graphwit::graph::{bits, canonical_masks, sample_canonical_masks, valid_subsets};
use graphwit::io::{self, OperatorJson, WitnessJson};
use graphwit::lp::{self, certificate_margins, certify_decomposable, Mode};
use graphwit::selftest::{self, Options, CRITERIA};
use graphwit::witness::{
    self, certificates_for, check_pm_certificates, combined_witness, Class, CombineMode, Method, Verified,
    WitnessRecord,
};
use graphwit::{white_noise_state, Error, Family, Graph, GraphDiagonalState};

use args::{CatalogAction, CertSource, Cli, Command, MethodArg, ModeArg, StateSource, VerifyArgs, WitnessAction};

/// Exit codes: 0 success or pass, 1 verification failure, 2 usage or input
/// error, 3 cap exceeded.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Cap(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => Failure::Cap(e.to_string()),
            Error::Lp(_) => Failure::Compute(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(format!("json: {e}"))
    }
}

type Res<T> = Result<T, Failure>;

/// Command output and whether it counts as a pass.
struct Report {
    body: String,
    pass: bool,
}

impl Report {
    fn ok(body: String) -> Self {
        Report { body, pass: true }
    }

    fn json(v: &impl Serialize) -> Res<Self> {
        Ok(Report::ok(serde_json::to_string_pretty(v)?))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.into()).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let res = run(&cli).and_then(|r| {
        let mut body = r.body;
        if !body.ends_with('\n') {
            body.push('\n');
        }
        match &cli.output {
            Some(p) => std::fs::write(p, body).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
            None => print!("{body}"),
        }
        Ok(r.pass)
    });
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (2, m),
                Failure::Cap(m) => (3, m),
                Failure::Compute(m) => (1, m),
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Res<Report> {
    match &cli.command {
        Command::Catalog { action } => cmd_catalog(action),
        Command::Graph { family } => Report::json(&load_graph(family)?),
        Command::State { graph, noise } => {
            Report::json(&io::state_to_json(&white_noise_state(&load_graph(graph)?, *noise)?)?)
        }
        Command::Witness { action } => cmd_witness(action),
        Command::Verify(v) => cmd_verify(v, cli.seed),
        Command::Tolerance { witness, n, b } => cmd_tolerance(witness.as_deref(), *n, *b),
        Command::Monotone { state } => {
            let s = load_state(state)?;
            let m = lp::monotone_n(&s)?;
            Report::json(&json!({
                "value": m.value,
                "iterations": m.iterations,
                "witness": OperatorJson::new(s.graph(), m.witness.diag(), false)?,
            }))
        }
        Command::Selftest { criteria, sample, quick, verbose, json } => {
            let opts = Options { seed: cli.seed, sample: *sample, full_sweep: !quick };
            cmd_selftest(criteria, &opts, *verbose, *json)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Res<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// A graph JSON file, or a family spec when no such file exists.
fn load_graph(spec: &str) -> Res<Graph> {
    let path = Path::new(spec);
    if path.exists() {
        return read_json(path);
    }
    Ok(Graph::named(&spec.parse::<Family>()?)?)
}

fn load_state(src: &StateSource) -> Res<GraphDiagonalState> {
    match (&src.state, &src.graph) {
        (Some(p), _) => Ok(io::state_from_json(read_json(p)?)?),
        (None, Some(g)) => Ok(white_noise_state(&load_graph(g)?, src.noise)?),
        (None, None) => Err(Failure::Usage("need --state or --graph".into())),
    }
}

fn load_witness(path: &Path) -> Res<WitnessRecord> {
    Ok(io::witness_from_json(read_json::<WitnessJson>(path)?)?)
}

/// 1-based qubit list of a mask, e.g. `{2,3}`.
fn qubits(mask: usize) -> String {
    let v: Vec<String> = bits(mask).map(|q| (q + 1).to_string()).collect();
    format!("{{{}}}", v.join(","))
}

fn edges_1based(g: &Graph) -> String {
    g.edges().iter().map(|(a, b)| format!("{}-{}", a + 1, b + 1)).collect::<Vec<_>>().join(" ")
}

/// Parses `"1,4,7"` into 0-based qubits.
fn parse_set(s: &str, n: usize) -> Res<Vec<usize>> {
    s.split(',')
        .map(|t| {
            let q: usize = t.trim().parse().map_err(|_| Failure::Usage(format!("`{t}` is not a qubit number")))?;
            if q == 0 || q > n {
                return Err(Failure::Usage(format!("qubit {q} outside 1..={n}")));
            }
            Ok(q - 1)
        })
        .collect()
}

fn cmd_catalog(action: &CatalogAction) -> Res<Report> {
    match action {
        CatalogAction::List { json } => {
            if *json {
                let rows: Vec<Value> = catalog::entries()
                    .iter()
                    .map(|e| {
                        json!({
                            "id": e.id,
                            "name": e.name,
                            "provenance": e.provenance.label(),
                            "reference_tolerance": e.reference.label(),
                            "graph": e.graph,
                        })
                    })
                    .collect();
                return Report::json(&rows);
            }
            let mut out = format!(
                "{:>3}  {:<8} {:>2}  {:<22} {:>10}  edges (1-based)\n",
                "id", "name", "n", "provenance", "p_tol"
            );
            for e in catalog::entries() {
                let _ = writeln!(
                    out,
                    "{:>3}  {:<8} {:>2}  {:<22} {:>10}  {}",
                    e.id,
                    e.name,
                    e.graph.n(),
                    e.provenance.label(),
                    e.reference.label(),
                    edges_1based(&e.graph)
                );
            }
            Ok(Report::ok(out))
        }
        CatalogAction::Show { id, json } => {
            let e = catalog::entry(*id)?;
            let w = witness::catalog_witness(*id)?;
            if *json {
                return Report::json(&json!({
                    "id": e.id,
                    "name": e.name,
                    "provenance": e.provenance.label(),
                    "reference_tolerance": e.reference.label(),
                    "graph": e.graph,
                    "witness": io::witness_to_json(&w, false)?,
                }));
            }
            let mut out = String::new();
            let label = format!("No. {}", e.id);
            if e.name == label {
                let _ = writeln!(out, "{label}  (n = {})", e.graph.n());
            } else {
                let _ = writeln!(out, "{label}  {}  (n = {})", e.name, e.graph.n());
            }
            let _ = writeln!(out, "edges (1-based): {}", edges_1based(&e.graph));
            let _ = writeln!(out, "provenance: {}", e.provenance.label());
            if e.provenance == Provenance::ValidatedByTolerance {
                let _ =
                    writeln!(out, "  edge list accepted because its LP threshold reproduces the reference tolerance");
            }
            let _ = writeln!(out, "reference tolerance: {}", e.reference.label());
            let _ = writeln!(out, "witness: ½·1 − |G⟩⟨G|");
            for t in &e.terms {
                let idx: Vec<String> = t
                    .indices
                    .iter()
                    .map(|&a| (0..e.graph.n()).map(|k| if a >> k & 1 == 1 { '1' } else { '0' }).collect())
                    .collect();
                let _ = writeln!(out, "  − {} · ({})", t.coef_label, idx.join(" + "));
            }
            if let Some(t) = &w.tolerance {
                let _ = writeln!(out, "witness tolerance: {}", t.label());
            }
            Ok(Report::ok(out))
        }
    }
}

fn construct(g: &Graph, spec: &str, method: MethodArg, sets: Vec<Vec<usize>>, force: bool) -> Res<WitnessRecord> {
    let need = |k: usize| -> Res<()> {
        if sets.len() == k {
            Ok(())
        } else {
            Err(Failure::Usage(format!("{method:?} takes {k} --bset, got {}", sets.len())))
        }
    };
    let rec = match method {
        MethodArg::Projector => {
            need(0)?;
            witness::projector_witness(g)?
        }
        MethodArg::Lemma3 => {
            need(1)?;
            witness::lemma3_witness(g, &sets[0])?
        }
        MethodArg::Lemma5 => {
            need(1)?;
            witness::lemma5_ppt_witness(g, &sets[0])?
        }
        MethodArg::Lemma4 | MethodArg::Lemma6 => {
            if sets.is_empty() {
                return Err(Failure::Usage("combinations need --bset or --subsets-of".into()));
            }
            let mode = if method == MethodArg::Lemma4 { CombineMode::Lemma4 } else { CombineMode::Lemma6 };
            combined_witness(g, &sets, mode, force)?
        }
        MethodArg::Torus => {
            need(0)?;
            witness::torus_witness(g)?
        }
        MethodArg::TwoSetting => {
            need(0)?;
            witness::two_setting_witness(g)?
        }
        MethodArg::TwoSettingImproved => {
            let (b1, b2) = match sets.as_slice() {
                [] => witness::alternating_bsets(g.n()),
                [a, b] => (a.clone(), b.clone()),
                _ => return Err(Failure::Usage("two-setting-improved takes zero or two --bset".into())),
            };
            witness::two_setting_improved(g, &b1, &b2)?
        }
        MethodArg::Catalog => {
            need(0)?;
            match spec.parse::<Family>() {
                Ok(Family::Catalog(id)) => witness::catalog_witness(id)?,
                _ => return Err(Failure::Usage("catalog witnesses need --graph catalog:K".into())),
            }
        }
    };
    Ok(rec)
}

fn cmd_witness(action: &WitnessAction) -> Res<Report> {
    match action {
        WitnessAction::Construct { graph, method, bsets, subsets_of, force, stab, verify } => {
            let g = load_graph(graph)?;
            let mut sets = bsets.iter().map(|s| parse_set(s, g.n())).collect::<Res<Vec<_>>>()?;
            if !subsets_of.is_empty() {
                let pool = parse_set(&subsets_of.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(","), g.n())?;
                sets.extend(valid_subsets(&g, &pool)?);
            }
            let mut rec = construct(&g, graph, *method, sets, *force)?;
            let mut pass = true;
            if *verify {
                pass = check_claimed_class(&mut rec)?;
            }
            Ok(Report { body: serde_json::to_string_pretty(&io::witness_to_json(&rec, *stab)?)?, pass })
        }
        WitnessAction::Optimize { state, mode, no_threshold } => {
            let s = load_state(state)?;
            let mode = lp_mode(*mode);
            let w = lp::optimal_witness(&s, mode)?;
            let margins = certificate_margins(&w.record.op, &w.certificates)?;
            let per_m: Vec<Value> =
                margins.iter().map(|&(mask, min)| json!({"mask": mask, "min_margin": min})).collect();
            let threshold = if *no_threshold {
                Value::Null
            } else {
                let t = lp::threshold(s.graph(), mode)?;
                json!({"p": t.p, "estimate": t.estimate, "bracket": t.bracket, "pure_value": t.pure_value})
            };
            Report::json(&json!({
                "mode": mode,
                "value": w.value,
                "lower_bound": w.lower_bound,
                "threshold": threshold,
                "witness": io::witness_to_json(&w.record, false)?,
                "per_M": per_m,
            }))
        }
    }
}

/// Diagonal sweep for fully PPT claims; set certificates, else the LP, for
/// fully decomposable ones.
fn check_claimed_class(rec: &mut WitnessRecord) -> Res<bool> {
    let tol = graphwit::diagonal::NONNEG_TOL;
    let pass = match rec.method.claimed_class() {
        Class::FullyPpt => rec.op.sweep().run_all().iter().all(|&(_, e)| e >= -tol),
        Class::FullyDecomposable if matches!(rec.method, Method::Lemma3 | Method::Lemma4Min) => {
            let certs = certificates_for(rec.graph(), &rec.bsets)?;
            check_pm_certificates(&rec.op, &certs)?.iter().all(|&(_, e)| e >= -tol)
        }
        Class::FullyDecomposable => certify_decomposable(&rec.op)?.certificates().is_some(),
    };
    if pass {
        rec.verified = match rec.method.claimed_class() {
            Class::FullyPpt => Verified::PptChecked,
            Class::FullyDecomposable => Verified::DecomposableCertified,
        };
    } else {
        rec.notes.push(format!("{:?} check failed", rec.method.claimed_class()));
    }
    Ok(pass)
}

fn lp_mode(m: ModeArg) -> Mode {
    match m {
        ModeArg::Ppt => Mode::FullyPpt,
        ModeArg::Decomposable => Mode::FullyDecomposable,
    }
}

#[derive(Serialize)]
struct MRow {
    mask: usize,
    /// Smallest eigenvalue of the checked operators; `None` when no
    /// certificate exists.
    min_eig: Option<f64>,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyOut {
    mode: &'static str,
    method: &'static str,
    n: usize,
    checked: usize,
    pass: bool,
    per_m: Vec<MRow>,
}

fn rows_from_dense(r: VerifyReport) -> Vec<MRow> {
    r.per_m.into_iter().map(|m| MRow { mask: m.mask, min_eig: Some(m.min_eig), pass: m.pass }).collect()
}

fn cmd_verify(v: &VerifyArgs, seed: u64) -> Res<Report> {
    let w = load_witness(&v.witness)?;
    let n = w.graph().n();
    let tol = graphwit::diagonal::NONNEG_TOL;
    let (mode, method, rows) = match v.mode {
        ModeArg::Ppt if v.dense => {
            ("ppt", "dense eigenvalues", rows_from_dense(verify_witness(&w.op, DenseMode::FullyPpt, None)?))
        }
        ModeArg::Ppt => {
            let masks = match v.sample {
                Some(k) => sample_canonical_masks(n, k, seed),
                None => canonical_masks(n),
            };
            let rows =
                w.op.sweep().run(&masks).into_iter().map(|(mask, e)| MRow { mask, min_eig: Some(e), pass: e >= -tol });
            ("ppt", "diagonal PT sweep", rows.collect())
        }
        ModeArg::Decomposable => {
            if v.sample.is_some() {
                return Err(Failure::Usage("--sample applies to ppt mode only".into()));
            }
            let analytic = match v.certificates {
                CertSource::Analytic => true,
                CertSource::Lp => false,
                CertSource::Auto => matches!(w.method, Method::Lemma3 | Method::Lemma4Min) && !w.bsets.is_empty(),
            };
            if analytic {
                if w.bsets.is_empty() {
                    return Err(Failure::Usage("witness records no sets to build certificates from".into()));
                }
                let certs = certificates_for(w.graph(), &w.bsets)?;
                if v.dense {
                    let c: Vec<_> = certs.iter().map(|c| c.to_certificate()).collect();
                    (
                        "decomposable",
                        "dense eigenvalues, set certificates",
                        rows_from_dense(verify_witness(&w.op, DenseMode::Decomposable, Some(&c))?),
                    )
                } else {
                    let rows = check_pm_certificates(&w.op, &certs)?.into_iter().map(|(mask, e)| MRow {
                        mask,
                        min_eig: Some(e),
                        pass: e >= -tol,
                    });
                    ("decomposable", "diagonal check, set certificates", rows.collect())
                }
            } else {
                let rep = certify_decomposable(&w.op)?;
                match rep.certificates() {
                    Some(c) if v.dense => (
                        "decomposable",
                        "dense eigenvalues, LP certificates",
                        rows_from_dense(verify_witness(&w.op, DenseMode::Decomposable, Some(&c))?),
                    ),
                    Some(c) => {
                        let rows = certificate_margins(&w.op, &c)?.into_iter().map(|(mask, e)| MRow {
                            mask,
                            min_eig: Some(e),
                            pass: e >= -tol,
                        });
                        ("decomposable", "LP certificates", rows.collect())
                    }
                    None => {
                        let rows = rep.per_m.iter().map(|r| MRow { mask: r.mask, min_eig: None, pass: r.feasible });
                        ("decomposable", "LP certificates", rows.collect())
                    }
                }
            }
        }
    };
    let out = VerifyOut { mode, method, n, checked: rows.len(), pass: rows.iter().all(|r| r.pass), per_m: rows };
    let body = if v.json {
        serde_json::to_string_pretty(&out)?
    } else {
        let failed: Vec<&MRow> = out.per_m.iter().filter(|r| !r.pass).collect();
        let mut s = format!(
            "{} ({}), n = {}: {} of {} bipartitions pass\n",
            out.mode,
            out.method,
            n,
            out.checked - failed.len(),
            out.checked
        );
        let worst = out.per_m.iter().filter_map(|r| r.min_eig).fold(f64::INFINITY, f64::min);
        if worst.is_finite() {
            let _ = writeln!(s, "smallest eigenvalue {worst:.6e}");
        }
        for r in failed.iter().take(20) {
            let e = r.min_eig.map_or("no certificate".to_string(), |e| format!("min eigenvalue {e:.6e}"));
            let _ = writeln!(s, "FAIL mask {:#x} M = {}: {e}", r.mask, qubits(r.mask));
        }
        if failed.len() > 20 {
            let _ = writeln!(s, "... {} more", failed.len() - 20);
        }
        s
    };
    Ok(Report { body, pass: out.pass })
}

fn cmd_tolerance(witness: Option<&Path>, n: Option<usize>, b: Option<usize>) -> Res<Report> {
    let show = |t: &witness::Tolerance| t.exact.as_ref().map(graphwit::rational::format);
    match (witness, n, b) {
        (Some(p), _, _) => {
            let w = load_witness(p)?;
            let t = witness::white_noise_tolerance(&w.op)?;
            Report::json(&json!({"value": t.value, "exact": show(&t), "approximate": w.approximate}))
        }
        (None, Some(n), Some(b)) => {
            let (t, f) = witness::corollary_tolerance(n, b)?;
            Report::json(&json!({"value": t.value, "exact": show(&t), "fidelity_required": f}))
        }
        _ => Err(Failure::Usage("need --witness, or both --n and --b".into())),
    }
}

fn cmd_selftest(criteria: &[u8], opts: &Options, verbose: bool, json: bool) -> Res<Report> {
    let ids: Vec<usize> =
        if criteria.is_empty() { CRITERIA.to_vec() } else { criteria.iter().map(|&c| c.into()).collect() };
    let mut outcomes = Vec::new();
    let mut text = String::new();
    for id in ids {
        let o = selftest::run(id, opts).ok_or_else(|| Failure::Usage(format!("no criterion {id}")))?;
        if !json {
            // Stream progress; the suite takes minutes.
            eprintln!("{o}");
            let _ = writeln!(text, "{o}");
            for c in o.checks.iter().filter(|c| verbose || !c.pass) {
                let _ = writeln!(text, "    [{}] {}: {}", if c.pass { "ok" } else { "FAIL" }, c.label, c.detail);
            }
            for n in &o.notes {
                let _ = writeln!(text, "    note: {n}");
            }
        }
        outcomes.push(o);
    }
    let pass = outcomes.iter().all(|o| o.pass);
    let body = if json { serde_json::to_string_pretty(&outcomes)? } else { text };
    Ok(Report { body, pass })
}
