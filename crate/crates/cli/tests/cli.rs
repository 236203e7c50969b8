use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn graphwit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphwit")).args(args).output().expect("spawn graphwit")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> Value {
    let o = graphwit(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("graphwit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn lemma3_on_cl4() {
    let w = json(&["witness", "construct", "--graph", "linear:4", "--method", "lemma3", "--bset", "1,4"]);
    assert_eq!(w["tolerance"]["exact"], "8/13");
    assert_eq!(w["bsets"], serde_json::json!([[0, 3]]));
    assert_eq!(w["exact"][0], "-1/2");
}

#[test]
fn lemma5_on_grid_file() {
    let path = scratch("grid44.json");
    let p = path.to_str().unwrap();
    assert!(graphwit(&["graph", "grid:4x4", "-o", p]).status.success());
    let w = json(&["witness", "construct", "--graph", p, "--method", "lemma5", "--bset", "1,4,10,16"]);
    assert_eq!(w["tolerance"]["exact"], "32768/51455");
    assert_eq!(w["bsets"], serde_json::json!([[0, 3, 9, 15]]));
}

#[test]
fn subsets_of_a_pool() {
    let w = json(&[
        "witness",
        "construct",
        "--graph",
        "grid:4x4",
        "--method",
        "lemma6",
        "--subsets-of",
        "1,3,6,8,9,11,14,16",
    ]);
    assert_eq!(w["bsets"].as_array().unwrap().len(), 13);
    assert_eq!(w["tolerance"]["exact"], "32768/49791");
}

#[test]
fn ghz4_optimum() {
    let path = scratch("ghz4_noise.json");
    let p = path.to_str().unwrap();
    assert!(graphwit(&["state", "--graph", "star:4", "--noise", "0.4", "-o", p]).status.success());
    let d = json(&["witness", "optimize", "--state", p]);
    assert_eq!(d["mode"], "fully_decomposable");
    let p = d["threshold"]["p"].as_f64().unwrap();
    assert!((p - 8.0 / 15.0).abs() < 1e-6, "{p}");
    assert!(d["value"].as_f64().unwrap() < 0.0);
    assert_eq!(d["per_M"].as_array().unwrap().len(), 7);
}

#[test]
fn catalog_listing() {
    let o = graphwit(&["catalog", "list"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 20);
    let show = stdout(&graphwit(&["catalog", "show", "--id", "9"]));
    assert!(show.contains("1-2 1-3 1-4 1-5 1-6"), "{show}");
    let show = stdout(&graphwit(&["catalog", "show", "--id", "17"]));
    assert!(show.contains("validated-by-Table-II"), "{show}");
    let rows = json(&["catalog", "list", "--json"]);
    assert_eq!(rows.as_array().unwrap().len(), 19);
}

#[test]
fn verify_exit_codes() {
    let path = scratch("no14.json");
    let p = path.to_str().unwrap();
    let o = graphwit(&["witness", "construct", "--graph", "catalog:14", "--method", "catalog", "-o", p]);
    assert!(o.status.success());
    let o = graphwit(&["verify", "--witness", p, "--mode", "decomposable"]);
    assert!(o.status.success(), "{}", stdout(&o));

    let mut w: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    w.as_object_mut().unwrap().remove("exact");
    w["diag"][0] = (-3.0).into();
    let bad = scratch("broken.json");
    std::fs::write(&bad, w.to_string()).unwrap();
    let o = graphwit(&["verify", "--witness", bad.to_str().unwrap(), "--mode", "ppt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL mask"), "{}", stdout(&o));
    let o = graphwit(&["verify", "--witness", bad.to_str().unwrap(), "--mode", "ppt", "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], false);
    assert!(v["per_m"].as_array().unwrap().iter().any(|r| r["pass"] == false));
}

#[test]
fn dense_agrees_with_diagonal() {
    let path = scratch("cl4.json");
    let p = path.to_str().unwrap();
    graphwit(&["witness", "construct", "--graph", "linear:4", "--method", "lemma3", "--bset", "1,4", "-o", p]);
    let d = json(&["verify", "--witness", p, "--mode", "decomposable", "--dense", "--json"]);
    assert_eq!(d["pass"], true);
    // Set witnesses are decomposable but not PPT.
    let o = graphwit(&["verify", "--witness", p, "--mode", "ppt", "--dense"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("M = {2,3}"));
}

#[test]
fn monotone_extremes() {
    let pure = json(&["monotone", "--graph", "linear:4"])["value"].as_f64().unwrap();
    assert!((pure - 0.5).abs() < 1e-6, "{pure}");
    let mixed = json(&["monotone", "--graph", "linear:4", "--noise", "1"])["value"].as_f64().unwrap();
    assert!(mixed.abs() < 1e-9, "{mixed}");
}

#[test]
fn state_files_feed_commands() {
    let path = scratch("state.json");
    let p = path.to_str().unwrap();
    assert!(graphwit(&["state", "--graph", "ring:5", "--noise", "0.2", "-o", p]).status.success());
    let a = json(&["monotone", "--state", p])["value"].as_f64().unwrap();
    let b = json(&["monotone", "--graph", "ring:5", "--noise", "0.2"])["value"].as_f64().unwrap();
    assert!((a - b).abs() < 1e-12);
}

#[test]
fn closed_form_tolerance() {
    let t = json(&["tolerance", "--n", "4", "--b", "2"]);
    assert_eq!(t["exact"], "8/13");
    assert_eq!(t["fidelity_required"], 0.5);
}

#[test]
fn input_errors() {
    let o = graphwit(&["witness", "optimize", "--graph", "linear:13", "--mode", "ppt", "--no-threshold"]);
    assert_eq!(o.status.code(), Some(3));
    let o = graphwit(&["witness", "construct", "--graph", "linear:4", "--method", "lemma3", "--bset", "1,9"]);
    assert_eq!(o.status.code(), Some(2));
    let o = graphwit(&["verify", "--witness", "/nonexistent.json", "--mode", "ppt"]);
    assert_eq!(o.status.code(), Some(2));
    let o = graphwit(&["monotone"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn quick_selftest() {
    let o = graphwit(&["selftest", "-c", "3", "-c", "7"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("criterion 3: PASS"), "{out}");
    assert!(out.contains("criterion 7: PASS"), "{out}");
}

#[test]
fn construct_can_verify() {
    let w = json(&[
        "witness",
        "construct",
        "--graph",
        "linear:7",
        "--method",
        "lemma6",
        "--bset",
        "1,4",
        "--bset",
        "4,7",
        "--verify",
    ]);
    assert_eq!(w["verified"], "ppt_checked");
    assert_eq!(w["tolerance"]["exact"], "64/115");
    let w = json(&["witness", "construct", "--graph", "linear:4", "--method", "lemma3", "--bset", "1,4"]);
    assert_eq!(w["verified"], "unverified");
}
