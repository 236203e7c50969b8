//! Acceptance criteria 1 to 8 at their stated tolerances, one line each.
//!
//! `GRAPHWIT_QUICK=1` skips the full 16-qubit sweeps of criterion 4.

use std::process::ExitCode;

use graphwit::selftest::{self, Options, CRITERIA};

fn main() -> ExitCode {
    // libtest flags such as `--nocapture` or a name filter are ignored.
    let opts = Options { full_sweep: std::env::var_os("GRAPHWIT_QUICK").is_none(), ..Options::default() };
    let mut failed = Vec::new();
    for id in CRITERIA {
        let o = selftest::run(id, &opts).expect("known criterion");
        println!("{o}");
        for c in o.failures() {
            println!("    FAIL {}: {}", c.label, c.detail);
        }
        for n in &o.notes {
            println!("    note: {n}");
        }
        if !o.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: criteria {failed:?} fail");
        ExitCode::FAILURE
    }
}
