//! Runs the full acceptance battery and prints one line per criterion.
//!
//! Criteria 1 to 11 run in-process at the default configuration. Criterion 12
//! runs the `tts` binary twice with the default seed and compares the bytes.

use std::process::{Command, ExitCode};

use tts_core::suite::{run_criterion, SuiteConfig, CRITERIA};

fn run_binary() -> (Vec<u8>, bool) {
    let out = Command::new(env!("CARGO_BIN_EXE_tts"))
        .args(["suite", "--seed", "42"])
        .output()
        .expect("tts binary runs");
    (out.stdout, out.status.success())
}

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let mut failed = 0;
    for &(id, name) in CRITERIA.iter() {
        let (pass, detail) = if id == 12 {
            let (a, ok_a) = run_binary();
            let (b, ok_b) = run_binary();
            let same = a == b && !a.is_empty();
            (same && ok_a && ok_b, format!("{} bytes, identical={same}, exit ok={}", a.len(), ok_a && ok_b))
        } else {
            let r = run_criterion(id, &cfg);
            (r.pass, format!("{} checked, {}", r.checked, r.detail))
        };
        if !pass {
            failed += 1;
        }
        println!("criterion {id:>2} {name:<30} {} ({detail})", if pass { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
