//! Acceptance criteria 1 to 10, one PASS/FAIL line each.

use std::process::Command;
use std::time::{Duration, Instant};

use qdirac::verify::{self, Check, VerifyConfig};

fn report(check: &Check, limit: Option<Duration>) -> bool {
    let in_time = limit.is_none_or(|l| check.elapsed < l);
    let ok = check.passed && in_time;
    let timing = match limit {
        Some(l) => format!(" [{:.2?} / limit {:.0?}]", check.elapsed, l),
        None => format!(" [{:.2?}]", check.elapsed),
    };
    println!("criterion {:>2}: {} {}{}", check.criterion, if ok { "PASS" } else { "FAIL" }, check, timing);
    ok
}

#[test]
fn acceptance_criteria() {
    let cfg = VerifyConfig::default();
    let secs = Duration::from_secs;
    let suites: [(fn(&VerifyConfig) -> Check, Option<Duration>); 9] = [
        (verify::golden_spectrum, Some(secs(10))),
        (verify::golden_clifford, Some(secs(1))),
        (verify::dirac_theorem, None),
        (verify::form_uniqueness, None),
        (verify::hecke, Some(secs(30))),
        (verify::spin_module, None),
        (verify::omega, None),
        (verify::summability, Some(secs(5))),
        (verify::classical_limit, None),
    ];
    let mut all = true;
    for (suite, limit) in suites {
        all &= report(&suite(&cfg), limit);
    }

    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_qdirac")).arg("verify").output().expect("run qdirac verify");
    let elapsed = start.elapsed();
    let ok = out.status.code() == Some(0) && elapsed < secs(120);
    println!(
        "criterion 10: {} verify CLI exit {:?} in {:.2?} (limit 2m)",
        if ok { "PASS" } else { "FAIL" },
        out.status.code(),
        elapsed
    );
    all &= ok;
    assert!(all, "some acceptance criteria failed");
}
