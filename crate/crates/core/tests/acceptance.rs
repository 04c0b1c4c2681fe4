//! Acceptance criteria 1–9. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ordrefl_core::checks::{self, SuiteReport, WormTable};
use ordrefl_core::oracle::OracleBudget;

struct Outcome {
    id: u32,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn within(report: &SuiteReport, limit: Duration) -> (bool, String) {
    let took = Duration::from_millis(report.elapsed_ms as u64);
    let ok = report.passed && took <= limit;
    let mut detail = format!(
        "checked={} failed={} time={:.2}s limit={}s",
        report.checked,
        report.failed,
        took.as_secs_f64(),
        limit.as_secs()
    );
    for f in report.failures.iter().take(5) {
        detail.push_str(&format!("\n      {f}"));
    }
    (ok, detail)
}

fn main() -> ExitCode {
    let mut outcomes = Vec::new();
    let minute = Duration::from_secs(60);

    let r = checks::axioms(3, 2);
    let (passed, detail) = within(&r, minute);
    outcomes.push(Outcome { id: 1, title: "axiom suite", passed, detail });

    let budget = OracleBudget::default();
    // Worms of length <= 4 over letters {0,1,2}, and the 85-worm family of
    // length <= 3 over letters {0,..,3}.
    let main_corpus = checks::oracle_agreement(2, 4, &budget);
    let alt_corpus = checks::oracle_agreement(3, 3, &budget);
    let mut passed = true;
    let mut detail = String::new();
    let mut certs_ok = true;
    let mut cert_detail = String::new();
    for (label, c) in [("121 worms", &main_corpus), ("85 worms", &alt_corpus)] {
        let (ok, d) = within(&c.agreement, 5 * minute);
        passed &= ok && c.unresolved == 0;
        detail.push_str(&format!(
            "[{label}: derivable={} refuted={} unresolved={} {d}] ",
            c.derivable, c.refuted, c.unresolved
        ));
        let (ok, d) = within(&c.certificates, 5 * minute);
        certs_ok &= ok;
        cert_detail.push_str(&format!("[{label}: {d}] "));
    }
    outcomes.push(Outcome { id: 2, title: "oracle agreement", passed, detail });

    let start = Instant::now();
    let table = WormTable::build(2, 5);
    let build = start.elapsed();
    let worms = table.len();
    let ten = 10 * minute;
    for (id, title, report) in [
        (3, "trichotomy", checks::trichotomy(&table)),
        (4, "well-foundedness", checks::acyclic(&table)),
        (5, "order isomorphism", checks::iso(&table)),
    ] {
        let (ok, d) = within(&report, ten.saturating_sub(build));
        let detail = format!("worms={worms} table={:.2}s {d}", build.as_secs_f64());
        outcomes.push(Outcome { id, title, passed: ok && worms == 364, detail });
    }

    let r = checks::schmerl();
    let (passed, detail) = within(&r, Duration::from_secs(1) * r.checked as u32);
    outcomes.push(Outcome { id: 6, title: "Schmerl identities", passed, detail });

    let r = checks::ordinal_algebra(1000, 4, 0x5eed);
    let (passed, detail) = within(&r, minute);
    outcomes.push(Outcome { id: 7, title: "ordinal algebra", passed, detail });

    outcomes.push(Outcome { id: 8, title: "certificate integrity", passed: certs_ok, detail: cert_detail });

    let r = checks::worm_normalization(4, 1, 8);
    let (passed, detail) = within(&r, 5 * minute);
    outcomes.push(Outcome { id: 9, title: "worm normalization", passed, detail });

    outcomes.sort_by_key(|o| o.id);
    let mut all = true;
    for o in &outcomes {
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {} {verdict} {:<22} {}", o.id, o.title, o.detail);
        all &= o.passed;
    }
    if all {
        println!("acceptance: all {} criteria pass", outcomes.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
