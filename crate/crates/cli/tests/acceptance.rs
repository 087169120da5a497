//! One line per acceptance criterion, each at its stated tolerance and time
//! budget. Exits nonzero when any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use semicube::checks::{run_suite, CheckConfig, CheckReport, Verdict};

struct Criterion {
    number: usize,
    name: &'static str,
    budget: Duration,
    run: fn() -> (bool, String),
}

fn suites(max_degree: usize, names: &[&str]) -> (bool, String) {
    let cfg = CheckConfig { max_degree, ..Default::default() };
    let reports: Vec<CheckReport> = names.iter().map(|s| run_suite(&cfg, s)).collect();
    let passed = reports.iter().all(|r| r.verdict == Verdict::Pass);
    let summary = reports.iter().map(|r| format!("{}: {}", r.suite, r.summary)).collect::<Vec<_>>().join("; ");
    (passed, summary)
}

fn determinism() -> (bool, String) {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_semicube"))
            .args(["check", "all", "--max-degree", "2", "--seed", "42", "--json"])
            .env_remove("SEMICUBE_TIMINGS")
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    (same, format!("{} report bytes, identical: {same}", a.stdout.len()))
}

fn main() {
    let criteria = [
        Criterion { number: 1, name: "hom-set census", budget: Duration::from_secs(10), run: || suites(3, &["census"]) },
        Criterion {
            number: 2,
            name: "factorization round-trip",
            budget: Duration::from_secs(30),
            run: || suites(3, &["factorization"]),
        },
        Criterion {
            number: 3,
            name: "skeletal reconstruction",
            budget: Duration::from_secs(60),
            run: || suites(3, &["skeletal"]),
        },
        Criterion { number: 4, name: "cotensor oracle", budget: Duration::from_secs(120), run: || suites(2, &["cotensor"]) },
        Criterion { number: 5, name: "gap surjectivity", budget: Duration::from_secs(120), run: || suites(2, &["gap"]) },
        Criterion { number: 6, name: "D_R structure", budget: Duration::from_secs(300), run: || suites(3, &["directness"]) },
        Criterion {
            number: 7,
            name: "contractibility zig-zag",
            budget: Duration::from_secs(60),
            run: || suites(2, &["contractibility"]),
        },
        Criterion {
            number: 8,
            name: "density and monoidality",
            budget: Duration::from_secs(300),
            run: || suites(2, &["density", "monoidality"]),
        },
        Criterion { number: 9, name: "cone extension", budget: Duration::from_secs(60), run: || suites(2, &["cone"]) },
        Criterion { number: 10, name: "determinism", budget: Duration::from_secs(600), run: determinism },
    ];
    let mut failed = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let (passed, summary) = (c.run)();
        let elapsed = start.elapsed();
        let ok = passed && elapsed < c.budget;
        println!(
            "criterion {:2} {:26} {} exact, {:.1}s < {}s | {summary}",
            c.number,
            c.name,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
        if !ok {
            failed.push(c.number);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
