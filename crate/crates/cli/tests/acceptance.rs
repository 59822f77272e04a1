//! One PASS/FAIL line per acceptance criterion, each run as its named
//! experiment with default parameters and the default seed.

use std::time::{Duration, Instant};

use clrlab_cli::{default_config, run_experiment};

/// (criterion, experiment kind, wall-clock budget)
const CRITERIA: &[(u32, &str, Duration)] = &[
    (1, "bound-vs-oracle-lattice", Duration::from_secs(120)),
    (2, "subordination-identity", Duration::from_secs(1)),
    (3, "free-group", Duration::from_secs(60)),
    (4, "levy-exponents", Duration::from_secs(120)),
    (5, "affine-mc", Duration::from_secs(120)),
    (6, "heisenberg-mc", Duration::from_secs(120)),
    (7, "group-walks", Duration::from_secs(180)),
    (8, "anderson", Duration::from_secs(300)),
    (9, "quantum-graph-edges", Duration::from_secs(30)),
    (10, "oracle-integrity", Duration::from_secs(60)),
    (11, "discrete-split", Duration::from_secs(10)),
];

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    for &(n, kind, budget) in CRITERIA {
        let cfg = default_config(kind).expect("every criterion has a default config");
        let start = Instant::now();
        let result = run_experiment(&cfg);
        let elapsed = start.elapsed();
        let (ok, detail) = match &result {
            Ok(outcome) => {
                let failures: Vec<String> =
                    outcome.failed_checks().map(|c| format!("{}: {}", c.name, c.detail)).collect();
                if failures.is_empty() {
                    (elapsed <= budget, format!("{} checks", outcome.checks.len()))
                } else {
                    (false, failures.join("; "))
                }
            }
            Err(e) => (false, e.to_string()),
        };
        let timing = format!("{:.1} s of {} s", elapsed.as_secs_f64(), budget.as_secs());
        let over = if elapsed > budget { " (over budget)" } else { "" };
        println!(
            "{} criterion {n}: {kind} [{timing}{over}] {detail}",
            if ok { "PASS" } else { "FAIL" }
        );
        if !ok {
            failed.push(n);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
