//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.
//!
//! Criteria 5 and 6 include statements that are false for unstable terms
//! (idempotence of choice, and merging silent prefixes), so they fail by
//! design; the restricted forms that do hold are reported alongside.

use std::process::ExitCode;
use std::time::Instant;

use cll::testkit::suites::{
    axiom_soundness, completeness, constants, counterexamples, ec3_unrestricted, invariants, laws,
    normal_forms, oracle_semantics_suite, oracle_sim_suite, SuiteConfig, SuiteReport,
};

const SEED: u64 = 20_240_601;

fn cfg(count: usize) -> SuiteConfig {
    let jobs = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    SuiteConfig { seed: SEED, count, jobs }
}

fn criterion(n: usize, title: &str, run: impl FnOnce() -> Vec<SuiteReport>) -> bool {
    let start = Instant::now();
    let reports = run();
    let checked: usize = reports.iter().map(|r| r.checked).sum();
    let bad: Vec<&SuiteReport> = reports.iter().filter(|r| !r.passed()).collect();
    let tag = if bad.is_empty() { "PASS" } else { "FAIL" };
    println!(
        "{tag} criterion {n}: {title} ({} suites, {checked} checks, {} failing suites, {:.1?})",
        reports.len(),
        bad.len(),
        start.elapsed()
    );
    for r in bad {
        println!("  {}", r.to_string().replace('\n', "\n  "));
    }
    tag == "PASS"
}

fn main() -> ExitCode {
    let started = Instant::now();
    let results = [
        criterion(1, "inconsistency of reference terms", || vec![constants()]),
        criterion(2, "reference counterexamples", || vec![counterexamples()]),
        criterion(3, "structural invariants, 10000 terms of degree <= 30", || vec![invariants(&cfg(10_000), 30)]),
        criterion(
            4,
            "oracle agreement, 2000 terms of degree <= 12 and 1000 stable pairs",
            || vec![oracle_semantics_suite(&cfg(2_000), 12), oracle_sim_suite(&cfg(1_000), 12)],
        ),
        criterion(5, "algebraic laws, 500 instances each", || laws(&cfg(500))),
        criterion(6, "axiom soundness, 500 instances each", || {
            let mut r = axiom_soundness(&cfg(500));
            r.push(ec3_unrestricted(&cfg(500)));
            r
        }),
        criterion(7, "normal forms, 2000 terms", || vec![normal_forms(&cfg(2_000), 12)]),
        criterion(8, "prover agrees with refinement, 1000 pairs of degree <= 10", || vec![completeness(&cfg(1_000), 10)]),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("{} of {} criteria passed in {:.1?}", results.len() - failed, results.len(), started.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
