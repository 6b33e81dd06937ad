//! One line per acceptance criterion. Correctness is exact; each criterion
//! also has a pinned wall-clock limit.

use std::time::Duration;

use tracecodes::verify::{run, VerifyConfig, ALL};

/// Seconds allowed per criterion, in criterion order.
const LIMITS: [u64; 12] = [1, 10, 300, 60, 60, 900, 60, 1, 60, 120, 600, 1800];

#[test]
fn acceptance_criteria() {
    let cfg = VerifyConfig::default();
    let report = run(&cfg, &ALL).expect("suite runs");
    let mut failed = Vec::new();
    for c in &report.criteria {
        let limit = Duration::from_secs(LIMITS[c.id as usize - 1]);
        let in_time = c.elapsed <= limit;
        let ok = c.pass && in_time && !c.sampled;
        println!(
            "criterion {:>2} {:<30} {} ({:.2}s, limit {}s) {}",
            c.id,
            c.name,
            if ok { "PASS" } else { "FAIL" },
            c.elapsed.as_secs_f64(),
            limit.as_secs(),
            c.detail
        );
        if !ok {
            failed.push(c.id);
        }
    }
    assert_eq!(report.criteria.len(), 12);
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn perturbed_table_is_caught() {
    let cfg = VerifyConfig { perturb: true, ..VerifyConfig::default() };
    let c = tracecodes::verify::run_criterion(3, &cfg);
    println!("{}", c.line());
    assert!(!c.pass);
}

#[test]
fn budget_limited_tally_is_marked_sampled() {
    let cfg = VerifyConfig { pair_budget: Some(6561 * 8), samples: 200, ..VerifyConfig::default() };
    let c = tracecodes::verify::run_criterion(6, &cfg);
    println!("{}", c.line());
    assert!(c.sampled && c.pass);
    assert!(c.detail.contains("sampled"));
}
