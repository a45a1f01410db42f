//! Acceptance run: the twelve seeded checks with their time budgets.

use std::time::{Duration, Instant};

use bdrplus::cli::suite::run_criterion;

const SEED: u64 = 2024;
const BUDGET_SECS: [u64; 12] = [1, 1, 5, 5, 30, 10, 10, 10, 10, 30, 10, 120];

fn main() {
    let mut failures = 0;
    for id in 1..=12u32 {
        let start = Instant::now();
        let outcome = run_criterion(id, SEED);
        let elapsed = start.elapsed();
        let budget = Duration::from_secs(BUDGET_SECS[id as usize - 1]);
        let in_time = elapsed <= budget;
        let pass = outcome.pass && in_time;
        if !pass {
            failures += 1;
        }
        let mut line = format!(
            "{} criterion {id:>2}: {} ({} cases, {:.3}s of {}s)",
            if pass { "PASS" } else { "FAIL" },
            outcome.title,
            outcome.cases,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        if !outcome.detail.is_empty() {
            line += &format!(": {}", outcome.detail);
        }
        if !in_time {
            line += ": over the time budget";
        }
        println!("{line}");
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
