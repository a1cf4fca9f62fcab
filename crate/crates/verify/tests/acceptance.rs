//! Runs the thirteen acceptance criteria and prints one PASS/FAIL line each.
//! Seed from `WP_GEOM_SEED` (default 42). Exits nonzero if any criterion fails.

use wp_geom::verify::{run_criterion, CRITERIA};

fn main() {
    let seed = std::env::var("WP_GEOM_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(42u64);
    let mut failed = Vec::new();
    for &(id, _, _) in &CRITERIA {
        let report = match run_criterion(id, seed) {
            Ok(r) => r,
            Err(e) => {
                println!("FAIL {id:>2} error: {e}");
                failed.push(id);
                continue;
            }
        };
        let ok = report.pass && report.within_budget();
        println!(
            "{} {:>2} {:<24} {:>8.3}s (budget {}s)",
            if ok { "PASS" } else { "FAIL" },
            id,
            report.title,
            report.seconds,
            report.budget_seconds
        );
        for c in report.checks.iter().filter(|c| !c.pass) {
            println!("        {}: {:e} vs {:e} ({:?}, tol {:e})", c.name, c.value, c.expected, c.relation, c.tolerance);
        }
        if !ok {
            failed.push(id);
        }
    }
    println!("{} of {} criteria passed (seed {seed})", CRITERIA.len() - failed.len(), CRITERIA.len());
    if !failed.is_empty() {
        println!("failed: {failed:?}");
        std::process::exit(1);
    }
}
