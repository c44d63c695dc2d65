//! The acceptance gate: runs all nine criteria of the bundled suite and
//! prints one pass/fail line per criterion.  Run with `-- --nocapture` to
//! see the lines on success too.

use purelab::suite::run_all;

#[test]
fn acceptance_criteria() {
    let outcomes = run_all(0);
    let mut failed = Vec::new();
    for o in &outcomes {
        println!(
            "criterion {} ({}): {} ({} ms) {}",
            o.id,
            o.name,
            if o.passed { "PASS" } else { "FAIL" },
            o.millis,
            o.details
        );
        if !o.passed {
            failed.push(o.id);
        }
    }
    assert_eq!(outcomes.len(), 9);
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
