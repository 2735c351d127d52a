//! Acceptance matrix. Prints one PASS/FAIL line per check, then fails the
//! test if any check failed. Run with `--nocapture` to see the lines.

use mlsi_core::suite::{run_criterion, SuiteOptions, CRITERIA};

#[test]
fn acceptance_matrix() {
    let opts = SuiteOptions::default();
    let mut failed = Vec::new();
    for id in 1..=CRITERIA {
        let row = run_criterion(id, &opts);
        println!("{}", row.line());
        for note in &row.info {
            println!("       info: {note}");
        }
        if !row.pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failing checks: {failed:?}");
}
