//! Acceptance battery: one line per criterion, then a single verdict.
//!
//! Run with `cargo test -p conewalk-cli --test acceptance -- --nocapture`
//! to see the lines when everything passes.

use conewalk_cli::suite::{self, CRITERIA};

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for id in 1..=CRITERIA.len() {
        let o = suite::run(id);
        println!("{}  ({:.1} s)", o.line(), o.elapsed.as_secs_f64());
        if !o.passed {
            failed.push(format!("{} ({})", o.id, o.name));
        }
    }
    assert!(failed.is_empty(), "failed criteria: {}", failed.join(", "));
}
