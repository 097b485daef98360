//! Checking the metric axioms over a sample, for RF and for a custom distance.

use treedist::axioms::{check_metric_axioms, rf_is_metric_suite};
use treedist::compare::node_distance;
use treedist::generate::{random_trees, RandomSpec};
use treedist::tree::is_identical;

fn main() -> treedist::Result<()> {
    let sample = random_trees(
        RandomSpec {
            leaves: 8,
            rooted: true,
            weighted: false,
        },
        12,
        3,
    )?;
    let rf = rf_is_metric_suite(&sample)?;
    println!("rf: {} triples, passed={}", rf.triples, rf.passed());

    let report = check_metric_axioms(
        &sample,
        |a, b| node_distance(a, b, 2),
        |a, b| is_identical(a, b),
        1e-12,
    )?;
    println!("node distance: passed={}", report.passed());
    for v in report.violations.iter().take(3) {
        println!("  {v:?}");
    }
    Ok(())
}
