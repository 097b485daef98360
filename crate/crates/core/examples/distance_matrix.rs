//! All-pairs matrices for every metric a tree set admits, as CSV and JSON.

use treedist::generate::{random_trees, RandomSpec};
use treedist::metric::{distance_matrix, pair_distance, Metric, MetricOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = RandomSpec {
        leaves: 7,
        rooted: true,
        weighted: true,
    };
    let trees: Vec<(String, treedist::Tree)> = random_trees(spec, 4, 5)?
        .into_iter()
        .enumerate()
        .map(|(i, t)| (format!("t{i}"), t))
        .collect();

    let options = MetricOptions::default();
    for metric in Metric::ALL {
        match distance_matrix(metric, &trees, options) {
            Ok(report) => print!("# {}\n{}", metric.name(), report.to_csv()),
            Err(e) => println!("# {} skipped: {e}", metric.name()),
        }
    }

    let cell = pair_distance(Metric::Geodesic, &trees[0].1, &trees[1].1, options)?;
    println!(
        "geodesic t0-t1 = {:.4} ({})",
        cell.value,
        cell.note.unwrap_or_default()
    );
    println!(
        "{}",
        distance_matrix(Metric::Rf, &trees, options)?.to_json()
    );
    Ok(())
}
