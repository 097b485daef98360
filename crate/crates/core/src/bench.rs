//! Wall-clock timing of a metric on random tree pairs of growing size.

use std::time::{Duration, Instant};

use crate::error::Result;
use crate::generate::{random_trees, RandomSpec};
use crate::metric::{pair_distance, Metric, MetricOptions};

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub leaves: usize,
    pub median: Duration,
    /// Median over the previous row's median, when the size doubled.
    pub doubling_ratio: Option<f64>,
}

/// Input shape a metric accepts, binary and seeded.
pub fn bench_spec(metric: Metric, leaves: usize) -> RandomSpec {
    let req = metric.requirements();
    RandomSpec {
        leaves,
        rooted: req.rooted.unwrap_or(true),
        weighted: req.weighted || matches!(metric, Metric::Rfl | Metric::Geodesic),
    }
}

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort();
    xs[xs.len() / 2]
}

/// Times `metric` on one random pair per size, `repetitions` times each,
/// keeping the median. One untimed call warms caches first.
pub fn run_bench(
    metric: Metric,
    sizes: &[usize],
    repetitions: usize,
    seed: u64,
) -> Result<Vec<BenchRow>> {
    let mut rows: Vec<BenchRow> = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let pair = random_trees(bench_spec(metric, n), 2, seed)?;
        std::hint::black_box(pair_distance(
            metric,
            &pair[0],
            &pair[1],
            MetricOptions::default(),
        )?);
        let mut times = Vec::with_capacity(repetitions.max(1));
        for _ in 0..repetitions.max(1) {
            let start = Instant::now();
            std::hint::black_box(pair_distance(
                metric,
                &pair[0],
                &pair[1],
                MetricOptions::default(),
            )?);
            times.push(start.elapsed());
        }
        let m = median(times);
        let doubling_ratio = rows
            .last()
            .filter(|prev| prev.leaves * 2 == n)
            .map(|prev| m.as_secs_f64() / prev.median.as_secs_f64().max(1e-9));
        rows.push(BenchRow {
            leaves: n,
            median: m,
            doubling_ratio,
        });
    }
    Ok(rows)
}
