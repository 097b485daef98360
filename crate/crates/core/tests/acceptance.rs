//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Tolerances are fixed below.

use std::collections::HashSet;
use std::time::Instant;

use treedist::axioms::check_metric_axioms;
use treedist::bench::run_bench;
use treedist::compare::{ccc, similarity_probability_distance};
use treedist::generate::{random_tree, random_trees, RandomSpec};
use treedist::geodesic::{decompose, geodesic_distance, geodesic_oracle};
use treedist::metric::{distance_matrix, Metric, MetricOptions};
use treedist::newick::{parse, parse_with, serialize, ParseOptions, UnaryPolicy};
use treedist::quartet::{binomial, categorize, quartet_distance, triplet_distance};
use treedist::rf::{rf_distance, rf_distance_oracle};
use treedist::spr::{spr_distance_bfs, spr_distance_maf, spr_distances_from};
use treedist::tree::{
    canonical_newick, count_binary_topologies, is_identical, is_weight_identical,
};
use treedist::{Tree, TreeDistError};

const GEODESIC_TOL: f64 = 1e-9;
const CCC_TOL: f64 = 1e-12;
const RF_ORACLE_BUDGET_S: f64 = 10.0;
const SPR_BUDGET_S: f64 = 300.0;
const RF_LARGE_BUDGET_S: f64 = 1.0;
const RF_DOUBLING_MAX: f64 = 2.5;

type Outcome = Result<String, String>;

fn spec(leaves: usize, rooted: bool, weighted: bool) -> RandomSpec {
    RandomSpec {
        leaves,
        rooted,
        weighted,
    }
}

fn trees(leaves: usize, rooted: bool, weighted: bool, count: usize, seed: u64) -> Vec<Tree> {
    random_trees(spec(leaves, rooted, weighted), count, seed).expect("random trees")
}

fn t(text: &str) -> Tree {
    text.parse().expect("literal tree")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rf_oracle() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for n in 4..=64 {
        let sample = trees(n, true, false, 1000, n as u64);
        for pair in sample.chunks(2) {
            let fast = rf_distance(&pair[0], &pair[1]).map_err(|e| e.to_string())?;
            let slow = rf_distance_oracle(&pair[0], &pair[1]).map_err(|e| e.to_string())?;
            ensure(fast == slow, || format!("n={n}: {fast} != oracle {slow}"))?;
            pairs += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < RF_ORACLE_BUDGET_S, || format!("took {secs:.2} s"))?;
    Ok(format!(
        "{pairs} pairs exact, {secs:.2} s < {RF_ORACLE_BUDGET_S} s"
    ))
}

fn closed_forms() -> Outcome {
    let (three, four) = (
        count_binary_topologies(3).unwrap(),
        count_binary_topologies(4).unwrap(),
    );
    ensure(three == 3 && four == 15, || {
        format!("counts {three}, {four}")
    })?;
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0);
    let seen: HashSet<String> = (0..10_000)
        .map(|_| canonical_newick(&random_tree(&mut rng, spec(4, true, false)).unwrap(), false))
        .collect();
    ensure(seen.len() == 15, || {
        format!("{} distinct four-leaf topologies", seen.len())
    })?;
    Ok("3 and 15 topologies; 15 of 15 hit in 10000 samples".into())
}

fn geodesic_worked_values() -> Outcome {
    let one = geodesic_distance(&t("(1:1,2:1,(3:1,4:1):1);"), &t("(1:1,3:1,(2:1,4:1):1);"))
        .map_err(|e| e.to_string())?
        .length;
    ensure(one == 2.0, || format!("single pair gave {one}"))?;
    let a = t("(((1:1,2:1):1,3:1):1,((4:1,5:1):1,6:1):1);");
    let b = t("(((1:1,3:1):1,2:1):1,((4:1,6:1):1,5:1):1);");
    let two = geodesic_distance(&a, &b).map_err(|e| e.to_string())?.length;
    let oracle = geodesic_oracle(&a, &b).map_err(|e| e.to_string())?;
    let target = 2.0 * 2f64.sqrt();
    ensure(
        (two - target).abs() <= GEODESIC_TOL && (oracle - two).abs() <= GEODESIC_TOL,
        || format!("two pairs gave {two}, oracle {oracle}"),
    )?;
    Ok(format!(
        "2 exactly; {two:.12} vs 2*sqrt(2), oracle within {GEODESIC_TOL:e}"
    ))
}

fn geodesic_sandwich() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    let mut seed = 0u64;
    while checked < 200 {
        seed += 1;
        let n = 5 + (seed % 4) as usize;
        let rooted = seed % 3 == 0;
        let pair = trees(n, rooted, true, 2, 10_000 + seed);
        let d = decompose(&pair[0], &pair[1]).map_err(|e| e.to_string())?;
        if d.a_unique.entries.len() > 5 || d.b_unique.entries.len() > 5 {
            continue;
        }
        let r = geodesic_distance(&pair[0], &pair[1]).map_err(|e| e.to_string())?;
        let oracle = geodesic_oracle(&pair[0], &pair[1]).map_err(|e| e.to_string())?;
        let (lo, hi) = (r.lower_bound(), r.cone_length());
        ensure(
            lo <= r.length + GEODESIC_TOL && r.length <= hi + GEODESIC_TOL,
            || format!("seed {seed}: {lo} <= {} <= {hi} fails", r.length),
        )?;
        worst = worst.max((r.length - oracle).abs());
        ensure(worst <= GEODESIC_TOL, || {
            format!("seed {seed}: oracle differs by {worst:e}")
        })?;
        checked += 1;
    }
    Ok(format!(
        "{checked} pairs in the sandwich, max oracle gap {worst:.1e} <= {GEODESIC_TOL:e}"
    ))
}

fn axioms_on_triples(
    name: &str,
    make: impl Fn(u64) -> Vec<Tree>,
    dist: impl Fn(&Tree, &Tree) -> treedist::Result<f64>,
    same: impl Fn(&Tree, &Tree) -> treedist::Result<bool>,
    tolerance: f64,
) -> Result<(), String> {
    for seed in 0..100 {
        let triple = make(seed);
        let report = check_metric_axioms(&triple, &dist, &same, tolerance)
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(report.passed(), || {
            format!("{name}, triple {seed}: {}", report.violations[0])
        })?;
    }
    Ok(())
}

fn metric_axioms() -> Outcome {
    let rooted = |n: usize, w: bool| move |s: u64| trees(n, true, w, 3, 20_000 + s);
    let unrooted = |n: usize, w: bool| move |s: u64| trees(n, false, w, 3, 30_000 + s);
    axioms_on_triples(
        "rf",
        rooted(6, false),
        |a, b| Ok(rf_distance(a, b)? as f64),
        is_identical,
        0.0,
    )?;
    axioms_on_triples(
        "triplet",
        rooted(6, false),
        |a, b| Ok(triplet_distance(a, b)? as f64),
        is_identical,
        0.0,
    )?;
    axioms_on_triples(
        "quartet",
        unrooted(6, false),
        |a, b| Ok(quartet_distance(a, b)? as f64),
        is_identical,
        0.0,
    )?;
    axioms_on_triples(
        "node",
        unrooted(6, false),
        |a, b| treedist::compare::node_distance(a, b, 1),
        is_identical,
        1e-12,
    )?;
    axioms_on_triples(
        "geodesic",
        unrooted(7, true),
        |a, b| Ok(geodesic_distance(a, b)?.length),
        is_weight_identical,
        GEODESIC_TOL,
    )?;
    axioms_on_triples(
        "spr",
        rooted(7, false),
        |a, b| Ok(spr_distance_maf(a, b)?.distance as f64),
        is_identical,
        0.0,
    )?;

    // the same split on two edges of one tree: raw length is ambiguous and
    // asymmetric, and the report says so
    let keep = ParseOptions {
        unary: UnaryPolicy::Keep,
        ..Default::default()
    };
    let a = t("((1:1,2:1):1,3:1,4:1);");
    let b = parse_with("(((1:1,2:1):1):2,3:1,4:1);", &keep)
        .unwrap()
        .trees
        .remove(0);
    let named = vec![("a".to_owned(), a), ("b".to_owned(), b)];
    let raw = MetricOptions {
        raw: true,
        ..Default::default()
    };
    let r = distance_matrix(Metric::Rfl, &named, raw).map_err(|e| e.to_string())?;
    let flagged = r.diagnostics.iter().any(|d| d.contains("asymmetric"))
        && r.diagnostics.iter().any(|d| d.contains("ambiguous"));
    ensure(r.matrix[0][1] != r.matrix[1][0] && flagged, || {
        format!("raw rfl report {:?}", r)
    })?;
    Ok(format!(
        "6 metrics x 100 triples; raw rfl {} vs {} flagged",
        r.matrix[0][1], r.matrix[1][0]
    ))
}

fn spr_cross_check() -> Outcome {
    let start = Instant::now();
    let all = spr_distances_from(&t("((((1,2),3),4),5);")).map_err(|e| e.to_string())?;
    let topologies: Vec<Tree> = all.keys().map(|k| t(k)).collect();
    ensure(topologies.len() == 105, || {
        format!("{} five-leaf topologies", topologies.len())
    })?;
    for a in &topologies {
        let bfs = spr_distances_from(a).map_err(|e| e.to_string())?;
        for b in &topologies {
            let maf = spr_distance_maf(a, b).map_err(|e| e.to_string())?.distance;
            let expected = bfs[&canonical_newick(b, false)];
            ensure(maf == expected, || {
                format!(
                    "{} vs {}: forest {maf}, search {expected}",
                    canonical_newick(a, false),
                    canonical_newick(b, false)
                )
            })?;
        }
    }
    let six = trees(6, true, false, 400, 40_000);
    for pair in six.chunks(2) {
        let maf = spr_distance_maf(&pair[0], &pair[1])
            .map_err(|e| e.to_string())?
            .distance;
        let bfs = spr_distance_bfs(&pair[0], &pair[1]).map_err(|e| e.to_string())?;
        ensure(maf == bfs, || {
            format!("six leaves: forest {maf}, search {bfs}")
        })?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < SPR_BUDGET_S, || format!("took {secs:.1} s"))?;
    Ok(format!(
        "105x105 five-leaf pairs and 200 six-leaf pairs agree, {secs:.1} s"
    ))
}

fn conservation() -> Outcome {
    let mut calls = 0;
    for seed in 0..200u64 {
        let n = 4 + (seed % 12) as usize;
        for (k, rooted) in [(3, true), (4, false)] {
            let pair = trees(n, rooted, false, 2, 50_000 + seed);
            let table = categorize(&pair[0], &pair[1], k).map_err(|e| e.to_string())?;
            let want = binomial(n as u64, k as u64);
            ensure(table.total() == want, || {
                format!("n={n}, k={k}: {} != {want}", table.total())
            })?;
            calls += 1;
        }
    }
    Ok(format!("{calls} tables sum to C(n,k)"))
}

fn rf_performance() -> Outcome {
    let rows = run_bench(Metric::Rf, &[10_000, 20_000, 40_000, 80_000], 31, 0)
        .map_err(|e| e.to_string())?;
    let worst = rows
        .iter()
        .filter_map(|r| r.doubling_ratio)
        .fold(0.0, f64::max);
    ensure(worst <= RF_DOUBLING_MAX, || {
        format!("doubling ratio {worst:.2}")
    })?;
    let large = run_bench(Metric::Rf, &[100_000], 5, 0).map_err(|e| e.to_string())?;
    let secs = large[0].median.as_secs_f64();
    ensure(secs < RF_LARGE_BUDGET_S, || {
        format!("n=1e5 median {secs:.3} s")
    })?;
    Ok(format!(
        "n=1e5 median {:.1} ms; worst doubling ratio {worst:.2} <= {RF_DOUBLING_MAX}",
        secs * 1e3
    ))
}

fn round_trip() -> Outcome {
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(60_000);
    for i in 0..1000 {
        let n = 2 + i % 63;
        let tree = random_tree(&mut rng, spec(n, i % 2 == 0, true)).map_err(|e| e.to_string())?;
        let back = parse(&serialize(&tree, None))
            .map_err(|e| e.to_string())?
            .trees
            .remove(0);
        ensure(is_weight_identical(&tree, &back).unwrap_or(false), || {
            format!("tree {i} changed")
        })?;
    }
    Ok("1000 weighted trees, n <= 64, weight-identical after round trip".into())
}

fn ccc_and_sim_bounds() -> Outcome {
    let (mut defined, mut sims) = (0, 0);
    let mut sim_range = (f64::INFINITY, f64::NEG_INFINITY);
    for seed in 0..300u64 {
        let n = 3 + (seed % 10) as usize;
        let pair = trees(n, true, true, 2, 70_000 + seed);
        let (a, b) = (&pair[0], &pair[1]);
        match ccc(a, b) {
            Ok(c) => {
                ensure((-1.0..=1.0).contains(&c), || format!("ccc {c}"))?;
                let own = ccc(a, a).map_err(|e| e.to_string())?;
                ensure((own - 1.0).abs() <= CCC_TOL, || format!("ccc(T,T) = {own}"))?;
                defined += 1;
            }
            Err(TreeDistError::DegenerateVariance) => {}
            Err(e) => return Err(e.to_string()),
        }
        let d = similarity_probability_distance(a, b).map_err(|e| e.to_string())?;
        ensure((0.0..=1.0).contains(&d), || {
            format!("seed {seed}: d_Sim = {d}")
        })?;
        sim_range = (sim_range.0.min(d), sim_range.1.max(d));
        let own = similarity_probability_distance(a, a).map_err(|e| e.to_string())?;
        ensure(own == 0.0, || format!("d_Sim(T,T) = {own}"))?;
        let halved = similarity_probability_distance(&a.scaled(0.5), &b.scaled(0.5))
            .map_err(|e| e.to_string())?;
        ensure(halved == d, || format!("halving changed {d} to {halved}"))?;
        sims += 1;
    }
    Ok(format!(
        "{defined} defined ccc values in [-1,1], ccc(T,T) within {CCC_TOL:e}; {sims} d_Sim in [{:.3}, {:.3}], exact under halving",
        sim_range.0, sim_range.1
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("rf matches the cluster-set oracle", rf_oracle),
        ("closed-form topology counts", closed_forms),
        ("geodesic worked values", geodesic_worked_values),
        ("geodesic sandwich and oracle", geodesic_sandwich),
        ("metric axioms", metric_axioms),
        ("spr forest equals search", spr_cross_check),
        ("category table conservation", conservation),
        ("rf performance", rf_performance),
        ("newick round trip", round_trip),
        ("ccc and d_Sim bounds", ccc_and_sim_bounds),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
