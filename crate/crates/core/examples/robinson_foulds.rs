//! Robinson-Foulds distance on rooted and unrooted trees, plus the strict
//! consensus of a small profile.

use treedist::newick::serialize;
use treedist::rf::{rf_distance, rf_distance_unrooted, strict_consensus, ClusterTable};
use treedist::tree::clusters;
use treedist::Tree;

fn main() -> treedist::Result<()> {
    let a: Tree = "[&R](((1,2),3),(4,5));".parse()?;
    let b: Tree = "[&R](((1,3),2),(4,5));".parse()?;
    println!("rooted RF  = {}", rf_distance(&a, &b)?);

    let ua = a.with_rooted(false);
    let ub = b.with_rooted(false);
    println!("unrooted RF = {}", rf_distance_unrooted(&ua, &ub)?);

    // a table built once answers membership queries for many clusters
    let table = ClusterTable::new(&a)?;
    for c in clusters(&b)? {
        println!("  {c} in a: {}", table.contains(&c));
    }

    let profile: Vec<Tree> = [
        "[&R](((1,2),3),(4,5));",
        "[&R]((1,2),(3,(4,5)));",
        "[&R](((1,2),(4,5)),3);",
    ]
    .iter()
    .map(|s| s.parse())
    .collect::<treedist::Result<_>>()?;
    println!(
        "strict consensus: {}",
        serialize(&strict_consensus(&profile)?, None)
    );
    Ok(())
}
