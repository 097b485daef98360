//! Robinson-Foulds length: branch-length differences over matched edges.

use treedist::rf::{rfl_distance, rfl_distance_raw};
use treedist::Tree;

fn main() -> treedist::Result<()> {
    let a: Tree = "((A:1,B:2):0.5,C:1,D:1.5);".parse()?;
    let b: Tree = "((A:1,C:2):0.25,B:1,D:1.5);".parse()?;
    let r = rfl_distance(&a, &b)?;
    println!("RFL = {}", r.value);
    println!(
        "  matched part {} over {} edge pairs",
        r.matched,
        r.matching.pairs.len()
    );
    println!("  unmatched in a {}, in b {}", r.unmatched_a, r.unmatched_b);

    // on the trees as written; the matching may not be unique
    match rfl_distance_raw(&a, &b) {
        Ok(raw) => println!("raw RFL = {}", raw.value),
        Err(e) => println!("raw RFL unavailable: [{}] {e}", e.code()),
    }
    Ok(())
}
