//! Align: a minimum-cost matching of edges between two unrooted trees.

use treedist::compare::align_score;
use treedist::Tree;

fn main() -> treedist::Result<()> {
    let a: Tree = "((1,2),(3,4),(5,6));".parse()?;
    let b: Tree = "((1,2),(3,5),(4,6));".parse()?;
    let r = align_score(&a, &b)?;
    println!("align score = {:.4}", r.total);
    for (x, y) in &r.matching {
        println!("  edge {x} of a <-> edge {y} of b");
    }
    Ok(())
}
