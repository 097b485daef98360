//! Node (path difference) distance with exponents 1 and 2.

use treedist::compare::node_distance;
use treedist::Tree;

fn main() -> treedist::Result<()> {
    let a: Tree = "((1,2),(3,4),(5,6));".parse()?;
    let b: Tree = "(1,(2,(3,(4,(5,6)))));".parse()?;
    for k in [1, 2] {
        println!("k={k}: {:.4}", node_distance(&a, &b, k)?);
    }
    Ok(())
}
