//! Similarity based on probability, on weighted rooted trees. Rescaling a
//! tree leaves the value unchanged.

use treedist::compare::similarity_probability_distance;
use treedist::Tree;

fn main() -> treedist::Result<()> {
    let a: Tree = "[&R]((1:1,2:1):2,(3:1,4:1):1);".parse()?;
    let b: Tree = "[&R](((1:1,2:1):1,3:2):1,4:3);".parse()?;
    let half: Tree = "[&R](((1:0.5,2:0.5):0.5,3:1):0.5,4:1.5);".parse()?;
    println!(
        "d_sim(a, b)     = {:.6}",
        similarity_probability_distance(&a, &b)?
    );
    println!(
        "d_sim(a, b / 2) = {:.6}",
        similarity_probability_distance(&a, &half)?
    );
    println!(
        "d_sim(a, a)     = {:.6}",
        similarity_probability_distance(&a, &a)?
    );
    Ok(())
}
