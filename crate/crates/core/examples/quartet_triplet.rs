//! Quartet and triplet distances with their full category tables.

use treedist::quartet::{
    binomial, categorize, induced_topology, quartet_distance, triplet_distance,
    triplet_length_distance,
};
use treedist::Tree;

fn main() -> treedist::Result<()> {
    let ua: Tree = "((1,2),(3,4),(5,6));".parse()?;
    let ub: Tree = "((1,3),(2,4),5,6);".parse()?;
    println!(
        "quartet distance = {} of {} quartets",
        quartet_distance(&ua, &ub)?,
        binomial(6, 4)
    );
    println!("quartet table: {:?}", categorize(&ua, &ub, 4)?);
    println!(
        "topology of a on 1,2,3,4: {:?}",
        induced_topology(&ua, &["1", "2", "3", "4"])?
    );

    let ra: Tree = "[&R]((1:1,2:1):1,(3:1,4:1):1);".parse()?;
    let rb: Tree = "[&R](((1:1,2:1):1,3:1):1,4:1);".parse()?;
    println!("triplet distance = {}", triplet_distance(&ra, &rb)?);
    println!("triplet table: {:?}", categorize(&ra, &rb, 3)?);
    println!(
        "triplet length distance = {:.4}",
        triplet_length_distance(&ra, &rb)?
    );
    Ok(())
}
