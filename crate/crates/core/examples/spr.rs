//! Rooted subtree prune and regraft: single moves, neighbourhoods and the
//! distance with an agreement forest as witness.

use treedist::newick::serialize;
use treedist::spr::{
    rspr_apply, rspr_neighbors, spr_distance_bfs, spr_distance_maf, unrooted_spr_distance_bfs,
};
use treedist::tree::unrooted_view;
use treedist::Tree;

fn main() -> treedist::Result<()> {
    let a: Tree = "[&R]((((1,2),3),4),5);".parse()?;
    println!("a has {} neighbours", rspr_neighbors(&a)?.len());

    // move the leaf under the top's first child next to leaf 5
    let leaf = a
        .leaves()
        .into_iter()
        .find(|&v| a.label(v).is_some_and(|l| l.as_str() == "1"))
        .expect("leaf 1");
    let five = a
        .leaves()
        .into_iter()
        .find(|&v| a.label(v).is_some_and(|l| l.as_str() == "5"))
        .expect("leaf 5");
    let moved = rspr_apply(&a, leaf, five)?;
    println!("after one move: {}", serialize(&moved, None));

    let b: Tree = "[&R]((1,5),((2,4),3));".parse()?;
    let r = spr_distance_maf(&a, &b)?;
    println!(
        "rSPR distance = {} (search agrees: {})",
        r.distance,
        spr_distance_bfs(&a, &b)?
    );
    for (labels, _) in &r.forest.components {
        let names: Vec<&str> = labels.iter().map(|l| l.as_str()).collect();
        println!("  component {names:?}");
    }
    r.forest.verify(&a, &b)?;

    let (ua, ub) = (
        unrooted_view(&a.with_rooted(false)),
        unrooted_view(&b.with_rooted(false)),
    );
    println!(
        "unrooted SPR distance = {}",
        unrooted_spr_distance_bfs(&ua, &ub)?
    );
    Ok(())
}
