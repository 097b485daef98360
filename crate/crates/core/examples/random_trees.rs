//! Seeded random trees and the fixed shapes.

use treedist::generate::{balanced, caterpillar, random_trees, RandomSpec};
use treedist::newick::serialize;

fn main() -> treedist::Result<()> {
    let spec = RandomSpec {
        leaves: 6,
        rooted: true,
        weighted: true,
    };
    for t in random_trees(spec, 3, 42)? {
        println!("{}", serialize(&t, Some(3)));
    }
    // same seed, same trees
    assert_eq!(
        serialize(&random_trees(spec, 1, 42)?[0], None),
        serialize(&random_trees(spec, 1, 42)?[0], None)
    );
    println!("caterpillar: {}", serialize(&caterpillar(5)?, None));
    println!("balanced:    {}", serialize(&balanced(8)?, None));
    Ok(())
}
