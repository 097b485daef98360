//! Maximum agreement subtree: how many leaves must go before two trees agree.

use treedist::compare::{mast_distance, mast_exhaustive};
use treedist::Tree;

fn main() -> treedist::Result<()> {
    let a: Tree = "[&R]((((1,2),3),4),(5,6));".parse()?;
    let b: Tree = "[&R](((1,(2,5)),3),(4,6));".parse()?;
    let m = mast_distance(&a, &b)?;
    let kept: Vec<&str> = m.witness.iter().map(|l| l.as_str()).collect();
    println!("remove {} leaves; agreement on {kept:?}", m.distance);
    assert_eq!(m.distance, mast_exhaustive(&a, &b)?.distance);
    Ok(())
}
