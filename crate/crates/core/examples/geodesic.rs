//! Geodesic distance in tree space, the path's interior and its bounds.

use treedist::geodesic::{
    geodesic_distance, geodesic_distance_with, geodesic_oracle, interior_point, unique_edges,
    GeodesicOptions,
};
use treedist::newick::serialize;
use treedist::Tree;

fn main() -> treedist::Result<()> {
    let a: Tree = "((1:1,2:1):1,(3:1,4:1):1,5:1);".parse()?;
    let b: Tree = "((1:1,3:1):1,(2:1,4:1):1,5:1);".parse()?;
    let g = geodesic_distance(&a, &b)?;
    println!(
        "geodesic = {:.6} after {} iterations",
        g.length, g.iterations
    );
    println!("oracle   = {:.6}", geodesic_oracle(&a, &b)?);

    println!(
        "bounds: {:.6} <= d <= {:.6}",
        g.lower_bound(),
        g.cone_length()
    );
    println!(
        "support pairs: {}, ratios {:?}",
        g.support.len(),
        g.support.ratios()
    );

    let (only_a, only_b) = unique_edges(&g);
    println!(
        "edges only in a: {}, only in b: {}",
        only_a.len(),
        only_b.len()
    );
    for t in [0.25, 0.5, 0.75] {
        println!("  t={t}: {}", serialize(&interior_point(&g, t)?, Some(3)));
    }

    let internal = geodesic_distance_with(&a, &b, GeodesicOptions { pendant: false })?;
    println!("without pendant edges = {:.6}", internal.length);
    Ok(())
}
