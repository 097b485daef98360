//! Cophenetic correlation between two trees, and between a tree and data.

use treedist::compare::{ccc, ccc_data, ccc_with, cophenetic_matrix, DistanceMatrix};
use treedist::{Label, Tree};

fn main() -> treedist::Result<()> {
    let a: Tree = "[&R]((((A,B),C),D),E);".parse()?;
    let b: Tree = "[&R](((A,B),(C,D)),E);".parse()?;
    println!("ccc (depth classes) = {:.4}", ccc(&a, &b)?);
    println!(
        "ccc (squared depth) = {:.4}",
        ccc_with(&a, &b, |d| (d * d) as f64)?
    );

    let m = cophenetic_matrix(&a, |d| d as f64, "depth")?;
    println!("class of (A, C) in a: {}", m.get(0, 2));

    // a distance table in the leaf order A..E; deeper common ancestors mean
    // closer leaves, so agreement shows up as a negative correlation
    let labels: Vec<Label> = ["A", "B", "C", "D", "E"]
        .into_iter()
        .map(Label::from)
        .collect();
    #[rustfmt::skip]
    let values = vec![
        0.0, 1.0, 2.0, 3.0, 4.0,
        1.0, 0.0, 2.0, 3.0, 4.0,
        2.0, 2.0, 0.0, 3.0, 4.0,
        3.0, 3.0, 3.0, 0.0, 4.0,
        4.0, 4.0, 4.0, 4.0, 0.0,
    ];
    let data = DistanceMatrix::new(labels, values)?;
    println!("ccc against data = {:.4}", ccc_data(&a, &data)?);
    Ok(())
}
