//! Parse a multi-tree Newick document, inspect it and write it back.

use treedist::newick::{parse, serialize, serialize_all};
use treedist::tree::validate;

fn main() -> treedist::Result<()> {
    let text = "[&R]((A:0.1,B:0.2):0.05,(C:0.3,D:0.4):0.15);\n((A,C),B,D);\n";
    let doc = parse(text)?;
    for (i, tree) in doc.trees.iter().enumerate() {
        println!(
            "tree {i}: {} leaves, rooted={}, binary={}, weighted={}, problems={:?}",
            tree.leaf_count(),
            tree.is_rooted(),
            tree.is_binary(),
            tree.is_weighted(),
            validate(tree),
        );
        println!("  shortest form: {}", serialize(tree, None));
        println!("  3 decimals:    {}", serialize(tree, Some(3)));
    }
    let again = parse(&serialize_all(&doc.trees, None))?;
    assert_eq!(again.trees.len(), doc.trees.len());
    Ok(())
}
