//! Distances between leaf-labeled phylogenetic trees.

pub mod axioms;
pub mod bench;
pub mod cli;
pub mod compare;
pub mod error;
pub mod generate;
pub mod geodesic;
pub mod metric;
pub mod newick;
mod pairs;
pub mod quartet;
pub mod rf;
pub mod spr;
pub mod tree;

pub use error::{Result, TreeDistError};
pub use tree::{Label, NodeId, Tree, TreeBuilder};
