//! Further tree comparisons: maximum agreement subtree, Align, cophenetic
//! correlation, node (path difference) distance and similarity based on
//! probability.

mod align;
mod cophenetic;
mod mast;
mod node;
mod sim;

pub use align::{align_score, AlignResult, AlignScoreMatrix};
pub use cophenetic::{
    ccc, ccc_data, ccc_data_with, ccc_with, cophenetic_matrix, CopheneticMatrix, DistanceMatrix,
};
pub use mast::{mast_distance, mast_exhaustive, MastResult};
pub use node::node_distance;
pub use sim::similarity_probability_distance;
