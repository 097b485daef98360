//! Node distance (k = 1) and path difference (k = 2).

use crate::error::{Result, TreeDistError};
use crate::pairs::PairTable;
use crate::tree::{Taxa, Tree};

/// Mean over unordered leaf pairs of `|p_a - p_b|^k`, where `p` counts the
/// edges on the path between the two leaves.
pub fn node_distance(a: &Tree, b: &Tree, k: u32) -> Result<f64> {
    if k != 1 && k != 2 {
        return Err(TreeDistError::DomainError(format!(
            "k must be 1 or 2, got {k}"
        )));
    }
    a.check_same_labels(b)?;
    let taxa = Taxa::from_tree(a);
    let n = taxa.len();
    if n < 2 {
        return Err(TreeDistError::DomainError(format!(
            "need at least 2 leaves, got {n}"
        )));
    }
    let (pa, pb) = (PairTable::new(a, &taxa), PairTable::new(b, &taxa));
    let mut sum = 0u64;
    for i in 0..n {
        for j in 0..i {
            let d = pa.topo(i, j).abs_diff(pb.topo(i, j)) as u64;
            sum += d.pow(k);
        }
    }
    Ok(2.0 * sum as f64 / (n * (n - 1)) as f64)
}
