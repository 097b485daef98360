//! Similarity based on probability: how likely two random points, one on
//! each tree, lie on edges leading to the same set of leaves.

use std::collections::BTreeMap;

use crate::error::{Result, TreeDistError};
use crate::tree::{Bits, Taxa, Tree};

/// Weight above every clade, summed over vertices sharing one clade, and
/// the total edge weight.
fn clade_weights(tree: &Tree, taxa: &Taxa) -> (BTreeMap<Bits, f64>, f64) {
    let leaf = taxa.leaf_map(tree);
    let mut below = vec![Bits::new(); tree.len()];
    let mut weights: BTreeMap<Bits, f64> = BTreeMap::new();
    for v in tree.postorder() {
        let mut bits = taxa.empty_bits();
        if let Some(i) = leaf[v] {
            bits.insert(i);
        }
        for &c in tree.children(v) {
            bits.union_with(&below[c]);
        }
        if tree.parent(v).is_some() {
            *weights.entry(bits.clone()).or_insert(0.0) += tree.length(v).unwrap_or(0.0);
        }
        below[v] = bits;
    }
    (weights, tree.total_length())
}

fn overlap(x: &BTreeMap<Bits, f64>, y: &BTreeMap<Bits, f64>) -> f64 {
    x.iter()
        .filter_map(|(k, wx)| y.get(k).map(|wy| wx * wy))
        .sum()
}

/// `1 - (S(a, b) + S(b, a)) / 2` with `S(x, y) = M_xy / M_xx` and `M_xy`
/// the clade-matched weight product normalized by both total lengths.
///
/// The value is 0 on weight-identical trees and invariant under rescaling
/// either tree. It is not bounded below by 0: when one tree concentrates its
/// weight on a clade the other tree also carries, `S` can exceed 1.
pub fn similarity_probability_distance(a: &Tree, b: &Tree) -> Result<f64> {
    a.require_rooted()?;
    b.require_rooted()?;
    a.require_weighted()?;
    b.require_weighted()?;
    a.check_same_labels(b)?;
    let taxa = Taxa::from_tree(a);
    let (wa, la) = clade_weights(a, &taxa);
    let (wb, lb) = clade_weights(b, &taxa);
    if la <= 0.0 || lb <= 0.0 {
        return Err(TreeDistError::ZeroTotalLength);
    }
    let m_ab = overlap(&wa, &wb) / (la * lb);
    let m_aa = overlap(&wa, &wa) / (la * la);
    let m_bb = overlap(&wb, &wb) / (lb * lb);
    Ok(1.0 - (m_ab / m_aa + m_ab / m_bb) / 2.0)
}
