//! Align score: the best one-to-one matching of edges by split overlap.

use crate::error::Result;
use crate::tree::{edge_split_bits, Bits, NodeId, Taxa, Tree};

/// Pairwise edge scores. Rows follow `a_edges`, columns `b_edges`; edges are
/// named by their lower endpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct AlignScoreMatrix {
    pub a_edges: Vec<NodeId>,
    pub b_edges: Vec<NodeId>,
    pub scores: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlignResult {
    pub total: f64,
    /// Matched edge pairs `(edge of a, edge of b)`. Edges matched to padding
    /// are left out.
    pub matching: Vec<(NodeId, NodeId)>,
    pub scores: AlignScoreMatrix,
}

/// `max(min(a00, a11), min(a01, a10))` with `a_rs` the Jaccard index of side
/// `r` of one split and side `s` of the other.
fn score(n: usize, x: &Bits, y: &Bits) -> f64 {
    let (cx, cy) = (x.count_ones(..), y.count_ones(..));
    let both = x.intersection_count(y);
    let jaccard = |inter: usize, size_p: usize, size_q: usize| {
        inter as f64 / (size_p + size_q - inter) as f64
    };
    let a00 = jaccard(both, cx, cy);
    let a01 = jaccard(cx - both, cx, n - cy);
    let a10 = jaccard(cy - both, n - cx, cy);
    let a11 = jaccard(n + both - cx - cy, n - cx, n - cy);
    a00.min(a11).max(a01.min(a10))
}

/// Maximum total score over bijections between the edges of `a` and `b`.
/// When the edge counts differ the smaller side is padded with edges that
/// score zero against everything.
pub fn align_score(a: &Tree, b: &Tree) -> Result<AlignResult> {
    a.check_same_labels(b)?;
    let taxa = Taxa::from_tree(a);
    let n = taxa.len();
    let (ea, eb) = (
        edge_split_bits(a, &taxa, false),
        edge_split_bits(b, &taxa, false),
    );
    let scores: Vec<Vec<f64>> = ea
        .iter()
        .map(|(_, x)| eb.iter().map(|(_, y)| score(n, x, y)).collect())
        .collect();
    let m = ea.len().max(eb.len());
    let mut cost = vec![vec![1.0; m]; m];
    for (i, row) in scores.iter().enumerate() {
        for (j, &s) in row.iter().enumerate() {
            cost[i][j] = 1.0 - s;
        }
    }
    let assignment = hungarian(&cost);
    let mut total = 0.0;
    let mut matching = Vec::new();
    for (i, &j) in assignment.iter().enumerate() {
        if i < ea.len() && j < eb.len() {
            total += scores[i][j];
            matching.push((ea[i].0, eb[j].0));
        }
    }
    Ok(AlignResult {
        total,
        matching,
        scores: AlignScoreMatrix {
            a_edges: ea.iter().map(|e| e.0).collect(),
            b_edges: eb.iter().map(|e| e.0).collect(),
            scores,
        },
    })
}

/// Minimum-cost perfect assignment on a square matrix (Kuhn-Munkres with
/// potentials, O(m^3)). Returns the column of every row.
pub(crate) fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let m = cost.len();
    // 1-based arrays; column 0 is a virtual start
    let mut u = vec![0.0; m + 1];
    let mut v = vec![0.0; m + 1];
    let mut row_of = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=m {
        row_of[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut col_of = vec![0; m];
    for j in 1..=m {
        if row_of[j] > 0 {
            col_of[row_of[j] - 1] = j - 1;
        }
    }
    col_of
}
