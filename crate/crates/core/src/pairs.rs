//! All-pairs leaf tables: last common ancestor, edge-count path length and
//! weighted path length. Quadratic in the number of leaves.

use crate::tree::{NodeId, Taxa, Tree};

pub(crate) struct PairTable {
    n: usize,
    /// Leaf vertex of each taxon index.
    pub leaf: Vec<NodeId>,
    /// Edge count from the top to every vertex.
    pub depth: Vec<usize>,
    /// Summed weight from the top to every vertex (missing weights are 0).
    pub wdepth: Vec<f64>,
    lca: Vec<NodeId>,
}

impl PairTable {
    pub fn new(tree: &Tree, taxa: &Taxa) -> Self {
        let n = taxa.len();
        let index = taxa.leaf_map(tree);
        let mut leaf = vec![usize::MAX; n];
        for (v, i) in index.iter().enumerate() {
            if let Some(i) = *i {
                leaf[i] = v;
            }
        }
        let mut depth = vec![0usize; tree.len()];
        let mut wdepth = vec![0.0f64; tree.len()];
        for v in tree.preorder() {
            if let Some(p) = tree.parent(v) {
                depth[v] = depth[p] + 1;
                wdepth[v] = wdepth[p] + tree.length(v).unwrap_or(0.0);
            }
        }
        // every leaf pair first meets at the vertex where their subtrees join
        let mut lca = vec![usize::MAX; n * n];
        let mut below: Vec<Vec<usize>> = vec![Vec::new(); tree.len()];
        for v in tree.postorder() {
            let mut acc: Vec<usize> = index[v].into_iter().collect();
            for &c in tree.children(v) {
                let part = std::mem::take(&mut below[c]);
                for &i in &acc {
                    for &j in &part {
                        lca[i * n + j] = v;
                        lca[j * n + i] = v;
                    }
                }
                acc.extend(part);
            }
            below[v] = acc;
        }
        for i in 0..n {
            lca[i * n + i] = leaf[i];
        }
        PairTable {
            n,
            leaf,
            depth,
            wdepth,
            lca,
        }
    }

    pub fn lca(&self, i: usize, j: usize) -> NodeId {
        self.lca[i * self.n + j]
    }

    /// Number of edges on the path between taxa `i` and `j`.
    pub fn topo(&self, i: usize, j: usize) -> usize {
        self.depth[self.leaf[i]] + self.depth[self.leaf[j]] - 2 * self.depth[self.lca(i, j)]
    }

    /// Summed weight of the path between taxa `i` and `j`.
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.wdepth[self.leaf[i]] + self.wdepth[self.leaf[j]] - 2.0 * self.wdepth[self.lca(i, j)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_table() {
        let t: Tree = "((1:1,2:2):3,3:4);".parse().unwrap();
        let taxa = Taxa::from_tree(&t);
        let p = PairTable::new(&t, &taxa);
        assert_eq!(p.topo(0, 1), 2);
        assert_eq!(p.topo(0, 2), 3);
        assert_eq!(p.dist(0, 1), 3.0);
        assert_eq!(p.dist(1, 2), 9.0);
        assert_eq!(p.lca(0, 2), t.top());
        assert_eq!(p.topo(1, 1), 0);
    }
}
