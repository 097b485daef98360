//! Seeded random binary trees and a few fixed shapes.
//!
//! Random trees grow by sequential leaf insertion: leaf `k` subdivides an
//! edge chosen uniformly among the current ones (for rooted trees the edge
//! above the root counts too). Every binary topology is equally likely:
//! (2n-3)!! rooted, (2n-5)!! unrooted.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, TreeDistError};
use crate::tree::{preorder_layout, Label, Node, NodeId, Tree};

/// Shape and weight settings for [`random_trees`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub leaves: usize,
    pub rooted: bool,
    pub weighted: bool,
}

fn link(nodes: &mut [Node], parent: NodeId, child: NodeId) {
    nodes[child].parent = Some(parent);
    nodes[parent].children.push(child);
}

/// Replaces the edge above `v` (or adds a new root above `v` if it is the
/// top) by a new vertex carrying `v` and a new leaf.
fn insert_above(nodes: &mut Vec<Node>, top: &mut NodeId, v: NodeId, label: Label) -> [NodeId; 2] {
    let u = nodes.len();
    nodes.push(Node::new(None));
    let leaf = nodes.len();
    nodes.push(Node::new(Some(label)));
    match nodes[v].parent {
        Some(p) => {
            let slot = nodes[p]
                .children
                .iter()
                .position(|&c| c == v)
                .expect("child link");
            nodes[p].children[slot] = u;
            nodes[u].parent = Some(p);
        }
        None => *top = u,
    }
    nodes[v].parent = None;
    link(nodes, u, v);
    link(nodes, u, leaf);
    [u, leaf]
}

/// One random binary tree with leaves labeled `"1"..="n"`.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, spec: RandomSpec) -> Result<Tree> {
    let n = spec.leaves;
    if n < 2 {
        return Err(TreeDistError::DomainError(format!(
            "need at least 2 leaves, got {n}"
        )));
    }
    let label = |i: usize| Label::new(i.to_string());
    let mut nodes: Vec<Node> = Vec::with_capacity(2 * n);
    let mut top;
    // vertices whose upper edge may receive the next leaf
    let mut slots: Vec<NodeId>;
    if spec.rooted {
        nodes.push(Node::new(None));
        top = 0;
        for i in 1..=2 {
            nodes.push(Node::new(Some(label(i))));
            link(&mut nodes, 0, i);
        }
        // the top itself stands for the edge above the root
        slots = vec![0, 1, 2];
    } else if n == 2 {
        nodes.push(Node::new(Some(label(1))));
        nodes.push(Node::new(Some(label(2))));
        link(&mut nodes, 0, 1);
        top = 0;
        slots = Vec::new();
    } else {
        nodes.push(Node::new(None));
        top = 0;
        for i in 1..=3 {
            nodes.push(Node::new(Some(label(i))));
            link(&mut nodes, 0, i);
        }
        slots = vec![1, 2, 3];
    }
    let first = if spec.rooted || n == 2 { 3 } else { 4 };
    for k in first..=n {
        let v = slots[rng.gen_range(0..slots.len())];
        let added = insert_above(&mut nodes, &mut top, v, label(k));
        slots.extend(added);
    }
    if spec.weighted {
        for v in 0..nodes.len() {
            if nodes[v].parent.is_some() {
                nodes[v].length = Some(1.0 - rng.gen::<f64>());
            }
        }
    }
    Ok(preorder_layout(&nodes, top, spec.rooted))
}

/// `count` random trees from a ChaCha8 stream seeded with `seed`.
pub fn random_trees(spec: RandomSpec, count: usize, seed: u64) -> Result<Vec<Tree>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_tree(&mut rng, spec)).collect()
}

/// Rooted caterpillar `(((1,2),3),...,n)`.
pub fn caterpillar(n: usize) -> Result<Tree> {
    if n < 2 {
        return Err(TreeDistError::DomainError(format!(
            "need at least 2 leaves, got {n}"
        )));
    }
    let mut nodes = vec![
        Node::new(None),
        Node::new(Some(Label::new("1"))),
        Node::new(Some(Label::new("2"))),
    ];
    link(&mut nodes, 0, 1);
    link(&mut nodes, 0, 2);
    let mut top = 0;
    for k in 3..=n {
        let old = top;
        insert_above(&mut nodes, &mut top, old, Label::new(k.to_string()));
    }
    Ok(Tree::from_parts(nodes, top, true))
}

/// Rooted tree splitting the sorted labels `1..=n` in halves recursively.
pub fn balanced(n: usize) -> Result<Tree> {
    if n < 2 {
        return Err(TreeDistError::DomainError(format!(
            "need at least 2 leaves, got {n}"
        )));
    }
    let mut nodes = vec![Node::new(None)];
    // (vertex, first label, last label)
    let mut stack = vec![(0usize, 1usize, n)];
    while let Some((v, lo, hi)) = stack.pop() {
        let mid = lo + (hi - lo + 1) / 2;
        for (a, b) in [(lo, mid - 1), (mid, hi)] {
            let id = nodes.len();
            if a == b {
                nodes.push(Node::new(Some(Label::new(a.to_string()))));
            } else {
                nodes.push(Node::new(None));
                stack.push((id, a, b));
            }
            link(&mut nodes, v, id);
        }
    }
    Ok(Tree::from_parts(nodes, 0, true))
}
