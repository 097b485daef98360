use std::collections::HashMap;
use std::fmt;

use super::{NodeId, Tree, ROOT_LABEL};

/// A broken tree invariant, naming the offending vertex or edge.
///
/// Edges are named by their lower endpoint.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    Empty,
    TopOutOfRange(NodeId),
    TopHasParent(NodeId),
    /// A vertex was reached twice from the top (a cycle or a second parent).
    Cycle(NodeId),
    Disconnected(NodeId),
    /// A child list and a parent pointer disagree.
    InconsistentParent(NodeId),
    /// |E| != |V| - 1.
    EdgeCount {
        vertices: usize,
        edges: usize,
    },
    UnlabeledLeaf(NodeId),
    LabeledInternal(NodeId),
    EmptyLabel(NodeId),
    ReservedLabel(NodeId),
    DuplicateLabel(String),
    NegativeWeight(NodeId),
    NonFiniteWeight(NodeId),
    /// The top vertex carries a weight although it has no edge above it.
    DanglingWeight(NodeId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            Empty => write!(f, "tree has no vertices"),
            TopOutOfRange(v) => write!(f, "top vertex {v} does not exist"),
            TopHasParent(v) => write!(f, "top vertex {v} has a parent"),
            Cycle(v) => write!(f, "vertex {v} reached twice (cycle)"),
            Disconnected(v) => write!(f, "vertex {v} is not connected to the top"),
            InconsistentParent(v) => write!(f, "vertex {v} has an inconsistent parent link"),
            EdgeCount { vertices, edges } => {
                write!(f, "{edges} edges for {vertices} vertices (expected |V|-1)")
            }
            UnlabeledLeaf(v) => write!(f, "leaf {v} has no label"),
            LabeledInternal(v) => write!(f, "internal vertex {v} carries a label"),
            EmptyLabel(v) => write!(f, "vertex {v} has an empty label"),
            ReservedLabel(v) => write!(f, "vertex {v} uses the reserved label '{ROOT_LABEL}'"),
            DuplicateLabel(l) => write!(f, "label '{l}' appears on more than one leaf"),
            NegativeWeight(v) => write!(f, "edge above {v} has a negative weight"),
            NonFiniteWeight(v) => write!(f, "edge above {v} has a non-finite weight"),
            DanglingWeight(v) => write!(f, "top vertex {v} carries a weight but has no edge"),
        }
    }
}

/// Lists every broken invariant of `tree`; empty when the tree is valid.
pub fn validate(tree: &Tree) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = tree.nodes.len();
    if n == 0 {
        out.push(Violation::Empty);
        return out;
    }
    if tree.top >= n {
        out.push(Violation::TopOutOfRange(tree.top));
        return out;
    }
    if tree.nodes[tree.top].parent.is_some() {
        out.push(Violation::TopHasParent(tree.top));
    }

    let mut seen = vec![false; n];
    let mut stack = vec![tree.top];
    let mut structural = false;
    while let Some(v) = stack.pop() {
        if seen[v] {
            out.push(Violation::Cycle(v));
            structural = true;
            continue;
        }
        seen[v] = true;
        for &c in &tree.nodes[v].children {
            if c >= n {
                out.push(Violation::Disconnected(c));
                structural = true;
                continue;
            }
            if tree.nodes[c].parent != Some(v) {
                out.push(Violation::InconsistentParent(c));
                structural = true;
            }
            stack.push(c);
        }
    }
    for (v, &s) in seen.iter().enumerate() {
        if !s {
            out.push(Violation::Disconnected(v));
            structural = true;
        }
    }
    let edges: usize = tree.nodes.iter().map(|nd| nd.children.len()).sum();
    if edges + 1 != n {
        out.push(Violation::EdgeCount { vertices: n, edges });
    }
    if structural {
        return out;
    }

    let mut by_label: HashMap<&str, usize> = HashMap::new();
    for v in 0..n {
        let node = &tree.nodes[v];
        let leaf = tree.is_leaf(v);
        match &node.label {
            None if leaf => out.push(Violation::UnlabeledLeaf(v)),
            Some(_) if !leaf => out.push(Violation::LabeledInternal(v)),
            Some(l) => {
                if l.is_empty() {
                    out.push(Violation::EmptyLabel(v));
                } else if l.as_str() == ROOT_LABEL {
                    out.push(Violation::ReservedLabel(v));
                }
                *by_label.entry(l.as_str()).or_default() += 1;
            }
            None => {}
        }
        if let Some(w) = node.length {
            if v == tree.top {
                out.push(Violation::DanglingWeight(v));
            } else if !w.is_finite() {
                out.push(Violation::NonFiniteWeight(v));
            } else if w < 0.0 {
                out.push(Violation::NegativeWeight(v));
            }
        }
    }
    let mut dups: Vec<&str> = by_label
        .into_iter()
        .filter(|&(_, c)| c > 1)
        .map(|(l, _)| l)
        .collect();
    dups.sort_unstable();
    out.extend(
        dups.into_iter()
            .map(|l| Violation::DuplicateLabel(l.to_owned())),
    );
    out
}
