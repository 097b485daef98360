//! Leaf-labeled trees, rooted or unrooted, with optional edge weights.
//!
//! A [`Tree`] is stored as an arena of [`Node`]s oriented away from a
//! distinguished `top` vertex. For rooted trees `top` is the root. For
//! unrooted trees it is an arbitrary internal anchor used only for traversal;
//! every algorithm that cares about unrooted structure treats the parent/child
//! links as undirected edges. An edge is identified by its lower endpoint, so
//! `length(v)` is the weight of the edge between `v` and its parent.

mod canonical;
mod ops;
mod splits;
mod validate;

use std::borrow::Borrow;
use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use compact_str::CompactString;
use smallvec::SmallVec;

pub use canonical::{
    canonical_newick, is_identical, is_weight_identical, is_weight_identical_within,
};
pub(crate) use canonical::{canonical_orientation, render, tokens, WeightStyle};
pub(crate) use ops::forget_root;
pub use ops::{contract, count_binary_topologies, restrict, suppress_unary, unrooted_view};
pub use splits::{clusters, splits, Cluster, Split, Taxa};
pub(crate) use splits::{edge_split_bits, split_bits, Bits};
pub use validate::{validate, Violation};

use crate::error::{Result, TreeDistError};

/// Reserved label of the root vertex; never a leaf label.
pub const ROOT_LABEL: &str = "root";

/// Index of a vertex inside its tree.
pub type NodeId = usize;

/// Child list, inline up to two children.
pub(crate) type Children = SmallVec<[NodeId; 2]>;

/// A leaf label. Compared bytewise.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Label(CompactString);

impl Label {
    pub fn new(text: impl Into<String>) -> Self {
        Label(CompactString::from(text.into()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Deref for Label {
    type Target = str;
    fn deref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for Label {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label(CompactString::from(s))
    }
}

impl From<String> for Label {
    fn from(s: String) -> Self {
        Label(CompactString::from(s))
    }
}

impl From<&String> for Label {
    fn from(s: &String) -> Self {
        Label(CompactString::from(s.as_str()))
    }
}

impl PartialEq<str> for Label {
    fn eq(&self, other: &str) -> bool {
        self.0 == other
    }
}

impl PartialEq<&str> for Label {
    fn eq(&self, other: &&str) -> bool {
        self.0 == *other
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub(crate) parent: Option<NodeId>,
    pub(crate) children: Children,
    pub(crate) label: Option<Label>,
    /// Weight of the edge to the parent.
    pub(crate) length: Option<f64>,
}

impl Node {
    pub(crate) fn new(label: Option<Label>) -> Self {
        Node {
            parent: None,
            children: Children::new(),
            label,
            length: None,
        }
    }
}

/// An immutable leaf-labeled tree.
#[derive(Clone, Debug)]
pub struct Tree {
    nodes: Vec<Node>,
    top: NodeId,
    rooted: bool,
}

impl Tree {
    pub(crate) fn from_parts(nodes: Vec<Node>, top: NodeId, rooted: bool) -> Self {
        Tree { nodes, top, rooted }
    }

    pub(crate) fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_rooted(&self) -> bool {
        self.rooted
    }

    /// The root for rooted trees.
    pub fn root(&self) -> Option<NodeId> {
        self.rooted.then_some(self.top)
    }

    /// Traversal anchor: the root of a rooted tree, an internal vertex otherwise.
    pub fn top(&self) -> NodeId {
        self.top
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id].parent
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id].children
    }

    pub fn label(&self, id: NodeId) -> Option<&Label> {
        self.nodes[id].label.as_ref()
    }

    /// Weight of the edge between `id` and its parent.
    pub fn length(&self, id: NodeId) -> Option<f64> {
        self.nodes[id].length
    }

    pub fn degree(&self, id: NodeId) -> usize {
        self.nodes[id].children.len() + usize::from(self.nodes[id].parent.is_some())
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        let d = self.degree(id);
        d == 0 || (d == 1 && !(self.rooted && id == self.top))
    }

    /// Neighbors of a vertex, ignoring orientation.
    pub fn neighbors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes[id]
            .parent
            .into_iter()
            .chain(self.nodes[id].children.iter().copied())
    }

    /// Lower endpoints of every edge.
    pub fn edges(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).filter(move |&v| self.nodes[v].parent.is_some())
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn leaves(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).filter(move |&v| self.is_leaf(v))
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves().count()
    }

    /// Labels of all leaves, sorted.
    pub fn leaf_labels(&self) -> Vec<&Label> {
        let mut labels: Vec<&Label> = self.leaves().filter_map(|v| self.label(v)).collect();
        labels.sort();
        labels
    }

    /// Leaf vertex carrying `label`.
    pub fn find_leaf(&self, label: &str) -> Option<NodeId> {
        self.leaves()
            .find(|&v| self.label(v).is_some_and(|l| l.as_str() == label))
    }

    /// Map from leaf label to leaf vertex.
    pub fn leaf_index(&self) -> HashMap<&str, NodeId> {
        self.leaves()
            .filter_map(|v| self.label(v).map(|l| (l.as_str(), v)))
            .collect()
    }

    /// True when every edge carries a weight.
    pub fn is_weighted(&self) -> bool {
        self.edges().all(|v| self.nodes[v].length.is_some())
    }

    /// True when every internal vertex below the root has exactly two children
    /// and the root has two children (rooted), or every internal vertex has
    /// degree three (unrooted).
    pub fn is_binary(&self) -> bool {
        (0..self.nodes.len()).all(|v| {
            if self.is_leaf(v) {
                true
            } else if self.rooted {
                self.nodes[v].children.len() == 2
            } else {
                self.degree(v) == 3
            }
        })
    }

    /// Sum of all edge weights (missing weights count as zero).
    pub fn total_length(&self) -> f64 {
        self.edges()
            .map(|v| self.nodes[v].length.unwrap_or(0.0))
            .sum()
    }

    /// Post-order over the vertices reachable from `top`, without recursion.
    pub fn postorder(&self) -> Vec<NodeId> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.top];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(self.nodes[v].children.iter().copied());
        }
        order.reverse();
        order
    }

    /// Pre-order over the vertices reachable from `top`.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.top];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(self.nodes[v].children.iter().rev().copied());
        }
        order
    }

    /// Depth (edge count from `top`) of every vertex.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0; self.nodes.len()];
        for v in self.preorder() {
            if let Some(p) = self.nodes[v].parent {
                depth[v] = depth[p] + 1;
            }
        }
        depth
    }

    /// Returns the same tree with rootedness flag changed. Turning an unrooted
    /// tree rooted makes the current anchor the root.
    pub fn with_rooted(&self, rooted: bool) -> Tree {
        let mut t = self.clone();
        t.rooted = rooted;
        if !rooted && t.is_leaf(t.top) && t.nodes.len() > 2 {
            return t.reanchored(t.nodes[t.top].children[0]);
        }
        t
    }

    /// Removes all edge weights.
    pub fn without_weights(&self) -> Tree {
        let mut t = self.clone();
        for n in &mut t.nodes {
            n.length = None;
        }
        t
    }

    /// Multiplies every edge weight by `factor`.
    pub fn scaled(&self, factor: f64) -> Tree {
        let mut t = self.clone();
        for n in &mut t.nodes {
            if let Some(w) = n.length.as_mut() {
                *w *= factor;
            }
        }
        t
    }

    /// Re-orients the tree away from `new_top`, keeping edge weights attached
    /// to the same undirected edges. Rootedness is preserved as a flag only.
    pub fn reanchored(&self, new_top: NodeId) -> Tree {
        let n = self.nodes.len();
        let mut map = vec![usize::MAX; n];
        let mut nodes: Vec<Node> = Vec::with_capacity(n);
        map[new_top] = 0;
        nodes.push(Node::new(self.nodes[new_top].label.clone()));
        let mut stack = vec![new_top];
        while let Some(v) = stack.pop() {
            let nv = map[v];
            let nbrs: Vec<NodeId> = self.neighbors(v).collect();
            for u in nbrs {
                if map[u] != usize::MAX {
                    continue;
                }
                // weight of undirected edge {u, v}
                let w = if self.nodes[u].parent == Some(v) {
                    self.nodes[u].length
                } else {
                    self.nodes[v].length
                };
                let nu = nodes.len();
                map[u] = nu;
                let mut node = Node::new(self.nodes[u].label.clone());
                node.parent = Some(nv);
                node.length = w;
                nodes.push(node);
                nodes[nv].children.push(nu);
                stack.push(u);
            }
        }
        // keep child order stable relative to the original numbering
        for i in 0..nodes.len() {
            let mut kids = std::mem::take(&mut nodes[i].children);
            kids.sort_unstable();
            nodes[i].children = kids;
        }
        Tree {
            nodes,
            top: 0,
            rooted: self.rooted,
        }
    }

    /// Parse the first tree of a Newick string with default options.
    pub fn from_newick(text: &str) -> Result<Tree> {
        let doc = crate::newick::parse(text)?;
        doc.trees
            .into_iter()
            .next()
            .ok_or(TreeDistError::EmptyInput)
    }

    /// Canonical Newick serialization with full weight precision.
    pub fn to_newick(&self) -> String {
        crate::newick::serialize(self, None)
    }

    /// Error unless both trees carry exactly the same leaf labels.
    pub(crate) fn check_same_labels(&self, other: &Tree) -> Result<()> {
        if self.leaf_labels() == other.leaf_labels() {
            Ok(())
        } else {
            Err(TreeDistError::LabelSetMismatch)
        }
    }

    pub(crate) fn require_rooted(&self) -> Result<()> {
        if self.rooted {
            Ok(())
        } else {
            Err(TreeDistError::UnrootedInput)
        }
    }

    pub(crate) fn require_weighted(&self) -> Result<()> {
        if self.is_weighted() {
            Ok(())
        } else {
            Err(TreeDistError::UnweightedInput)
        }
    }
}

/// Copy of the vertices reachable from `top`, renumbered in preorder so
/// traversals walk memory front to back. The top loses its edge weight.
pub(crate) fn preorder_layout(nodes: &[Node], top: NodeId, rooted: bool) -> Tree {
    let mut out: Vec<Node> = Vec::with_capacity(nodes.len());
    let mut stack = vec![(top, None::<NodeId>)];
    while let Some((v, parent)) = stack.pop() {
        let id = out.len();
        let mut node = Node::new(nodes[v].label.clone());
        node.length = if parent.is_some() {
            nodes[v].length
        } else {
            None
        };
        node.parent = parent;
        out.push(node);
        if let Some(p) = parent {
            out[p].children.push(id);
        }
        for &c in nodes[v].children.iter().rev() {
            stack.push((c, Some(id)));
        }
    }
    Tree::from_parts(out, 0, rooted)
}

impl FromStr for Tree {
    type Err = TreeDistError;
    fn from_str(s: &str) -> Result<Tree> {
        Tree::from_newick(s)
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_newick())
    }
}

/// Incremental construction of a [`Tree`].
#[derive(Default, Debug, Clone)]
pub struct TreeBuilder {
    nodes: Vec<Node>,
}

impl TreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, label: Option<Label>) -> NodeId {
        self.nodes.push(Node::new(label));
        self.nodes.len() - 1
    }

    pub fn add_leaf(&mut self, label: impl Into<Label>) -> NodeId {
        self.add_node(Some(label.into()))
    }

    pub fn add_internal(&mut self) -> NodeId {
        self.add_node(None)
    }

    /// Adds the edge `parent -> child` with an optional weight.
    pub fn connect(&mut self, parent: NodeId, child: NodeId, length: Option<f64>) -> &mut Self {
        self.nodes[child].parent = Some(parent);
        self.nodes[child].length = length;
        self.nodes[parent].children.push(child);
        self
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Builds without checking any invariant; use [`validate`] afterwards.
    pub fn build_unchecked(self, top: NodeId, rooted: bool) -> Tree {
        Tree {
            nodes: self.nodes,
            top,
            rooted,
        }
    }

    pub fn build_rooted(self, root: NodeId) -> Result<Tree> {
        checked(self.build_unchecked(root, true))
    }

    /// Builds an unrooted tree. A leaf anchor is moved to its neighbor.
    pub fn build_unrooted(self, anchor: NodeId) -> Result<Tree> {
        let t = checked(self.build_unchecked(anchor, false))?;
        if t.is_leaf(t.top) && t.nodes.len() > 2 {
            Ok(t.reanchored(t.nodes[t.top].children[0]))
        } else {
            Ok(t)
        }
    }
}

fn checked(t: Tree) -> Result<Tree> {
    let violations = validate(&t);
    if violations.is_empty() {
        Ok(t)
    } else {
        Err(TreeDistError::InvalidTree(violations))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leaf_detection_and_traversal() {
        let t: Tree = "((1,2),3);".parse().unwrap();
        assert!(t.is_rooted());
        assert_eq!(t.leaf_count(), 3);
        assert_eq!(t.edge_count(), t.len() - 1);
        let post = t.postorder();
        assert_eq!(*post.last().unwrap(), t.top());
        assert_eq!(t.preorder()[0], t.top());
        assert!(t.is_binary());
    }

    #[test]
    fn reanchor_keeps_weights() {
        let t: Tree = "(1:1,2:2,(3:3,4:4):5);".parse().unwrap();
        let leaf3 = t.find_leaf("3").unwrap();
        let inner = t.parent(leaf3).unwrap();
        let r = t.reanchored(inner);
        assert!(is_weight_identical(&t, &r).unwrap());
        assert_eq!(r.children(r.top()).len(), 3);
    }

    #[test]
    fn single_leaf_with_root() {
        let mut b = TreeBuilder::new();
        let r = b.add_internal();
        let l = b.add_leaf("1");
        b.connect(r, l, None);
        let t = b.build_rooted(r).unwrap();
        assert!(t.is_leaf(l));
        assert!(!t.is_leaf(r));
    }
}
