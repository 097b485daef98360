//! Clusters (rooted clades) and splits (edge bipartitions).

use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;

use super::{Label, NodeId, Tree};
use crate::error::{Result, TreeDistError};

/// Bit set over taxon indices of a [`Taxa`].
pub(crate) type Bits = FixedBitSet;

/// Sorted leaf label set of a tree, used to index bit sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Taxa {
    labels: Vec<Label>,
}

impl Taxa {
    pub fn from_tree(tree: &Tree) -> Self {
        Taxa {
            labels: tree.leaf_labels().into_iter().cloned().collect(),
        }
    }

    pub fn from_labels<I, L>(labels: I) -> Self
    where
        I: IntoIterator<Item = L>,
        L: Into<Label>,
    {
        let mut labels: Vec<Label> = labels.into_iter().map(Into::into).collect();
        labels.sort();
        labels.dedup();
        Taxa { labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.labels.binary_search_by(|l| l.as_str().cmp(label)).ok()
    }

    pub fn label(&self, index: usize) -> &Label {
        &self.labels[index]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// Taxon index of every leaf vertex of `tree` (None for internal vertices).
    pub(crate) fn leaf_map(&self, tree: &Tree) -> Vec<Option<usize>> {
        (0..tree.len())
            .map(|v| {
                if tree.is_leaf(v) {
                    tree.label(v).and_then(|l| self.index(l))
                } else {
                    None
                }
            })
            .collect()
    }

    pub(crate) fn empty_bits(&self) -> Bits {
        FixedBitSet::with_capacity(self.labels.len())
    }

    pub(crate) fn bits_to_set(&self, bits: &Bits) -> BTreeSet<Label> {
        bits.ones().map(|i| self.labels[i].clone()).collect()
    }

    pub(crate) fn complement(&self, bits: &Bits) -> Bits {
        let mut c = bits.clone();
        c.toggle_range(..);
        c
    }
}

/// Leaf labels of a clade.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cluster(pub BTreeSet<Label>);

impl Cluster {
    pub fn labels(&self) -> &BTreeSet<Label> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.0.contains(label)
    }
}

impl<L: Into<Label>> FromIterator<L> for Cluster {
    fn from_iter<I: IntoIterator<Item = L>>(iter: I) -> Self {
        Cluster(iter.into_iter().map(Into::into).collect())
    }
}

impl fmt::Display for Cluster {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", join(&self.0))
    }
}

/// An unordered bipartition of a label set. `side_a` always holds the
/// smallest label, so derived equality is equality of bipartitions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Split {
    side_a: BTreeSet<Label>,
    side_b: BTreeSet<Label>,
}

impl Split {
    /// Builds a split from two disjoint non-empty sides in either order.
    pub fn new(x: BTreeSet<Label>, y: BTreeSet<Label>) -> Result<Self> {
        if x.is_empty() || y.is_empty() {
            return Err(TreeDistError::DomainError("split side is empty".into()));
        }
        if !x.is_disjoint(&y) {
            return Err(TreeDistError::DomainError("split sides overlap".into()));
        }
        Ok(if x.first() < y.first() {
            Split {
                side_a: x,
                side_b: y,
            }
        } else {
            Split {
                side_a: y,
                side_b: x,
            }
        })
    }

    /// Parses `"1,2|3,4,5"`.
    pub fn parse(text: &str) -> Result<Self> {
        let (x, y) = text
            .split_once('|')
            .ok_or_else(|| TreeDistError::DomainError(format!("'{text}' is not a split")))?;
        let side = |s: &str| -> BTreeSet<Label> {
            s.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(Label::from)
                .collect()
        };
        Split::new(side(x), side(y))
    }

    pub fn side_a(&self) -> &BTreeSet<Label> {
        &self.side_a
    }

    pub fn side_b(&self) -> &BTreeSet<Label> {
        &self.side_b
    }

    /// All labels on both sides.
    pub fn labels(&self) -> BTreeSet<Label> {
        self.side_a.union(&self.side_b).cloned().collect()
    }

    /// A pendant split separates a single label.
    pub fn is_trivial(&self) -> bool {
        self.side_a.len() == 1 || self.side_b.len() == 1
    }

    /// True when one of the four side intersections is empty.
    pub fn is_compatible(&self, other: &Split) -> Result<bool> {
        if self.labels() != other.labels() {
            return Err(TreeDistError::LabelSetMismatch);
        }
        let empty = |x: &BTreeSet<Label>, y: &BTreeSet<Label>| x.is_disjoint(y);
        Ok(empty(&self.side_a, &other.side_a)
            || empty(&self.side_a, &other.side_b)
            || empty(&self.side_b, &other.side_a)
            || empty(&self.side_b, &other.side_b))
    }

    pub(crate) fn from_bits(taxa: &Taxa, bits: &Bits) -> Split {
        let x = taxa.bits_to_set(bits);
        let y = taxa.bits_to_set(&taxa.complement(bits));
        Split::new(x, y).expect("bits describe a proper non-empty subset")
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", join(&self.side_a), join(&self.side_b))
    }
}

fn join(set: &BTreeSet<Label>) -> String {
    set.iter().map(Label::as_str).collect::<Vec<_>>().join(",")
}

/// Leaf set below every vertex as bits over `taxa`.
pub(crate) fn cluster_bits(tree: &Tree, taxa: &Taxa) -> Vec<Bits> {
    let leaf = taxa.leaf_map(tree);
    let mut bits = vec![Bits::new(); tree.len()];
    for v in tree.postorder() {
        let mut b = taxa.empty_bits();
        if let Some(i) = leaf[v] {
            b.insert(i);
        }
        for &c in tree.children(v) {
            b.union_with(&bits[c]);
        }
        bits[v] = b;
    }
    bits
}

/// Split bits of every edge, normalized to the side that does not contain
/// taxon 0. A rooted tree is read unrooted: of the two edges at a degree-2
/// root only the first is reported, and edges with an empty side are skipped.
pub(crate) fn split_bits(tree: &Tree, taxa: &Taxa) -> Vec<(NodeId, Bits)> {
    edge_split_bits(tree, taxa, false)
}

/// Like [`split_bits`]; with `every_edge` both edges at a degree-2 root are
/// reported.
pub(crate) fn edge_split_bits(tree: &Tree, taxa: &Taxa, every_edge: bool) -> Vec<(NodeId, Bits)> {
    let below = cluster_bits(tree, taxa);
    let n = taxa.len();
    let mut out = Vec::new();
    let top = tree.top();
    let skip_second_root_edge =
        !every_edge && tree.children(top).len() == 2 && tree.degree(top) == 2;
    for v in tree.preorder() {
        if tree.parent(v).is_none() {
            continue;
        }
        if skip_second_root_edge && tree.parent(v) == Some(top) && tree.children(top)[1] == v {
            continue;
        }
        let b = &below[v];
        let count = b.count_ones(..);
        if count == 0 || count == n {
            continue;
        }
        let norm = if b.contains(0) {
            taxa.complement(b)
        } else {
            b.clone()
        };
        out.push((v, norm));
    }
    out
}

/// Clade of every non-root vertex, including singletons and excluding the
/// full label set.
pub fn clusters(tree: &Tree) -> Result<BTreeSet<Cluster>> {
    tree.require_rooted()?;
    let taxa = Taxa::from_tree(tree);
    let bits = cluster_bits(tree, &taxa);
    let n = taxa.len();
    Ok(tree
        .edges()
        .map(|v| &bits[v])
        .filter(|b| {
            let c = b.count_ones(..);
            c > 0 && c < n
        })
        .map(|b| Cluster(taxa.bits_to_set(b)))
        .collect())
}

/// Split of every edge, keyed by the edge's lower endpoint.
pub fn splits(tree: &Tree) -> Vec<(NodeId, Split)> {
    let taxa = Taxa::from_tree(tree);
    split_bits(tree, &taxa)
        .into_iter()
        .map(|(v, b)| (v, Split::from_bits(&taxa, &b)))
        .collect()
}
