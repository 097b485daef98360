//! Robinson-Foulds distance, strict consensus and Robinson-Foulds length.

use std::collections::{BTreeSet, HashMap, HashSet};

use std::hash::BuildHasher;

use hashbrown::HashTable;
use rustc_hash::FxBuildHasher;

use crate::error::{Result, TreeDistError};
use crate::tree::{
    clusters, edge_split_bits, split_bits, unrooted_view, Bits, Cluster, Node, NodeId, Taxa, Tree,
};

/// Label to leaf number. Each entry is one record in a byte buffer (leaf
/// number, length, label bytes) and the hash slots hold record offsets, so
/// a lookup touches a slot and a single record.
#[derive(Clone, Debug, Default)]
struct LeafNumbers {
    records: Vec<u8>,
    count: u32,
    slots: HashTable<u32>,
}

const HEADER: usize = 8;

impl LeafNumbers {
    fn with_capacity(n: usize) -> Self {
        LeafNumbers {
            records: Vec::with_capacity(16 * n),
            count: 0,
            slots: HashTable::with_capacity(n),
        }
    }

    fn word(records: &[u8], at: usize) -> u32 {
        u32::from_le_bytes(records[at..at + 4].try_into().expect("four bytes"))
    }

    fn record(records: &[u8], offset: u32) -> (u32, &[u8]) {
        let at = offset as usize;
        let len = Self::word(records, at + 4) as usize;
        (
            Self::word(records, at),
            &records[at + HEADER..at + HEADER + len],
        )
    }

    /// Appends `label` as the next leaf number.
    fn push(&mut self, label: &str) {
        let offset = self.records.len() as u32;
        self.records.extend_from_slice(&self.count.to_le_bytes());
        self.records
            .extend_from_slice(&(label.len() as u32).to_le_bytes());
        self.records.extend_from_slice(label.as_bytes());
        self.count += 1;
        let records = &self.records;
        let rehash = |&o: &u32| FxBuildHasher.hash_one(Self::record(records, o).1);
        self.slots
            .insert_unique(FxBuildHasher.hash_one(label.as_bytes()), offset, rehash);
    }

    fn get(&self, label: &str) -> Option<u32> {
        let hash = FxBuildHasher.hash_one(label.as_bytes());
        let offset = self.slots.find(hash, |&o| {
            Self::record(&self.records, o).1 == label.as_bytes()
        })?;
        Some(Self::record(&self.records, *offset).0)
    }
}

/// Day's table: leaves of the reference tree numbered in depth-first order,
/// so that every cluster of that tree is an interval of leaf numbers. An
/// interval is kept in the row of its right end when its vertex is a first
/// child and in the row of its left end otherwise; neither row can then
/// hold two clusters.
#[derive(Clone, Debug)]
pub struct ClusterTable {
    order: LeafNumbers,
    /// `by_hi[r]`: left end of the stored interval ending at `r`.
    by_hi: Vec<u32>,
    /// `by_lo[l]`: right end of the stored interval starting at `l`.
    by_lo: Vec<u32>,
    len: usize,
    n: usize,
}

/// Per-vertex comparison of a tree against a [`ClusterTable`].
struct Comparison {
    /// `COUNTED` when the vertex's cluster is a distinct non-full cluster of
    /// the tree, plus `SHARED` when the table holds it too.
    state: Vec<u8>,
    counted: usize,
    shared: usize,
    /// Labeled leaves seen.
    leaves: usize,
}

const COUNTED: u8 = 1;
const SHARED: u8 = 2;

const EMPTY: u32 = u32::MAX;

impl ClusterTable {
    pub fn new(reference: &Tree) -> Result<Self> {
        reference.require_rooted()?;
        // rows are sized by vertex count, an upper bound on the leaf count
        let mut table = ClusterTable {
            order: LeafNumbers::with_capacity(reference.len()),
            by_hi: vec![EMPTY; reference.len()],
            by_lo: vec![EMPTY; reference.len()],
            len: 0,
            n: 0,
        };
        depth_first(reference, |v, first, span: &mut (u32, u32)| {
            if reference.is_leaf(v) {
                if let Some(l) = reference.label(v) {
                    *span = (table.order.count, table.order.count);
                    table.order.push(l.as_str());
                    if v != reference.top() {
                        table.insert(span.0, span.1, first);
                    }
                }
            } else if span.0 != u32::MAX && v != reference.top() && reference.children(v).len() > 1
            {
                table.insert(span.0, span.1, first);
            }
            Ok(())
        })?;
        let n = table.order.count as usize;
        table.n = n;
        // below a unary top the full label set can still turn up
        if n > 0 && table.has(0, n as u32 - 1) {
            let last = n - 1;
            if table.by_hi[last] == 0 {
                table.by_hi[last] = EMPTY;
            } else {
                table.by_lo[0] = EMPTY;
            }
            table.len -= 1;
        }
        Ok(table)
    }

    fn insert(&mut self, lo: u32, hi: u32, first: bool) {
        if self.has(lo, hi) {
            return;
        }
        if first {
            self.by_hi[hi as usize] = lo;
        } else {
            self.by_lo[lo as usize] = hi;
        }
        self.len += 1;
    }

    fn has(&self, lo: u32, hi: u32) -> bool {
        self.by_hi[hi as usize] == lo || self.by_lo[lo as usize] == hi
    }

    /// Number of distinct clusters of the reference tree (singletons
    /// included, the full label set excluded).
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, cluster: &Cluster) -> bool {
        let mut lo = u32::MAX;
        let mut hi = 0;
        for l in cluster.labels() {
            let Some(i) = self.order.get(l.as_str()) else {
                return false;
            };
            lo = lo.min(i);
            hi = hi.max(i);
        }
        !cluster.is_empty() && (hi - lo + 1) as usize == cluster.len() && self.has(lo, hi)
    }

    fn compare(&self, tree: &Tree) -> Result<Comparison> {
        let mut cmp = Comparison {
            state: vec![0; tree.len()],
            counted: 0,
            shared: 0,
            leaves: 0,
        };
        let mut sizes: Vec<u32> = Vec::with_capacity(64);
        depth_first(tree, |v, _, span: &mut (u32, u32)| {
            // sizes mirrors the DFS stack; children already folded theirs in
            let size = if tree.is_leaf(v) {
                match tree.label(v) {
                    Some(l) => {
                        let i = self
                            .order
                            .get(l.as_str())
                            .ok_or(TreeDistError::LabelSetMismatch)?;
                        *span = (i, i);
                        cmp.leaves += 1;
                        1
                    }
                    None => 0,
                }
            } else {
                let kids = tree.children(v).len();
                let total = sizes[sizes.len() - kids..].iter().sum();
                sizes.truncate(sizes.len() - kids);
                total
            };
            sizes.push(size);
            let size = size as usize;
            if v != tree.top() && tree.children(v).len() != 1 && size < self.n && size > 0 {
                cmp.counted += 1;
                cmp.state[v] = COUNTED;
                if (span.1 - span.0 + 1) as usize == size && self.has(span.0, span.1) {
                    cmp.shared += 1;
                    cmp.state[v] |= SHARED;
                }
            }
            Ok(())
        })?;
        Ok(cmp)
    }
}

/// One depth-first pass. `visit(v, first, span)` runs for leaves on the
/// way down (`span` starts empty and may be set) and for inner vertices on
/// the way up (`span` already covers the children). `first` tells whether
/// `v` is the first child of its parent.
fn depth_first<F>(tree: &Tree, mut visit: F) -> Result<()>
where
    F: FnMut(NodeId, bool, &mut (u32, u32)) -> Result<()>,
{
    const NONE: (u32, u32) = (u32::MAX, 0);
    // (vertex, next child, span so far, first child)
    let mut stack: Vec<(NodeId, usize, (u32, u32), bool)> = Vec::with_capacity(64);
    stack.push((tree.top(), 0, NONE, false));
    while let Some(top) = stack.last_mut() {
        let (v, next) = (top.0, top.1);
        let kids = tree.children(v);
        if next < kids.len() {
            top.1 += 1;
            stack.push((kids[next], 0, NONE, next == 0));
            continue;
        }
        let (_, _, mut span, first) = stack.pop().expect("non-empty stack");
        visit(v, first, &mut span)?;
        if let Some(parent) = stack.last_mut() {
            parent.2 = (parent.2 .0.min(span.0), parent.2 .1.max(span.1));
        }
    }
    Ok(())
}

fn check_pair(a: &Tree, b: &Tree) -> Result<()> {
    a.require_rooted()?;
    b.require_rooted()?;
    a.check_same_labels(b)
}

/// Number of clusters in exactly one of the two rooted trees, in time
/// linear in the number of vertices.
pub fn rf_distance(a: &Tree, b: &Tree) -> Result<usize> {
    b.require_rooted()?;
    let table = ClusterTable::new(a)?;
    let cmp = table.compare(b)?;
    // labels are unique per tree, so equal counts and no unknown label
    // mean equal label sets
    if cmp.leaves != table.n {
        return Err(TreeDistError::LabelSetMismatch);
    }
    Ok(table.len() + cmp.counted - 2 * cmp.shared)
}

/// Reference implementation: symmetric difference of explicit cluster sets.
pub fn rf_distance_oracle(a: &Tree, b: &Tree) -> Result<usize> {
    check_pair(a, b)?;
    let ca = clusters(a)?;
    let cb = clusters(b)?;
    Ok(ca.symmetric_difference(&cb).count())
}

/// Robinson-Foulds distance over non-trivial splits, for unrooted trees.
pub fn rf_distance_unrooted(a: &Tree, b: &Tree) -> Result<usize> {
    a.check_same_labels(b)?;
    let taxa = Taxa::from_tree(a);
    let n = taxa.len();
    let nontrivial = |t: &Tree| -> HashSet<Bits> {
        split_bits(t, &taxa)
            .into_iter()
            .map(|(_, s)| s)
            .filter(|s| {
                let c = s.count_ones(..);
                c >= 2 && c + 2 <= n
            })
            .collect()
    };
    let sa = nontrivial(a);
    let sb = nontrivial(b);
    Ok(sa.symmetric_difference(&sb).count())
}

/// Rooted distance for two rooted trees, split distance for two unrooted
/// ones.
pub fn rf(a: &Tree, b: &Tree) -> Result<usize> {
    match (a.is_rooted(), b.is_rooted()) {
        (true, true) => rf_distance(a, b),
        (false, false) => rf_distance_unrooted(a, b),
        _ => Err(TreeDistError::RootednessMismatch),
    }
}

/// The smallest rooted tree whose clusters are exactly those shared by all
/// inputs. Edge weights are dropped.
pub fn strict_consensus(trees: &[Tree]) -> Result<Tree> {
    let first = trees.first().ok_or(TreeDistError::EmptyInput)?;
    first.require_rooted()?;
    for t in &trees[1..] {
        check_pair(first, t)?;
    }
    let mut keep: Vec<bool> = (0..first.len())
        .map(|v| v == first.top() || first.is_leaf(v) || first.children(v).len() >= 2)
        .collect();
    for t in &trees[1..] {
        let cmp = ClusterTable::new(t)?.compare(first)?;
        for v in 0..first.len() {
            if v != first.top() && !first.is_leaf(v) {
                keep[v] &= cmp.state[v] & SHARED != 0;
            }
        }
    }
    // re-attach every kept vertex to its nearest kept ancestor
    let mut nearest = vec![usize::MAX; first.len()];
    let mut nodes: Vec<Node> = Vec::new();
    for v in first.preorder() {
        let above = first.parent(v).map(|p| nearest[p]);
        if !keep[v] {
            nearest[v] = above.expect("the top is always kept");
            continue;
        }
        let id = nodes.len();
        nearest[v] = id;
        let label = if first.is_leaf(v) {
            first.label(v).cloned()
        } else {
            None
        };
        nodes.push(Node::new(label));
        if let Some(p) = above {
            nodes[id].parent = Some(p);
            nodes[p].children.push(id);
        }
    }
    Ok(Tree::from_parts(nodes, 0, true))
}

/// Pairs of edges (lower endpoints) with equal splits.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EdgeMatching {
    pub pairs: Vec<(NodeId, NodeId)>,
}

/// Robinson-Foulds length with its parts. Edge ids refer to `a` and `b`,
/// the trees the value was computed on (normalized copies unless raw).
#[derive(Clone, Debug)]
pub struct RflReport {
    pub value: f64,
    pub matching: EdgeMatching,
    /// Summed weight of edges of `a` without a partner in `b`.
    pub unmatched_a: f64,
    pub unmatched_b: f64,
    /// Summed weight differences across matched pairs.
    pub matched: f64,
    pub a: Tree,
    pub b: Tree,
}

const MAX_CANDIDATES: usize = 10_000;

fn rfl_core(a: Tree, b: Tree, raw: bool) -> Result<RflReport> {
    a.check_same_labels(&b)?;
    a.require_weighted()?;
    b.require_weighted()?;
    let taxa = Taxa::from_tree(&a);
    let sa = edge_split_bits(&a, &taxa, raw);
    let sb = edge_split_bits(&b, &taxa, raw);
    let w = |t: &Tree, v: NodeId| t.length(v).unwrap_or(0.0);

    let mut by_split: HashMap<&Bits, Vec<NodeId>> = HashMap::new();
    for (v, s) in &sb {
        by_split.entry(s).or_default().push(*v);
    }
    let in_a: HashSet<&Bits> = sa.iter().map(|(_, s)| s).collect();
    if !raw {
        // after normalization no split repeats within a tree
        let distinct_b = by_split.values().all(|e| e.len() == 1);
        if in_a.len() != sa.len() || !distinct_b {
            return Err(TreeDistError::DomainError(
                "normalized tree has two edges with the same split".into(),
            ));
        }
    }

    let mut unmatched_a = 0.0;
    let mut matched = 0.0;
    let mut pairs = Vec::new();
    let mut functions: u128 = 1;
    // distinct values of the matched-edge term over all matching functions
    let mut sums: Vec<f64> = vec![0.0];
    for (e, s) in &sa {
        match by_split.get(s) {
            None => unmatched_a += w(&a, *e),
            Some(cands) => {
                let values: Vec<f64> = cands
                    .iter()
                    .map(|&f| (w(&a, *e) - w(&b, f)).abs())
                    .collect();
                pairs.push((*e, cands[0]));
                matched += values[0];
                functions = functions.saturating_mul(cands.len() as u128);
                let mut next: Vec<f64> = sums
                    .iter()
                    .flat_map(|s| values.iter().map(move |v| s + v))
                    .collect();
                next.sort_by(f64::total_cmp);
                next.dedup_by(|x, y| (*x - *y).abs() <= 1e-12);
                next.truncate(MAX_CANDIDATES);
                sums = next;
            }
        }
    }
    let unmatched_b: f64 = sb
        .iter()
        .filter(|(_, s)| !in_a.contains(s))
        .map(|(f, _)| w(&b, *f))
        .sum();
    if functions > 1 {
        return Err(TreeDistError::AmbiguousMatching {
            functions,
            candidates: sums.iter().map(|s| s + unmatched_a + unmatched_b).collect(),
        });
    }
    Ok(RflReport {
        value: unmatched_a + unmatched_b + matched,
        matching: EdgeMatching { pairs },
        unmatched_a,
        unmatched_b,
        matched,
        a,
        b,
    })
}

/// Robinson-Foulds length on normalized trees: both trees are read unrooted
/// with degree-2 vertices suppressed, which makes the edge matching unique.
pub fn rfl_distance(a: &Tree, b: &Tree) -> Result<RflReport> {
    rfl_core(unrooted_view(a), unrooted_view(b), false)
}

/// Robinson-Foulds length on the trees as given. When several edges share a
/// split the matching is not unique; the error then lists every value the
/// distance can take.
pub fn rfl_distance_raw(a: &Tree, b: &Tree) -> Result<RflReport> {
    rfl_core(a.clone(), b.clone(), true)
}

/// Clusters present in every tree.
pub fn shared_clusters(trees: &[Tree]) -> Result<BTreeSet<Cluster>> {
    let first = trees.first().ok_or(TreeDistError::EmptyInput)?;
    let mut acc = clusters(first)?;
    for t in &trees[1..] {
        first.check_same_labels(t)?;
        let c = clusters(t)?;
        acc.retain(|x| c.contains(x));
    }
    Ok(acc)
}
