//! Geodesic distance in the space of weighted trees (BHV space).
//!
//! Internal edges are coordinates. For unrooted trees an edge is keyed by its
//! split, written as the side without the smallest label; for rooted trees it
//! is keyed by the clade below it (a single-child root contributes the full
//! label set). With that normalization two edges are compatible exactly when
//! their keys are nested or disjoint, in both settings.
//!
//! The path is found by support refinement: start from the cone path (one
//! block holding every unique edge of each tree) and split a block pair
//! while a minimum-weight vertex cover of its incompatibility graph weighs
//! less than one.

mod flow;
mod oracle;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Result, TreeDistError};
use crate::tree::{Bits, Cluster, Label, Node, Split, Taxa, Tree};

pub use oracle::{geodesic_oracle, geodesic_oracle_with};

const TOL: f64 = 1e-12;

/// True when the two splits can sit in one tree.
pub fn compatible(s1: &Split, s2: &Split) -> Result<bool> {
    s1.is_compatible(s2)
}

/// Edge weights of one tree: internal edges keyed as described in the module
/// documentation, pendant edges keyed by leaf label.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SplitSet {
    pub entries: BTreeMap<Cluster, f64>,
    pub leaf_weights: BTreeMap<Label, f64>,
}

impl SplitSet {
    /// Edge weights of a weighted tree. Weights along chains of single-child
    /// vertices are added and zero-weight internal edges are dropped.
    pub fn from_tree(tree: &Tree) -> Result<SplitSet> {
        tree.require_weighted()?;
        let taxa = Taxa::from_tree(tree);
        let c = Coords::new(tree, &taxa);
        Ok(SplitSet {
            entries: c
                .internal
                .iter()
                .map(|(b, w)| (cluster(&taxa, b), *w))
                .collect(),
            leaf_weights: taxa.labels().iter().cloned().zip(c.pendant).collect(),
        })
    }

    /// Euclidean norm of the internal edge weights.
    pub fn norm(&self) -> f64 {
        self.entries.values().map(|w| w * w).sum::<f64>().sqrt()
    }

    /// True when every pair of entries is nested or disjoint.
    pub fn is_compatible(&self) -> bool {
        let keys: Vec<&Cluster> = self.entries.keys().collect();
        keys.iter()
            .enumerate()
            .all(|(i, x)| keys[i + 1..].iter().all(|y| clusters_compatible(x, y)))
    }
}

fn clusters_compatible(x: &Cluster, y: &Cluster) -> bool {
    x.0.is_subset(&y.0) || y.0.is_subset(&x.0) || x.0.is_disjoint(&y.0)
}

/// Length of the path through the star tree: `||a|| + ||b||`.
pub fn cone_path_length(a: &SplitSet, b: &SplitSet) -> f64 {
    a.norm() + b.norm()
}

/// Internal edges of two trees sorted into shared and unique ones.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Decomposition {
    /// Edges present in both trees, with the weight in `a` and in `b`.
    pub common: BTreeMap<Cluster, (f64, f64)>,
    pub a_unique: SplitSet,
    pub b_unique: SplitSet,
    /// Pendant weights in `a` and in `b`.
    pub leaf_weights: BTreeMap<Label, (f64, f64)>,
}

/// Splits the internal edges of `a` and `b` into common and unique ones.
pub fn decompose(a: &Tree, b: &Tree) -> Result<Decomposition> {
    let (sa, sb) = (SplitSet::from_tree(a)?, SplitSet::from_tree(b)?);
    a.check_same_labels(b)?;
    if a.is_rooted() != b.is_rooted() {
        return Err(TreeDistError::RootednessMismatch);
    }
    let mut out = Decomposition::default();
    for (k, &wa) in &sa.entries {
        match sb.entries.get(k) {
            Some(&wb) => {
                out.common.insert(k.clone(), (wa, wb));
            }
            None => {
                out.a_unique.entries.insert(k.clone(), wa);
            }
        }
    }
    for (k, &wb) in &sb.entries {
        if !sa.entries.contains_key(k) {
            out.b_unique.entries.insert(k.clone(), wb);
        }
    }
    out.leaf_weights = sa
        .leaf_weights
        .iter()
        .map(|(l, &wa)| (l.clone(), (wa, sb.leaf_weights[l])))
        .collect();
    Ok(out)
}

/// Whether pendant edge differences count toward the length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeodesicOptions {
    pub pendant: bool,
}

impl Default for GeodesicOptions {
    fn default() -> Self {
        GeodesicOptions { pendant: true }
    }
}

/// Ordered block pairs `(A_1, B_1), ..., (A_k, B_k)` of unique edges with
/// their weights.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GeodesicSupport {
    pub a_blocks: Vec<Vec<(Cluster, f64)>>,
    pub b_blocks: Vec<Vec<(Cluster, f64)>>,
}

fn block_norm(block: &[(Cluster, f64)]) -> f64 {
    block.iter().map(|(_, w)| w * w).sum::<f64>().sqrt()
}

impl GeodesicSupport {
    pub fn len(&self) -> usize {
        self.a_blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a_blocks.is_empty()
    }

    /// `||A_i|| / ||B_i||` for every block.
    pub fn ratios(&self) -> Vec<f64> {
        self.a_blocks
            .iter()
            .zip(&self.b_blocks)
            .map(|(a, b)| block_norm(a) / block_norm(b))
            .collect()
    }

    /// For `i > j`, every edge of `A_i` is compatible with every edge of `B_j`.
    pub fn satisfies_p1(&self) -> bool {
        (0..self.len()).all(|i| {
            (0..i).all(|j| {
                self.a_blocks[i].iter().all(|(x, _)| {
                    self.b_blocks[j]
                        .iter()
                        .all(|(y, _)| clusters_compatible(x, y))
                })
            })
        })
    }

    /// Ratios strictly increase (equal neighbours are merged).
    pub fn satisfies_p2(&self) -> bool {
        self.ratios().windows(2).all(|r| r[0] < r[1])
    }
}

/// A geodesic between two trees together with what is needed to walk it.
#[derive(Clone, Debug)]
pub struct GeodesicResult {
    pub length: f64,
    pub support: GeodesicSupport,
    /// Squared length contributed outside the support: common edges, edges
    /// compatible with the whole other tree and (optionally) pendant edges.
    pub common_edge_contribution: f64,
    /// Number of block splits performed.
    pub iterations: usize,
    problem: Problem,
    blocks: Vec<Block>,
}

impl GeodesicResult {
    /// `sqrt(common + ||A||^2 + ||B||^2)`, a lower bound on the length.
    pub fn lower_bound(&self) -> f64 {
        let (na, nb) = self.problem.unique_norms();
        (self.common_edge_contribution + na * na + nb * nb).sqrt()
    }

    /// `sqrt(common + (||A|| + ||B||)^2)`, the cone path length.
    pub fn cone_length(&self) -> f64 {
        let (na, nb) = self.problem.unique_norms();
        (self.common_edge_contribution + (na + nb) * (na + nb)).sqrt()
    }
}

/// Index sets into `Problem::a` and `Problem::b`.
type Block = (Vec<usize>, Vec<usize>);

/// Weighted edges of two trees ready for the path search. Unique edges that
/// are compatible with every edge of the other tree are moved to `shared`
/// with weight 0 on the other side.
#[derive(Clone, Debug)]
struct Problem {
    taxa: Taxa,
    rooted: bool,
    shared: Vec<(Bits, f64, f64)>,
    pendant: Vec<(f64, f64)>,
    a: Vec<(Bits, f64)>,
    b: Vec<(Bits, f64)>,
    /// Incompatible pairs (index into `a`, index into `b`).
    conflicts: Vec<(usize, usize)>,
    include_pendant: bool,
}

/// Internal and pendant weights of one tree over a fixed taxon indexing.
struct Coords {
    internal: Vec<(Bits, f64)>,
    pendant: Vec<f64>,
}

impl Coords {
    fn new(tree: &Tree, taxa: &Taxa) -> Coords {
        let n = taxa.len();
        let leaf = taxa.leaf_map(tree);
        let mut below = vec![Bits::new(); tree.len()];
        let mut acc: HashMap<Bits, f64> = HashMap::new();
        let mut pendant = vec![0.0; n];
        for v in tree.postorder() {
            let mut bits = taxa.empty_bits();
            if let Some(i) = leaf[v] {
                bits.insert(i);
            }
            for &c in tree.children(v) {
                bits.union_with(&below[c]);
            }
            if tree.parent(v).is_some() {
                let w = tree.length(v).unwrap_or(0.0);
                let key = if !tree.is_rooted() && bits.contains(0) {
                    taxa.complement(&bits)
                } else {
                    bits.clone()
                };
                let size = key.count_ones(..);
                if size == 1 {
                    pendant[key.ones().next().expect("one bit")] += w;
                } else if !tree.is_rooted() && size == n - 1 {
                    pendant[0] += w;
                } else if size > 0 {
                    *acc.entry(key).or_insert(0.0) += w;
                }
            }
            below[v] = bits;
        }
        let mut internal: Vec<(Bits, f64)> = acc.into_iter().filter(|&(_, w)| w > 0.0).collect();
        internal.sort_by_cached_key(|(b, _)| b.ones().collect::<Vec<_>>());
        Coords { internal, pendant }
    }
}

fn cluster(taxa: &Taxa, bits: &Bits) -> Cluster {
    Cluster(taxa.bits_to_set(bits))
}

fn bits_compatible(x: &Bits, y: &Bits) -> bool {
    x.is_subset(y) || y.is_subset(x) || x.is_disjoint(y)
}

fn sum_sq(ws: impl Iterator<Item = f64>) -> f64 {
    ws.map(|w| w * w).sum()
}

/// Whether a block with squared norms `prev` must be merged with the next
/// block `cur`: its ratio is not strictly smaller.
fn ratio_not_below(prev: (f64, f64), cur: (f64, f64)) -> bool {
    let lhs = (prev.0 * cur.1).sqrt();
    let rhs = (cur.0 * prev.1).sqrt();
    lhs >= rhs - TOL * rhs.max(1.0)
}

/// Merges neighbouring blocks until the ratios strictly increase and returns
/// `sum (||A_i|| + ||B_i||)^2`. Entries are squared block norms.
fn merged_block_length(squared: &[(f64, f64)]) -> f64 {
    let mut stack: Vec<(f64, f64)> = Vec::with_capacity(squared.len());
    for &cur in squared {
        let mut cur = cur;
        while let Some(&prev) = stack.last() {
            if ratio_not_below(prev, cur) {
                stack.pop();
                cur = (prev.0 + cur.0, prev.1 + cur.1);
            } else {
                break;
            }
        }
        stack.push(cur);
    }
    stack
        .iter()
        .map(|&(a, b)| (a.sqrt() + b.sqrt()).powi(2))
        .sum()
}

impl Problem {
    fn new(a: &Tree, b: &Tree, options: GeodesicOptions) -> Result<Problem> {
        a.require_weighted()?;
        b.require_weighted()?;
        a.check_same_labels(b)?;
        if a.is_rooted() != b.is_rooted() {
            return Err(TreeDistError::RootednessMismatch);
        }
        let taxa = Taxa::from_tree(a);
        let (ca, cb) = (Coords::new(a, &taxa), Coords::new(b, &taxa));
        let in_b: HashMap<&Bits, f64> = cb.internal.iter().map(|(k, w)| (k, *w)).collect();
        let in_a: HashMap<&Bits, f64> = ca.internal.iter().map(|(k, w)| (k, *w)).collect();
        let mut shared = Vec::new();
        let mut ua = Vec::new();
        for (k, wa) in &ca.internal {
            match in_b.get(k) {
                Some(&wb) => shared.push((k.clone(), *wa, wb)),
                None => ua.push((k.clone(), *wa)),
            }
        }
        let ub: Vec<(Bits, f64)> = cb
            .internal
            .iter()
            .filter(|(k, _)| !in_a.contains_key(k))
            .cloned()
            .collect();
        let free_a: Vec<bool> = ua
            .iter()
            .map(|(x, _)| ub.iter().all(|(y, _)| bits_compatible(x, y)))
            .collect();
        let free_b: Vec<bool> = ub
            .iter()
            .map(|(y, _)| ua.iter().all(|(x, _)| bits_compatible(x, y)))
            .collect();
        let mut a_left = Vec::new();
        for ((k, w), free) in ua.into_iter().zip(free_a) {
            if free {
                shared.push((k, w, 0.0));
            } else {
                a_left.push((k, w));
            }
        }
        let mut b_left = Vec::new();
        for ((k, w), free) in ub.into_iter().zip(free_b) {
            if free {
                shared.push((k, 0.0, w));
            } else {
                b_left.push((k, w));
            }
        }
        let mut conflicts = Vec::new();
        for (i, (x, _)) in a_left.iter().enumerate() {
            for (j, (y, _)) in b_left.iter().enumerate() {
                if !bits_compatible(x, y) {
                    conflicts.push((i, j));
                }
            }
        }
        Ok(Problem {
            taxa,
            rooted: a.is_rooted(),
            shared,
            pendant: ca.pendant.into_iter().zip(cb.pendant).collect(),
            a: a_left,
            b: b_left,
            conflicts,
            include_pendant: options.pendant,
        })
    }

    fn outside(&self) -> f64 {
        let shared = sum_sq(self.shared.iter().map(|(_, x, y)| x - y));
        let pendant = if self.include_pendant {
            sum_sq(self.pendant.iter().map(|(x, y)| x - y))
        } else {
            0.0
        };
        shared + pendant
    }

    fn unique_norms(&self) -> (f64, f64) {
        (
            sum_sq(self.a.iter().map(|e| e.1)).sqrt(),
            sum_sq(self.b.iter().map(|e| e.1)).sqrt(),
        )
    }

    fn squared_norms(&self, block: &Block) -> (f64, f64) {
        (
            sum_sq(block.0.iter().map(|&i| self.a[i].1)),
            sum_sq(block.1.iter().map(|&j| self.b[j].1)),
        )
    }

    /// Splits a block pair in two when a cover of its conflicts weighs less
    /// than one under weights `w^2 / ||A_i||^2` and `w^2 / ||B_i||^2`.
    fn refine(&self, block: &Block) -> Option<(Block, Block)> {
        let (sa, sb) = self.squared_norms(block);
        let left: Vec<f64> = block.0.iter().map(|&i| self.a[i].1.powi(2) / sa).collect();
        let right: Vec<f64> = block.1.iter().map(|&j| self.b[j].1.powi(2) / sb).collect();
        let pos_a: HashMap<usize, usize> =
            block.0.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let pos_b: HashMap<usize, usize> =
            block.1.iter().enumerate().map(|(p, &j)| (j, p)).collect();
        let edges: Vec<(usize, usize)> = self
            .conflicts
            .iter()
            .filter_map(|(i, j)| Some((*pos_a.get(i)?, *pos_b.get(j)?)))
            .collect();
        let (weight, in_a, in_b) = flow::min_weight_cover(&left, &right, &edges);
        if weight >= 1.0 - TOL {
            return None;
        }
        let pick = |ids: &[usize], flags: &[bool], want: bool| -> Vec<usize> {
            ids.iter()
                .zip(flags)
                .filter(|(_, &f)| f == want)
                .map(|(&i, _)| i)
                .collect()
        };
        let c1 = pick(&block.0, &in_a, true);
        let c2 = pick(&block.0, &in_a, false);
        let d1 = pick(&block.1, &in_b, false);
        let d2 = pick(&block.1, &in_b, true);
        if [&c1, &c2, &d1, &d2].iter().any(|s| s.is_empty()) {
            return None;
        }
        Some(((c1, d1), (c2, d2)))
    }

    /// Joins neighbouring blocks whose ratios do not strictly increase.
    fn merge_ties(&self, blocks: Vec<Block>) -> Vec<Block> {
        let mut out: Vec<Block> = Vec::with_capacity(blocks.len());
        for mut cur in blocks {
            while let Some(prev) = out.last() {
                if ratio_not_below(self.squared_norms(prev), self.squared_norms(&cur)) {
                    let mut prev = out.pop().expect("non-empty");
                    prev.0.extend(cur.0);
                    prev.1.extend(cur.1);
                    cur = prev;
                } else {
                    break;
                }
            }
            out.push(cur);
        }
        out
    }

    fn support(&self, blocks: &[Block]) -> GeodesicSupport {
        let side = |edges: &[(Bits, f64)], ids: &[usize]| -> Vec<(Cluster, f64)> {
            let mut v: Vec<(Cluster, f64)> = ids
                .iter()
                .map(|&i| (cluster(&self.taxa, &edges[i].0), edges[i].1))
                .collect();
            v.sort_by(|x, y| x.0.cmp(&y.0));
            v
        };
        GeodesicSupport {
            a_blocks: blocks.iter().map(|b| side(&self.a, &b.0)).collect(),
            b_blocks: blocks.iter().map(|b| side(&self.b, &b.1)).collect(),
        }
    }

    /// Tree at position `lambda` of the geodesic through `blocks`.
    fn point(&self, blocks: &[Block], lambda: f64) -> Tree {
        let mut internal: Vec<(Bits, f64)> = Vec::new();
        for (k, wa, wb) in &self.shared {
            internal.push((k.clone(), (1.0 - lambda) * wa + lambda * wb));
        }
        for block in blocks {
            let (sa, sb) = self.squared_norms(block);
            let (na, nb) = (sa.sqrt(), sb.sqrt());
            if lambda * (na + nb) < na {
                let f = 1.0 - lambda * (na + nb) / na;
                internal.extend(
                    block
                        .0
                        .iter()
                        .map(|&i| (self.a[i].0.clone(), f * self.a[i].1)),
                );
            } else {
                let f = (lambda * (na + nb) - na) / nb;
                internal.extend(
                    block
                        .1
                        .iter()
                        .map(|&j| (self.b[j].0.clone(), f * self.b[j].1)),
                );
            }
        }
        internal.retain(|&(_, w)| w > 0.0);
        let pendant: Vec<f64> = self
            .pendant
            .iter()
            .map(|(x, y)| (1.0 - lambda) * x + lambda * y)
            .collect();
        build_tree(&self.taxa, self.rooted, internal, &pendant)
    }
}

/// Tree with the given pairwise compatible internal edges and pendant
/// weights.
fn build_tree(taxa: &Taxa, rooted: bool, mut internal: Vec<(Bits, f64)>, pendant: &[f64]) -> Tree {
    let n = taxa.len();
    let leaf_node = |i: usize| Node::new(Some(taxa.label(i).clone()));
    if !rooted && n <= 2 {
        let mut nodes: Vec<Node> = (0..n).map(leaf_node).collect();
        if n == 2 {
            nodes[1].parent = Some(0);
            nodes[1].length = Some(pendant[1] + pendant[0]);
            nodes[0].children.push(1);
        }
        return Tree::from_parts(nodes, 0, false);
    }
    internal.sort_by_key(|(b, _)| std::cmp::Reverse(b.count_ones(..)));
    let mut nodes = vec![Node::new(None)];
    let mut deepest = vec![0usize; n];
    let link = |nodes: &mut Vec<Node>, parent: usize, mut node: Node, w: f64| {
        let id = nodes.len();
        node.parent = Some(parent);
        node.length = Some(w);
        nodes.push(node);
        nodes[parent].children.push(id);
        id
    };
    for (bits, w) in &internal {
        let first = bits.ones().next().expect("non-empty edge key");
        let id = link(&mut nodes, deepest[first], Node::new(None), *w);
        for i in bits.ones() {
            deepest[i] = id;
        }
    }
    for i in 0..n {
        link(&mut nodes, deepest[i], leaf_node(i), pendant[i]);
    }
    Tree::from_parts(nodes, 0, rooted)
}

/// Geodesic between two weighted trees of the same kind over one label set,
/// counting pendant edges.
pub fn geodesic_distance(a: &Tree, b: &Tree) -> Result<GeodesicResult> {
    geodesic_distance_with(a, b, GeodesicOptions::default())
}

pub fn geodesic_distance_with(
    a: &Tree,
    b: &Tree,
    options: GeodesicOptions,
) -> Result<GeodesicResult> {
    let problem = Problem::new(a, b, options)?;
    let mut blocks: Vec<Block> = Vec::new();
    if !problem.a.is_empty() {
        blocks.push((
            (0..problem.a.len()).collect(),
            (0..problem.b.len()).collect(),
        ));
    }
    let limit = problem.a.len().min(problem.b.len());
    let mut iterations = 0;
    let mut i = 0;
    while i < blocks.len() {
        match problem.refine(&blocks[i]) {
            Some((first, second)) => {
                iterations += 1;
                if iterations > limit {
                    return Err(TreeDistError::NonConvergence(iterations));
                }
                blocks[i] = first;
                blocks.insert(i + 1, second);
            }
            None => i += 1,
        }
    }
    let blocks = problem.merge_ties(blocks);
    let squared: Vec<(f64, f64)> = blocks.iter().map(|b| problem.squared_norms(b)).collect();
    let outside = problem.outside();
    let length = (merged_block_length(&squared) + outside).sqrt();
    Ok(GeodesicResult {
        length,
        support: problem.support(&blocks),
        common_edge_contribution: outside,
        iterations,
        problem,
        blocks,
    })
}

/// Tree at fraction `t` of the arc length from `a` (t = 0) to `b` (t = 1).
pub fn interior_point(result: &GeodesicResult, t: f64) -> Result<Tree> {
    if !(0.0..=1.0).contains(&t) {
        return Err(TreeDistError::DomainError(format!(
            "t = {t} is outside [0, 1]"
        )));
    }
    Ok(result.problem.point(&result.blocks, t))
}

/// Unique-edge keys of each side, for callers that need the sets only.
pub fn unique_edges(result: &GeodesicResult) -> (BTreeSet<Cluster>, BTreeSet<Cluster>) {
    let p = &result.problem;
    (
        p.a.iter().map(|(b, _)| cluster(&p.taxa, b)).collect(),
        p.b.iter().map(|(b, _)| cluster(&p.taxa, b)).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{random_trees, RandomSpec};
    use crate::tree::is_weight_identical_within;

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    fn cl(labels: &[&str]) -> Cluster {
        labels.iter().copied().collect()
    }

    #[test]
    fn compatibility_examples() {
        let s = |x: &str| Split::parse(x).unwrap();
        assert!(compatible(&s("1,2|3,4,5"), &s("1,2|3,4,5")).unwrap());
        assert!(compatible(&s("1,2|3,4,5"), &s("1,2,3|4,5")).unwrap());
        assert!(!compatible(&s("1,2|3,4"), &s("1,3|2,4")).unwrap());
    }

    #[test]
    fn cone_path_examples() {
        let empty = SplitSet::default();
        assert_eq!(cone_path_length(&empty, &empty), 0.0);
        let one = |k: &[&str], w: f64| SplitSet {
            entries: BTreeMap::from([(cl(k), w)]),
            leaf_weights: BTreeMap::new(),
        };
        assert_eq!(
            cone_path_length(&one(&["1", "2"], 1.0), &one(&["1", "3"], 1.0)),
            2.0
        );
        assert_eq!(
            cone_path_length(&one(&["1", "2"], 3.0), &one(&["1", "3"], 4.0)),
            7.0
        );
    }

    #[test]
    fn decompose_examples() {
        let a = t("((1:1,2:1):1,(3:1,4:1):2);");
        let d = decompose(&a, &a).unwrap();
        assert!(d.a_unique.entries.is_empty() && d.b_unique.entries.is_empty());
        assert_eq!(d.common.len(), 2);
        let a = t("((1:1,2:1):1,3:1,(4:1,5:1):1);");
        let b = t("((1:1,2:1):1,4:1,(3:1,5:1):1);");
        let d = decompose(&a, &b).unwrap();
        assert_eq!(
            d.common.keys().collect::<Vec<_>>(),
            vec![&cl(&["3", "4", "5"])]
        );
        assert_eq!(
            d.a_unique.entries.keys().collect::<Vec<_>>(),
            vec![&cl(&["4", "5"])]
        );
        assert_eq!(
            d.b_unique.entries.keys().collect::<Vec<_>>(),
            vec![&cl(&["3", "5"])]
        );
        let a = t("((1:1,2:1):1,(3:1,4:1):1,(5:1,6:1):1);");
        let b = t("((1:1,3:1):1,(2:1,5:1):1,(4:1,6:1):1);");
        assert!(decompose(&a, &b).unwrap().common.is_empty());
    }

    #[test]
    fn identical_trees_are_at_zero() {
        let a = t("((1:1,2:2):0.5,3:1,(4:1,5:3):0.25);");
        let r = geodesic_distance(&a, &a).unwrap();
        assert_eq!(r.length, 0.0);
        assert!(r.support.is_empty());
    }

    #[test]
    fn single_incompatible_pair_is_two() {
        let a = t("(1:1,2:1,(3:1,4:1):1);");
        let b = t("(1:1,3:1,(2:1,4:1):1);");
        let r = geodesic_distance(&a, &b).unwrap();
        assert_eq!(r.length, 2.0);
        assert_eq!(r.support.len(), 1);
    }

    #[test]
    fn two_independent_pairs_give_two_root_two() {
        let a = t("(((1:1,2:1):1,3:1):1,((4:1,5:1):1,6:1):1);");
        let b = t("(((1:1,3:1):1,2:1):1,((4:1,6:1):1,5:1):1);");
        let r = geodesic_distance(&a, &b).unwrap();
        assert!((r.length - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((geodesic_oracle(&a, &b).unwrap() - r.length).abs() < 1e-12);
    }

    #[test]
    fn block_split_beats_cone_path() {
        // 12|345 conflicts with 13|245 only; 45 weighs far more than 34 so
        // the second pair should be traversed separately
        let a = t("((1:1,2:1):1,3:1,(4:1,5:1):3);");
        let b = t("((1:1,3:1):3,2:1,(4:1,5:1):1);");
        let r = geodesic_distance(&a, &b).unwrap();
        assert!(r.length <= r.cone_length() + 1e-12);
        assert!((geodesic_oracle(&a, &b).unwrap() - r.length).abs() < 1e-9);
    }

    #[test]
    fn edges_compatible_with_everything_count_as_shared() {
        // the clade 123 of `a` has no conflict in `b`
        let a = t("(((1:1,2:1):2,3:1):1,4:1);");
        let b = t("[&R]((1:1,2:1):1,3:1,4:1);");
        let r = geodesic_distance(&a, &b).unwrap();
        assert!(r.support.is_empty());
        assert!((r.length - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn pendant_flag() {
        let a = t("((1:1,2:1):1,(3:1,4:5):1);");
        let b = t("((1:1,2:1):1,(3:1,4:1):1);");
        let with = geodesic_distance(&a, &b).unwrap().length;
        let without = geodesic_distance_with(&a, &b, GeodesicOptions { pendant: false })
            .unwrap()
            .length;
        assert_eq!(with, 4.0);
        assert_eq!(without, 0.0);
    }

    #[test]
    fn errors() {
        let a = t("((1,2),3);");
        assert_eq!(
            geodesic_distance(&a, &a).unwrap_err(),
            TreeDistError::UnweightedInput
        );
        let r = t("((1:1,2:1):1,3:1);");
        let u = crate::tree::unrooted_view(&t("((1:1,2:1):1,(3:1,4:1):1);"));
        assert_eq!(
            geodesic_distance(&r, &u).unwrap_err(),
            TreeDistError::LabelSetMismatch
        );
        let u3 = t("(1:1,2:1,3:1);");
        assert_eq!(
            geodesic_distance(&r, &u3).unwrap_err(),
            TreeDistError::RootednessMismatch
        );
    }

    #[test]
    fn endpoints_and_cone_boundary() {
        let a = t("(1:1,2:1,(3:1,4:1):1);");
        let b = t("(1:1,3:1,(2:1,4:2):3);");
        let r = geodesic_distance(&a, &b).unwrap();
        assert!(is_weight_identical_within(&interior_point(&r, 0.0).unwrap(), &a, 1e-12).unwrap());
        assert!(is_weight_identical_within(&interior_point(&r, 1.0).unwrap(), &b, 1e-12).unwrap());
        // one block: the path reaches the star tree when ||a|| = t (||a|| + ||b||)
        let star = interior_point(&r, 1.0 / 4.0).unwrap();
        assert_eq!(star.edge_count(), 4);
        assert!(interior_point(&r, 1.5).is_err());
    }

    #[test]
    fn random_pairs_respect_bounds_and_properties() {
        for (rooted, n) in [(true, 6), (false, 7), (true, 9), (false, 10)] {
            let spec = RandomSpec {
                leaves: n,
                rooted,
                weighted: true,
            };
            let trees = random_trees(spec, 40, n as u64).unwrap();
            for pair in trees.chunks(2) {
                let r = geodesic_distance(&pair[0], &pair[1]).unwrap();
                let back = geodesic_distance(&pair[1], &pair[0]).unwrap();
                assert!(r.lower_bound() <= r.length + 1e-12);
                assert!(r.length <= r.cone_length() + 1e-12);
                assert!((r.length - back.length).abs() < 1e-12);
                assert!(r.support.satisfies_p1() && r.support.satisfies_p2());
                assert!(r.iterations <= n - 2);
                let mid = interior_point(&r, 0.5).unwrap();
                assert!(crate::tree::validate(&mid).is_empty());
                let to_mid = geodesic_distance(&pair[0], &mid).unwrap().length;
                assert!(
                    (to_mid - r.length / 2.0).abs() < 1e-9,
                    "{to_mid} vs {}",
                    r.length / 2.0
                );
            }
        }
    }
}
