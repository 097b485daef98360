//! Rooted subtree prune and regraft (rSPR): the move itself, breadth-first
//! move counting, and exact distances through maximum agreement forests.
//!
//! Forest search works on trees augmented with a marker leaf `ρ` hanging
//! from a new root, so the root component is counted like any other.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Result, TreeDistError};
use crate::tree::{
    canonical_newick, is_identical, preorder_layout, restrict, Label, Node, NodeId, Tree,
    TreeBuilder,
};

const BFS_LIMIT: usize = 7;
const UNROOTED_BFS_LIMIT: usize = 6;
const MAF_LIMIT: usize = 10;

fn require_rooted_binary(tree: &Tree) -> Result<()> {
    tree.require_rooted()?;
    if tree.is_binary() {
        Ok(())
    } else {
        Err(TreeDistError::NotBinary)
    }
}

fn add(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x + y),
        (x, y) => x.or(y),
    }
}

fn is_ancestor(tree: &Tree, ancestor: NodeId, mut v: NodeId) -> bool {
    loop {
        if v == ancestor {
            return true;
        }
        match tree.parent(v) {
            Some(p) => v = p,
            None => return false,
        }
    }
}

/// Prunes the clade below `pruned` and regrafts it onto the edge above
/// `target` (the root itself names a new edge above the root). The vacated
/// parent is suppressed. Regrafting onto an edge at the old parent gives the
/// input tree back.
pub fn rspr_apply(tree: &Tree, pruned: NodeId, target: NodeId) -> Result<Tree> {
    require_rooted_binary(tree)?;
    if pruned >= tree.len() {
        return Err(TreeDistError::EdgeNotFound(pruned));
    }
    if target >= tree.len() {
        return Err(TreeDistError::EdgeNotFound(target));
    }
    let p = tree.parent(pruned).ok_or(TreeDistError::RootPrune)?;
    if is_ancestor(tree, pruned, target) {
        return Err(TreeDistError::InvalidTarget(format!(
            "edge above {target} lies inside the pruned subtree"
        )));
    }
    let sibling = tree
        .children(p)
        .iter()
        .copied()
        .find(|&c| c != pruned)
        .expect("binary parent");
    if target == sibling || target == p {
        return Ok(tree.clone());
    }
    let mut nodes = tree.nodes().to_vec();
    let mut top = tree.top();
    // detach and suppress the old parent
    nodes[p].children.clear();
    match nodes[p].parent.take() {
        Some(g) => {
            let slot = nodes[g]
                .children
                .iter()
                .position(|&c| c == p)
                .expect("child link");
            nodes[g].children[slot] = sibling;
            nodes[sibling].parent = Some(g);
            nodes[sibling].length = add(nodes[p].length, nodes[sibling].length);
        }
        None => {
            nodes[sibling].parent = None;
            nodes[sibling].length = None;
            top = sibling;
        }
    }
    // subdivide the target edge; the new vertex reuses the old parent's slot
    let x = p;
    nodes[x].length = None;
    match nodes[target].parent {
        Some(tp) => {
            let slot = nodes[tp]
                .children
                .iter()
                .position(|&c| c == target)
                .expect("child link");
            nodes[tp].children[slot] = x;
            nodes[x].parent = Some(tp);
            let half = nodes[target].length.map(|w| w / 2.0);
            nodes[x].length = half;
            nodes[target].length = half;
        }
        None => top = x,
    }
    nodes[target].parent = Some(x);
    nodes[pruned].parent = Some(x);
    nodes[x].children = smallvec::smallvec![target, pruned];
    Ok(preorder_layout(&nodes, top, true))
}

/// Every tree one rSPR move away (duplicates removed, input excluded), keyed
/// by topology.
pub fn rspr_neighbors(tree: &Tree) -> Result<Vec<Tree>> {
    require_rooted_binary(tree)?;
    let own = canonical_newick(tree, false);
    let mut seen: HashMap<String, Tree> = HashMap::new();
    for pruned in tree.edges() {
        for target in 0..tree.len() {
            if is_ancestor(tree, pruned, target) {
                continue;
            }
            let t = rspr_apply(tree, pruned, target)?;
            let key = canonical_newick(&t, false);
            if key != own {
                seen.entry(key).or_insert(t);
            }
        }
    }
    let mut out: Vec<(String, Tree)> = seen.into_iter().collect();
    out.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(out.into_iter().map(|e| e.1).collect())
}

fn check_bfs_size(tree: &Tree, limit: usize) -> Result<()> {
    let n = tree.leaf_count();
    if n > limit {
        return Err(TreeDistError::TooLarge {
            what: "leaf count for breadth-first SPR search",
            size: n,
            limit,
        });
    }
    Ok(())
}

/// Move counts from `a` to every rooted binary tree on its labels, keyed by
/// canonical Newick without weights.
pub fn spr_distances_from(a: &Tree) -> Result<HashMap<String, usize>> {
    require_rooted_binary(a)?;
    check_bfs_size(a, BFS_LIMIT)?;
    let start = a.without_weights();
    let mut dist = HashMap::from([(canonical_newick(&start, false), 0usize)]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((t, d)) = queue.pop_front() {
        for next in rspr_neighbors(&t)? {
            let key = canonical_newick(&next, false);
            if !dist.contains_key(&key) {
                dist.insert(key, d + 1);
                queue.push_back((next, d + 1));
            }
        }
    }
    Ok(dist)
}

/// Fewest rSPR moves turning `a` into `b`, by breadth-first search.
pub fn spr_distance_bfs(a: &Tree, b: &Tree) -> Result<usize> {
    require_rooted_binary(a)?;
    require_rooted_binary(b)?;
    a.check_same_labels(b)?;
    check_bfs_size(a, BFS_LIMIT)?;
    let goal = canonical_newick(b, false);
    let start = a.without_weights();
    let first = canonical_newick(&start, false);
    if first == goal {
        return Ok(0);
    }
    let mut seen = BTreeSet::from([first]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((t, d)) = queue.pop_front() {
        for next in rspr_neighbors(&t)? {
            let key = canonical_newick(&next, false);
            if key == goal {
                return Ok(d + 1);
            }
            if seen.insert(key) {
                queue.push_back((next, d + 1));
            }
        }
    }
    unreachable!("rSPR moves connect all rooted binary trees on one label set")
}

/// Undirected adjacency of an unrooted tree.
struct Graph {
    adj: Vec<Vec<usize>>,
    labels: Vec<Option<Label>>,
}

impl Graph {
    fn from_tree(t: &Tree) -> Graph {
        Graph {
            adj: (0..t.len()).map(|v| t.neighbors(v).collect()).collect(),
            labels: (0..t.len()).map(|v| t.label(v).cloned()).collect(),
        }
    }

    fn to_tree(&self) -> Tree {
        let anchor = (0..self.adj.len())
            .find(|&v| self.adj[v].len() > 1)
            .unwrap_or(0);
        let mut b = TreeBuilder::new();
        let ids: Vec<NodeId> = self.labels.iter().map(|l| b.add_node(l.clone())).collect();
        let mut stack = vec![(anchor, usize::MAX)];
        while let Some((v, from)) = stack.pop() {
            for &w in &self.adj[v] {
                if w != from {
                    b.connect(ids[v], ids[w], None);
                    stack.push((w, v));
                }
            }
        }
        b.build_unrooted(ids[anchor])
            .expect("moves keep the tree valid")
    }

    fn replace(&mut self, v: usize, old: usize, new: usize) {
        let slot = self.adj[v]
            .iter()
            .position(|&x| x == old)
            .expect("adjacent");
        self.adj[v][slot] = new;
    }

    /// Vertices reachable from `start` without crossing `blocked`.
    fn side(&self, start: usize, blocked: usize) -> Vec<usize> {
        let mut out = vec![start];
        let mut stack = vec![(start, blocked)];
        while let Some((v, from)) = stack.pop() {
            for &w in &self.adj[v] {
                if w != from {
                    out.push(w);
                    stack.push((w, v));
                }
            }
        }
        out
    }
}

fn unrooted_neighbors(t: &Tree) -> Vec<Tree> {
    let g = Graph::from_tree(t);
    let mut out = Vec::new();
    for u in 0..g.adj.len() {
        if g.adj[u].len() != 3 {
            continue;
        }
        for &v in &g.adj[u] {
            let others: Vec<usize> = g.adj[u].iter().copied().filter(|&x| x != v).collect();
            let (a, b) = (others[0], others[1]);
            let mut h = Graph {
                adj: g.adj.clone(),
                labels: g.labels.clone(),
            };
            h.replace(a, u, b);
            h.replace(b, u, a);
            h.adj[u].clear();
            let rest = h.side(a, usize::MAX);
            for &x in &rest {
                for &y in &h.adj[x].clone() {
                    if x < y {
                        // u becomes the vertex subdividing x-y
                        let mut k = Graph {
                            adj: h.adj.clone(),
                            labels: h.labels.clone(),
                        };
                        k.replace(x, y, u);
                        k.replace(y, x, u);
                        k.replace(v, u, u);
                        k.adj[u] = vec![x, y, v];
                        out.push(k.to_tree());
                    }
                }
            }
        }
    }
    out
}

/// Fewest unrooted SPR moves turning `a` into `b`, by breadth-first search
/// over binary unrooted trees with at most six leaves.
pub fn unrooted_spr_distance_bfs(a: &Tree, b: &Tree) -> Result<usize> {
    for t in [a, b] {
        if t.is_rooted() {
            return Err(TreeDistError::RootednessMismatch);
        }
        if !t.is_binary() {
            return Err(TreeDistError::NotBinary);
        }
    }
    a.check_same_labels(b)?;
    check_bfs_size(a, UNROOTED_BFS_LIMIT)?;
    let goal = canonical_newick(b, false);
    let start = a.without_weights();
    let mut seen = BTreeSet::from([canonical_newick(&start, false)]);
    if seen.contains(&goal) {
        return Ok(0);
    }
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((t, d)) = queue.pop_front() {
        for next in unrooted_neighbors(&t) {
            let key = canonical_newick(&next, false);
            if key == goal {
                return Ok(d + 1);
            }
            if seen.insert(key) {
                queue.push_back((next, d + 1));
            }
        }
    }
    unreachable!("SPR moves connect all unrooted binary trees on one label set")
}

/// Components of an agreement forest of two rooted trees augmented with the
/// marker leaf `rho`. Each component lists its labels and the tree both
/// augmented trees induce on them.
#[derive(Clone, Debug)]
pub struct AgreementForest {
    pub rho: Label,
    pub components: Vec<(BTreeSet<Label>, Tree)>,
}

#[derive(Clone, Debug)]
pub struct SprResult {
    pub distance: usize,
    pub forest: AgreementForest,
}

fn marker_for(tree: &Tree) -> Label {
    let mut name = String::from("ρ");
    while tree.find_leaf(&name).is_some() {
        name.push('\'');
    }
    Label::new(name)
}

/// `tree` below a new root whose other child is the leaf `rho`.
fn augment(tree: &Tree, rho: &Label) -> Tree {
    let mut nodes = tree.nodes().to_vec();
    let (root, marker) = (nodes.len(), nodes.len() + 1);
    nodes.push(Node::new(None));
    nodes.push(Node::new(Some(rho.clone())));
    nodes[tree.top()].parent = Some(root);
    nodes[marker].parent = Some(root);
    nodes[root].children = smallvec::smallvec![tree.top(), marker];
    preorder_layout(&nodes, root, true)
}

/// True when the subtrees of `tree` spanning each label set share no vertex.
fn disjoint_spans(tree: &Tree, parts: &[BTreeSet<Label>]) -> bool {
    let index = tree.leaf_index();
    let post = tree.postorder();
    let mut owner = vec![usize::MAX; tree.len()];
    let mut count = vec![0usize; tree.len()];
    for (k, part) in parts.iter().enumerate() {
        count.iter_mut().for_each(|c| *c = 0);
        for l in part {
            count[index[l.as_str()]] = 1;
        }
        let mut lca_found = false;
        for &v in &post {
            if !tree.is_leaf(v) {
                count[v] = tree.children(v).iter().map(|&c| count[c]).sum();
            }
            if lca_found || count[v] == 0 {
                continue;
            }
            if count[v] == part.len() {
                lca_found = true;
            }
            if owner[v] != usize::MAX {
                return false;
            }
            owner[v] = k;
        }
    }
    true
}

impl AgreementForest {
    /// Re-checks the forest from scratch: the components partition the
    /// labels plus `rho`, each component tree equals what both augmented
    /// trees induce on its labels, and the induced subtrees are vertex
    /// disjoint in both trees.
    pub fn verify(&self, a: &Tree, b: &Tree) -> Result<()> {
        let fail = |m: &str| Err(TreeDistError::DomainError(format!("agreement forest: {m}")));
        let (xa, xb) = (augment(a, &self.rho), augment(b, &self.rho));
        let mut all: BTreeSet<Label> = BTreeSet::new();
        let mut total = 0;
        for (labels, _) in &self.components {
            total += labels.len();
            all.extend(labels.iter().cloned());
        }
        let expected: BTreeSet<Label> = xa.leaf_labels().into_iter().cloned().collect();
        if total != all.len() || all != expected {
            return fail("components do not partition the labels");
        }
        for (labels, t) in &self.components {
            let names: Vec<&str> = labels.iter().map(Label::as_str).collect();
            if !is_identical(&restrict(&xa, &names)?, t)?
                || !is_identical(&restrict(&xb, &names)?, t)?
            {
                return fail("a component disagrees with an input tree");
            }
        }
        let parts: Vec<BTreeSet<Label>> = self.components.iter().map(|c| c.0.clone()).collect();
        if !disjoint_spans(&xa, &parts) || !disjoint_spans(&xb, &parts) {
            return fail("components overlap");
        }
        Ok(())
    }
}

/// Next `k`-subset of `0..m` in lexicographic order.
fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 && idx[i - 1] == m - k + i - 1 {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    idx[i - 1] += 1;
    for j in i..k {
        idx[j] = idx[j - 1] + 1;
    }
    true
}

/// Leaf sets of the pieces left after cutting `cuts` (edges named by lower
/// endpoint), or `None` when some piece has no leaf.
fn pieces(tree: &Tree, order: &[NodeId], cut: &[bool]) -> Option<Vec<BTreeSet<Label>>> {
    let mut piece = vec![usize::MAX; tree.len()];
    let mut sets: Vec<BTreeSet<Label>> = Vec::new();
    for &v in order {
        piece[v] = match tree.parent(v) {
            Some(p) if !cut[v] => piece[p],
            _ => {
                sets.push(BTreeSet::new());
                sets.len() - 1
            }
        };
        if tree.is_leaf(v) {
            sets[piece[v]].insert(tree.label(v).expect("leaf label").clone());
        }
    }
    if sets.iter().any(BTreeSet::is_empty) {
        None
    } else {
        Some(sets)
    }
}

/// Exact rSPR distance as the size of a maximum agreement forest minus one,
/// with the forest as witness. Rooted binary trees with at most 10 leaves.
pub fn spr_distance_maf(a: &Tree, b: &Tree) -> Result<SprResult> {
    require_rooted_binary(a)?;
    require_rooted_binary(b)?;
    a.check_same_labels(b)?;
    let n = a.leaf_count();
    if n > MAF_LIMIT {
        return Err(TreeDistError::TooLarge {
            what: "leaf count for agreement forest search",
            size: n,
            limit: MAF_LIMIT,
        });
    }
    let rho = marker_for(a);
    let (xa, xb) = (augment(a, &rho), augment(b, &rho));
    let order = xa.preorder();
    let edges: Vec<NodeId> = xa.edges().collect();
    for k in 0..edges.len() {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let mut cut = vec![false; xa.len()];
            idx.iter().for_each(|&i| cut[edges[i]] = true);
            if let Some(parts) = pieces(&xa, &order, &cut) {
                if let Some(forest) = agreeing(&xa, &xb, &parts, &rho)? {
                    return Ok(SprResult {
                        distance: k,
                        forest,
                    });
                }
            }
            if !next_combination(&mut idx, edges.len()) {
                break;
            }
        }
    }
    unreachable!("cutting every edge leaves singletons, which always agree")
}

fn agreeing(
    xa: &Tree,
    xb: &Tree,
    parts: &[BTreeSet<Label>],
    rho: &Label,
) -> Result<Option<AgreementForest>> {
    let mut components = Vec::with_capacity(parts.len());
    for labels in parts {
        let names: Vec<&str> = labels.iter().map(Label::as_str).collect();
        let ta = restrict(xa, &names)?;
        if !is_identical(&ta, &restrict(xb, &names)?)? {
            return Ok(None);
        }
        components.push((labels.clone(), ta));
    }
    if !disjoint_spans(xb, parts) {
        return Ok(None);
    }
    Ok(Some(AgreementForest {
        rho: rho.clone(),
        components,
    }))
}
