//! Structural rewrites: contraction, restriction and unary suppression.

use super::{Label, Node, NodeId, Tree};
use crate::error::{Result, TreeDistError};

fn add_lengths(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (None, None) => None,
        (a, b) => Some(a.unwrap_or(0.0) + b.unwrap_or(0.0)),
    }
}

/// Drops the vertices not flagged in `keep` and renumbers the rest.
fn compact(mut nodes: Vec<Node>, keep: &[bool], top: NodeId, rooted: bool) -> Tree {
    let mut map = vec![usize::MAX; nodes.len()];
    let mut next = 0;
    for (v, &k) in keep.iter().enumerate() {
        if k {
            map[v] = next;
            next += 1;
        }
    }
    let mut out = Vec::with_capacity(next);
    for (v, node) in nodes.iter_mut().enumerate() {
        if !keep[v] {
            continue;
        }
        let mut n = std::mem::replace(node, Node::new(None));
        n.parent = n.parent.map(|p| map[p]);
        n.children = n.children.iter().map(|&c| map[c]).collect();
        out.push(n);
    }
    Tree::from_parts(out, map[top], rooted)
}

/// Contracts the edge above `edge`: the two endpoints become one vertex
/// carrying both neighborhoods and the union of their labels. The
/// contracted weight is discarded.
///
/// Contracting a pendant edge moves the leaf label onto the merged vertex,
/// so the result need not be a dendrogram. Merging two labeled vertices is
/// refused with [`TreeDistError::LabelConflict`] because a vertex holds at
/// most one label.
pub fn contract(tree: &Tree, edge: NodeId) -> Result<Tree> {
    if edge >= tree.len() {
        return Err(TreeDistError::EdgeNotFound(edge));
    }
    let Some(p) = tree.parent(edge) else {
        return Err(TreeDistError::EdgeNotFound(edge));
    };
    let label = match (tree.label(p), tree.label(edge)) {
        (Some(_), Some(_)) => return Err(TreeDistError::LabelConflict(edge)),
        (a, b) => a.or(b).cloned(),
    };
    let mut nodes = tree.nodes.clone();
    let grandkids = std::mem::take(&mut nodes[edge].children);
    for &g in &grandkids {
        nodes[g].parent = Some(p);
    }
    let pos = nodes[p]
        .children
        .iter()
        .position(|&c| c == edge)
        .expect("child link");
    nodes[p].children.remove(pos);
    nodes[p].children.insert_many(pos, grandkids);
    nodes[p].label = label;
    let mut keep = vec![true; nodes.len()];
    keep[edge] = false;
    Ok(compact(nodes, &keep, tree.top, tree.rooted))
}

/// Inverse of [`contract`]: inserts a new vertex below `vertex`, moves the
/// listed children under it and optionally moves `vertex`'s label onto it.
/// Returns the tree and the new vertex.
#[cfg(test)]
fn expand(
    tree: &Tree,
    vertex: NodeId,
    moved: &[NodeId],
    move_label: bool,
    length: Option<f64>,
) -> Result<(Tree, NodeId)> {
    if vertex >= tree.len() {
        return Err(TreeDistError::EdgeNotFound(vertex));
    }
    if moved.iter().any(|&c| tree.parent(c) != Some(vertex)) {
        return Err(TreeDistError::DomainError(
            "moved vertex is not a child".into(),
        ));
    }
    let mut nodes = tree.nodes.clone();
    let u = nodes.len();
    let mut node = Node::new(None);
    node.parent = Some(vertex);
    node.length = length;
    node.children = moved.iter().copied().collect();
    if move_label {
        node.label = nodes[vertex].label.take();
    }
    for &c in moved {
        nodes[c].parent = Some(u);
    }
    nodes[vertex].children.retain(|c| !moved.contains(c));
    nodes[vertex].children.push(u);
    nodes.push(node);
    Ok((Tree::from_parts(nodes, tree.top, tree.rooted), u))
}

/// Copies the part of `tree` below `start` whose vertices are flagged in
/// `kept`, suppressing every non-start vertex left with a single kept child
/// (weights of merged edges are added).
fn compressed_copy(tree: &Tree, start: NodeId, kept: &[bool]) -> Vec<Node> {
    let leaf_label = |v: NodeId| {
        if tree.is_leaf(v) {
            tree.label(v).cloned()
        } else {
            None
        }
    };
    let kept_children = |v: NodeId| tree.children(v).iter().copied().filter(|&c| kept[c]);
    let mut nodes = vec![Node::new(leaf_label(start))];
    let mut stack = vec![(start, 0usize)];
    while let Some((v, nv)) = stack.pop() {
        for c in kept_children(v) {
            let mut cur = c;
            let mut w = tree.length(c);
            loop {
                let mut it = kept_children(cur);
                match (it.next(), it.next()) {
                    (Some(only), None) => {
                        w = add_lengths(w, tree.length(only));
                        cur = only;
                    }
                    _ => break,
                }
            }
            let id = nodes.len();
            let mut node = Node::new(leaf_label(cur));
            node.parent = Some(nv);
            node.length = w;
            nodes.push(node);
            nodes[nv].children.push(id);
            stack.push((cur, id));
        }
    }
    nodes
}

/// Removes a degree-2 anchor of an unrooted tree by joining its two edges.
fn fix_unrooted_top(mut nodes: Vec<Node>) -> Tree {
    if nodes[0].children.len() != 2 {
        return Tree::from_parts(nodes, 0, false);
    }
    let (a, b) = (nodes[0].children[0], nodes[0].children[1]);
    let (keep_top, other) = if nodes[a].children.is_empty() && !nodes[b].children.is_empty() {
        (b, a)
    } else {
        (a, b)
    };
    let w = add_lengths(nodes[a].length, nodes[b].length);
    nodes[keep_top].parent = None;
    nodes[keep_top].length = None;
    nodes[keep_top].children.push(other);
    nodes[other].parent = Some(keep_top);
    nodes[other].length = w;
    nodes[0].children.clear();
    let mut keep = vec![true; nodes.len()];
    keep[0] = false;
    compact(nodes, &keep, keep_top, false)
}

/// The tree induced on `subset`: the minimal subtree connecting those leaves
/// (rooted at their last common ancestor for rooted trees) with every
/// non-root degree-2 vertex suppressed and merged edge weights added.
pub fn restrict<I, L>(tree: &Tree, subset: I) -> Result<Tree>
where
    I: IntoIterator<Item = L>,
    L: AsRef<str>,
{
    let index = tree.leaf_index();
    let mut marked = vec![false; tree.len()];
    let mut k = 0usize;
    for l in subset {
        let l = l.as_ref();
        let v = *index
            .get(l)
            .ok_or_else(|| TreeDistError::UnknownLabel(l.to_owned()))?;
        if !marked[v] {
            marked[v] = true;
            k += 1;
        }
    }
    if k == 0 {
        return Err(TreeDistError::DomainError(
            "restriction to an empty label set".into(),
        ));
    }
    let mut count = vec![0usize; tree.len()];
    for v in tree.postorder() {
        count[v] =
            usize::from(marked[v]) + tree.children(v).iter().map(|&c| count[c]).sum::<usize>();
    }
    let mut lca = tree.top();
    while !marked[lca] {
        let mut it = tree.children(lca).iter().copied().filter(|&c| count[c] > 0);
        match (it.next(), it.next()) {
            (Some(only), None) => lca = only,
            _ => break,
        }
    }
    let kept: Vec<bool> = count.iter().map(|&c| c > 0).collect();
    let nodes = compressed_copy(tree, lca, &kept);
    Ok(if tree.is_rooted() {
        Tree::from_parts(nodes, 0, true)
    } else {
        fix_unrooted_top(nodes)
    })
}

/// Suppresses degree-2 vertices, adding merged weights. The root of a rooted
/// tree is kept even when it has a single child.
pub fn suppress_unary(tree: &Tree) -> Tree {
    let kept = vec![true; tree.len()];
    let nodes = compressed_copy(tree, tree.top(), &kept);
    if tree.is_rooted() {
        Tree::from_parts(nodes, 0, true)
    } else {
        let t = fix_unrooted_top(nodes);
        if t.is_leaf(t.top()) && t.len() > 2 {
            restrict(
                &t,
                t.leaf_labels()
                    .into_iter()
                    .map(Label::as_str)
                    .collect::<Vec<_>>(),
            )
            .expect("labels come from the tree")
        } else {
            t
        }
    }
}

/// Clears the rooted flag without touching interior vertices: a
/// single-child top is dropped together with its edge and a two-child top is
/// merged into one edge.
pub(crate) fn forget_root(tree: &Tree) -> Tree {
    let top = tree.top();
    match tree.children(top).len() {
        1 if tree.label(top).is_none() => {
            let child = tree.children(top)[0];
            let mut nodes = tree.nodes.clone();
            nodes[child].parent = None;
            nodes[child].length = None;
            nodes[top].children.clear();
            let mut keep = vec![true; nodes.len()];
            keep[top] = false;
            let t = compact(nodes, &keep, child, false);
            forget_root(&t)
        }
        2 => fix_unrooted_top(tree.reanchored(top).nodes),
        _ => Tree::from_parts(tree.nodes.clone(), top, false),
    }
}

/// The unrooted tree underlying `tree`: the root is forgotten, a degree-2
/// root is suppressed and an edge above a single-child root is dropped.
pub fn unrooted_view(tree: &Tree) -> Tree {
    let labels: Vec<String> = tree.leaf_labels().iter().map(|l| l.to_string()).collect();
    let free = Tree::from_parts(tree.nodes.clone(), tree.top, false);
    restrict(&free, &labels).expect("labels come from the tree")
}

/// Number of rooted binary trees on `n` labeled leaves, (2n-3)!!.
pub fn count_binary_topologies(n: usize) -> Result<u128> {
    if n < 2 {
        return Err(TreeDistError::DomainError(format!(
            "need at least 2 leaves, got {n}"
        )));
    }
    let mut acc: u128 = 1;
    let mut f: u128 = 3;
    while f < 2 * n as u128 - 2 {
        acc = acc
            .checked_mul(f)
            .ok_or_else(|| TreeDistError::DomainError(format!("(2n-3)!! overflows for n = {n}")))?;
        f += 2;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{is_identical, is_weight_identical, splits, validate};
    use std::collections::BTreeSet;

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    fn internal_edges(tree: &Tree) -> Vec<NodeId> {
        tree.edges().filter(|&v| !tree.is_leaf(v)).collect()
    }

    #[test]
    fn contract_internal_edge_of_three_leaf_tree() {
        let rooted = t("((1,2),3);");
        let e = internal_edges(&rooted)[0];
        let star = contract(&rooted, e).unwrap();
        assert_eq!(star.len(), rooted.len() - 1);
        assert_eq!(star.children(star.top()).len(), 3);
        assert!(validate(&star).is_empty());
    }

    #[test]
    fn contract_pendant_edge_moves_label() {
        let tree = t("((1,2),3);");
        let leaf = tree.find_leaf("1").unwrap();
        let c = contract(&tree, leaf).unwrap();
        let merged = c.parent(c.find_leaf("2").unwrap()).unwrap();
        assert_eq!(c.label(merged).map(|l| l.as_str()), Some("1"));
        assert_eq!(c.edge_count(), tree.edge_count() - 1);
    }

    #[test]
    fn contract_both_internal_edges_gives_star() {
        let rooted = t("((1,2),(3,4));");
        let e = internal_edges(&rooted);
        assert_eq!(e.len(), 2);
        let once = contract(&rooted, e[0]).unwrap();
        let e2 = internal_edges(&once);
        assert_eq!(e2.len(), 1);
        let star = contract(&once, e2[0]).unwrap();
        assert_eq!(star.children(star.top()).len(), 4);
        assert!(is_identical(&star, &t("(1,2,3,4);").with_rooted(true)).unwrap());
    }

    #[test]
    fn contract_missing_edge() {
        let tree = t("((1,2),3);");
        assert_eq!(
            contract(&tree, tree.top()).unwrap_err(),
            TreeDistError::EdgeNotFound(tree.top())
        );
        assert_eq!(
            contract(&tree, 99).unwrap_err(),
            TreeDistError::EdgeNotFound(99)
        );
    }

    #[test]
    fn contract_then_expand_round_trip() {
        let tree = t("(((1,2),(3,4)),(5,6));");
        for e in tree.edges().collect::<Vec<_>>() {
            let p = tree.parent(e).unwrap();
            let c = contract(&tree, e).unwrap();
            // ids shift down by one above the removed vertex
            let remap = |v: NodeId| if v > e { v - 1 } else { v };
            let moved: Vec<NodeId> = tree.children(e).iter().map(|&g| remap(g)).collect();
            let (back, _) = expand(&c, remap(p), &moved, tree.is_leaf(e), None).unwrap();
            assert!(is_identical(&back, &tree).unwrap(), "edge {e}");
        }
    }

    #[test]
    fn restrict_to_everything_only_suppresses() {
        let tree = t("((1:1,2:1):1,3:1);");
        let r = restrict(&tree, ["1", "2", "3"]).unwrap();
        assert!(is_weight_identical(&r, &tree).unwrap());
        let split_set = |x: &Tree| {
            splits(x)
                .into_iter()
                .map(|(_, s)| s)
                .collect::<BTreeSet<_>>()
        };
        assert_eq!(split_set(&r), split_set(&tree));
    }

    #[test]
    fn restrict_picks_cherry() {
        let r = restrict(&t("((1,2),(3,4));"), ["1", "3"]).unwrap();
        assert!(is_identical(&r, &t("(1,3);")).unwrap());
    }

    #[test]
    fn restrict_adds_weights() {
        let r = restrict(&t("((1:1,2:1):2,3:1);"), ["1", "3"]).unwrap();
        let l1 = r.find_leaf("1").unwrap();
        assert_eq!(r.length(l1), Some(3.0));
    }

    #[test]
    fn restrict_unrooted_merges_anchor() {
        let tree = t("(1:1,2:2,(3:3,4:4):5);");
        let r = restrict(&tree, ["1", "3"]).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.total_length(), 9.0);
        let r = restrict(&tree, ["1", "3", "4"]).unwrap();
        assert_eq!(r.len(), 4);
        assert!(validate(&r).is_empty());
        assert_eq!(r.total_length(), 13.0);
    }

    #[test]
    fn restrict_single_leaf_and_errors() {
        let r = restrict(&t("((1,2),3);"), ["2"]).unwrap();
        assert_eq!(r.len(), 1);
        assert!(matches!(
            restrict(&t("((1,2),3);"), ["9"]),
            Err(TreeDistError::UnknownLabel(_))
        ));
    }

    #[test]
    fn unrooted_view_drops_root() {
        let u = unrooted_view(&t("((1:1,2:1):2,(3:1,4:1):3);"));
        assert!(!u.is_rooted());
        assert_eq!(u.edge_count(), 5);
        assert_eq!(u.total_length(), 9.0);
    }

    #[test]
    fn binary_topology_counts() {
        assert_eq!(count_binary_topologies(2).unwrap(), 1);
        assert_eq!(count_binary_topologies(3).unwrap(), 3);
        assert_eq!(count_binary_topologies(4).unwrap(), 15);
        assert_eq!(count_binary_topologies(5).unwrap(), 105);
        assert!(count_binary_topologies(1).is_err());
        assert!(count_binary_topologies(200).is_err());
    }
}
