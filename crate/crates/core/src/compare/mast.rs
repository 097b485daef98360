//! Maximum agreement subtree of two rooted trees.

use std::collections::BTreeSet;

use crate::error::{Result, TreeDistError};
use crate::tree::{is_identical, restrict, suppress_unary, Label, NodeId, Taxa, Tree};

/// Size limit for the exhaustive search on non-binary trees.
const EXHAUSTIVE_LIMIT: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MastResult {
    /// `n - |witness|`.
    pub distance: usize,
    /// A largest label set on which both trees induce the same topology.
    pub witness: BTreeSet<Label>,
}

/// Maximum agreement subtree distance with a witness. Binary trees use the
/// vertex-pair recursion; other trees fall back to [`mast_exhaustive`].
pub fn mast_distance(a: &Tree, b: &Tree) -> Result<MastResult> {
    a.require_rooted()?;
    b.require_rooted()?;
    a.check_same_labels(b)?;
    let (sa, sb) = (suppress_unary(a), suppress_unary(b));
    let (ta, tb) = (effective_top(&sa), effective_top(&sb));
    if is_binary_below(&sa, ta) && is_binary_below(&sb, tb) {
        Ok(pair_recursion(&sa, ta, &sb, tb))
    } else {
        mast_exhaustive(a, b)
    }
}

/// First vertex with more than one child, skipping a single-child root.
fn effective_top(t: &Tree) -> NodeId {
    let mut v = t.top();
    while t.children(v).len() == 1 {
        v = t.children(v)[0];
    }
    v
}

fn is_binary_below(t: &Tree, top: NodeId) -> bool {
    let mut stack = vec![top];
    while let Some(v) = stack.pop() {
        let kids = t.children(v);
        if !kids.is_empty() && kids.len() != 2 {
            return false;
        }
        stack.extend(kids);
    }
    true
}

/// Post-order below `top` plus entry/exit times for subtree membership.
struct Walk {
    order: Vec<NodeId>,
    enter: Vec<usize>,
    exit: Vec<usize>,
}

impl Walk {
    fn new(t: &Tree, top: NodeId) -> Walk {
        let mut enter = vec![0; t.len()];
        let mut exit = vec![0; t.len()];
        let mut order = Vec::new();
        let mut clock = 0;
        let mut stack = vec![(top, false)];
        while let Some((v, done)) = stack.pop() {
            if done {
                exit[v] = clock;
                order.push(v);
                continue;
            }
            enter[v] = clock;
            clock += 1;
            stack.push((v, true));
            stack.extend(t.children(v).iter().map(|&c| (c, false)));
        }
        Walk { order, enter, exit }
    }

    fn contains(&self, ancestor: NodeId, v: NodeId) -> bool {
        self.enter[ancestor] <= self.enter[v] && self.enter[v] < self.exit[ancestor]
    }
}

#[derive(Clone, Copy)]
enum Step {
    Empty,
    /// The single shared leaf; the label is read from whichever side is a leaf.
    Leaf,
    Pairs {
        cross: bool,
    },
    /// Skip to a child on one side: `(in_a, child index)`.
    Descend {
        in_a: bool,
        child: usize,
    },
}

fn pair_recursion(a: &Tree, ta: NodeId, b: &Tree, tb: NodeId) -> MastResult {
    let taxa = Taxa::from_tree(a);
    let n = taxa.len();
    let (wa, wb) = (Walk::new(a, ta), Walk::new(b, tb));
    let leaf_of = |t: &Tree| -> Vec<NodeId> {
        let index = t.leaf_index();
        taxa.labels().iter().map(|l| index[l.as_str()]).collect()
    };
    let (la, lb) = (leaf_of(a), leaf_of(b));
    let cols = b.len();
    let mut size = vec![0u32; a.len() * cols];
    let mut step = vec![Step::Empty; a.len() * cols];
    let at = |u: NodeId, v: NodeId| u * cols + v;
    for &u in &wa.order {
        for &v in &wb.order {
            let (best, how) = if a.is_leaf(u) {
                let i = taxa
                    .index(a.label(u).expect("leaf label"))
                    .expect("shared label");
                if wb.contains(v, lb[i]) {
                    (1, Step::Leaf)
                } else {
                    (0, Step::Empty)
                }
            } else if b.is_leaf(v) {
                let j = taxa
                    .index(b.label(v).expect("leaf label"))
                    .expect("shared label");
                if wa.contains(u, la[j]) {
                    (1, Step::Leaf)
                } else {
                    (0, Step::Empty)
                }
            } else {
                let (u1, u2) = (a.children(u)[0], a.children(u)[1]);
                let (v1, v2) = (b.children(v)[0], b.children(v)[1]);
                let s = |x, y| size[at(x, y)];
                [
                    (s(u1, v1) + s(u2, v2), Step::Pairs { cross: false }),
                    (s(u1, v2) + s(u2, v1), Step::Pairs { cross: true }),
                    (
                        s(u, v1),
                        Step::Descend {
                            in_a: false,
                            child: 0,
                        },
                    ),
                    (
                        s(u, v2),
                        Step::Descend {
                            in_a: false,
                            child: 1,
                        },
                    ),
                    (
                        s(u1, v),
                        Step::Descend {
                            in_a: true,
                            child: 0,
                        },
                    ),
                    (
                        s(u2, v),
                        Step::Descend {
                            in_a: true,
                            child: 1,
                        },
                    ),
                ]
                .into_iter()
                .fold((0, Step::Empty), |acc, c| if c.0 > acc.0 { c } else { acc })
            };
            size[at(u, v)] = best;
            step[at(u, v)] = how;
        }
    }
    let mut witness = BTreeSet::new();
    let mut stack = vec![(ta, tb)];
    while let Some((u, v)) = stack.pop() {
        match step[at(u, v)] {
            Step::Empty => {}
            Step::Leaf => {
                let leaf = if a.is_leaf(u) { a.label(u) } else { b.label(v) };
                witness.insert(leaf.expect("leaf label").clone());
            }
            Step::Pairs { cross } => {
                let (u1, u2) = (a.children(u)[0], a.children(u)[1]);
                let (v1, v2) = (b.children(v)[0], b.children(v)[1]);
                if cross {
                    stack.extend([(u1, v2), (u2, v1)]);
                } else {
                    stack.extend([(u1, v1), (u2, v2)]);
                }
            }
            Step::Descend { in_a: true, child } => stack.push((a.children(u)[child], v)),
            Step::Descend { in_a: false, child } => stack.push((u, b.children(v)[child])),
        }
    }
    debug_assert_eq!(witness.len(), size[at(ta, tb)] as usize);
    MastResult {
        distance: n - witness.len(),
        witness,
    }
}

/// Agreement subtree search over label subsets in decreasing size, for
/// trees of any degree with at most 12 leaves.
pub fn mast_exhaustive(a: &Tree, b: &Tree) -> Result<MastResult> {
    a.require_rooted()?;
    b.require_rooted()?;
    a.check_same_labels(b)?;
    let labels: Vec<Label> = a.leaf_labels().into_iter().cloned().collect();
    let n = labels.len();
    if n > EXHAUSTIVE_LIMIT {
        return Err(TreeDistError::TooLarge {
            what: "leaf count for exhaustive agreement search",
            size: n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let mut masks: Vec<u32> = (1..1u32 << n).collect();
    masks.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
    for m in masks {
        let subset: Vec<&str> = (0..n)
            .filter(|i| m >> i & 1 == 1)
            .map(|i| labels[i].as_str())
            .collect();
        if is_identical(&restrict(a, &subset)?, &restrict(b, &subset)?)? {
            return Ok(MastResult {
                distance: n - subset.len(),
                witness: subset.into_iter().map(Label::from).collect(),
            });
        }
    }
    Ok(MastResult {
        distance: n,
        witness: BTreeSet::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{random_trees, RandomSpec};

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    fn agrees(a: &Tree, b: &Tree, w: &BTreeSet<Label>) -> bool {
        let w: Vec<&str> = w.iter().map(Label::as_str).collect();
        is_identical(&restrict(a, &w).unwrap(), &restrict(b, &w).unwrap()).unwrap()
    }

    #[test]
    fn identical_trees() {
        let a = t("(((1,2),3),(4,5));");
        let r = mast_distance(&a, &a).unwrap();
        assert_eq!(r.distance, 0);
        assert_eq!(r.witness.len(), 5);
    }

    #[test]
    fn three_leaf_conflict() {
        let r = mast_distance(&t("((1,2),3);"), &t("((1,3),2);")).unwrap();
        assert_eq!(r.distance, 1);
        assert_eq!(r.witness.len(), 2);
    }

    #[test]
    fn agreement_subtree_beyond_consensus() {
        // no cluster is shared, yet four leaves agree
        let a = t("((((1,2),3),4),5);");
        let b = t("((((2,3),4),5),1);");
        let shared = crate::rf::shared_clusters(&[a.clone(), b.clone()]).unwrap();
        assert!(shared.iter().all(|c| c.len() == 1));
        let r = mast_distance(&a, &b).unwrap();
        assert_eq!(r.distance, 1);
        let expected: BTreeSet<Label> = ["2", "3", "4", "5"].into_iter().map(Label::from).collect();
        assert_eq!(r.witness, expected);
        assert_eq!(mast_exhaustive(&a, &b).unwrap(), r);
    }

    #[test]
    fn recursion_matches_exhaustive_search() {
        for n in 3..9 {
            let spec = RandomSpec {
                leaves: n,
                rooted: true,
                weighted: false,
            };
            let trees = random_trees(spec, 40, 100 + n as u64).unwrap();
            for pair in trees.chunks(2) {
                let fast = mast_distance(&pair[0], &pair[1]).unwrap();
                let slow = mast_exhaustive(&pair[0], &pair[1]).unwrap();
                assert_eq!(fast.distance, slow.distance, "{} {}", pair[0], pair[1]);
                assert!(agrees(&pair[0], &pair[1], &fast.witness));
            }
        }
    }

    #[test]
    fn non_binary_input() {
        let a = t("((1,2,3),(4,5));");
        let b = t("((1,2),(3,4,5));");
        let r = mast_distance(&a, &b).unwrap();
        assert!(agrees(&a, &b, &r.witness));
        assert_eq!(r.distance, 1);
        let star: String = format!(
            "({});",
            (1..=13)
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        let big = crate::newick::parse_with(
            &star,
            &crate::newick::ParseOptions {
                rooting: crate::newick::Rooting::Rooted,
                ..Default::default()
            },
        )
        .unwrap()
        .trees
        .remove(0);
        assert!(matches!(
            mast_distance(&big, &big),
            Err(TreeDistError::TooLarge { .. })
        ));
        assert_eq!(
            mast_distance(&a, &t("(1,2,3,4);")).unwrap_err(),
            TreeDistError::UnrootedInput
        );
    }
}
