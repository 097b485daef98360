//! Quartet distance (unrooted), triplet distance (rooted) and triplet length
//! distance, by enumerating every subset of three or four labels.
//!
//! Each subset falls into one of five categories depending on how the two
//! trees display it:
//!
//! | category | in `a`     | in `b`     |
//! |----------|------------|------------|
//! | A        | resolved   | resolved, same pairing |
//! | B        | resolved   | resolved, other pairing |
//! | C        | resolved   | unresolved |
//! | D        | unresolved | resolved   |
//! | E        | unresolved | unresolved |
//!
//! The distance is `B + C + D`.

use crate::error::{Result, TreeDistError};
use crate::pairs::PairTable;
use crate::tree::{restrict, Label, Taxa, Tree};

/// Shape of the subtree induced on three labels (rooted) or four
/// (unrooted).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SubsetTopology {
    /// For triplets: the two labels joined below the root. For quartets:
    /// the pair on the same side as the smallest label (which is `.0`).
    Resolved(Label, Label),
    Unresolved,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CategoryTable {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub e: u64,
}

impl CategoryTable {
    pub fn total(&self) -> u64 {
        self.a + self.b + self.c + self.d + self.e
    }

    pub fn distance(&self) -> u64 {
        self.b + self.c + self.d
    }

    /// `None` stands for an unresolved subset.
    fn add<T: PartialEq>(&mut self, x: Option<T>, y: Option<T>) {
        match (x, y) {
            (Some(p), Some(q)) if p == q => self.a += 1,
            (Some(_), Some(_)) => self.b += 1,
            (Some(_), None) => self.c += 1,
            (None, Some(_)) => self.d += 1,
            (None, None) => self.e += 1,
        }
    }
}

/// Pairing of a subset by position: for quartets the position joined with
/// position 0 (1..=3), for triplets the index of the cherry pair among
/// (0,1), (0,2), (1,2). `None` when unresolved.
type Shape = Option<u8>;

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn check_kind(tree: &Tree, k: usize) -> Result<()> {
    match (k, tree.is_rooted()) {
        (3, true) | (4, false) => Ok(()),
        (3, false) | (4, true) => Err(TreeDistError::RootednessMismatch),
        (got, rooted) => Err(TreeDistError::SubsetSizeMismatch {
            expected: if rooted { 3 } else { 4 },
            got,
        }),
    }
}

/// Topology induced on `subset`, read from the restricted tree.
pub fn induced_topology<L: AsRef<str>>(tree: &Tree, subset: &[L]) -> Result<SubsetTopology> {
    check_kind(tree, subset.len())?;
    let mut labels: Vec<&str> = subset.iter().map(AsRef::as_ref).collect();
    labels.sort_unstable();
    labels.dedup();
    if labels.len() != subset.len() {
        return Err(TreeDistError::DomainError("subset labels repeat".into()));
    }
    let r = restrict(tree, &labels)?;
    let leaf_pair = |v| -> Option<(Label, Label)> {
        let kids = r.children(v);
        if kids.len() == 2 && kids.iter().all(|&c| r.is_leaf(c)) {
            let mut p = [r.label(kids[0])?.clone(), r.label(kids[1])?.clone()];
            p.sort();
            let [x, y] = p;
            Some((x, y))
        } else {
            None
        }
    };
    if tree.is_rooted() {
        if r.children(r.top()).len() == 3 {
            return Ok(SubsetTopology::Unresolved);
        }
        let cherry = r
            .children(r.top())
            .iter()
            .find_map(|&c| leaf_pair(c))
            .expect("a resolved triplet has a cherry");
        return Ok(SubsetTopology::Resolved(cherry.0, cherry.1));
    }
    let internal: Vec<usize> = (0..r.len()).filter(|&v| !r.is_leaf(v)).collect();
    if internal.len() == 1 {
        return Ok(SubsetTopology::Unresolved);
    }
    let smallest = r
        .find_leaf(labels[0])
        .expect("restricted tree keeps the labels");
    let hub = r.neighbors(smallest).next().expect("leaf has a neighbor");
    let partner = r
        .neighbors(hub)
        .filter(|&u| u != smallest && r.is_leaf(u))
        .map(|u| r.label(u).expect("leaf label").clone())
        .next()
        .expect("a resolved quartet pairs every leaf");
    Ok(SubsetTopology::Resolved(Label::new(labels[0]), partner))
}

fn quartet_shape(p: &PairTable, q: [usize; 4]) -> Shape {
    let d = |x: usize, y: usize| p.topo(q[x], q[y]);
    // four-point condition: the pairing with the smallest sum is the split
    let sums = [d(0, 1) + d(2, 3), d(0, 2) + d(1, 3), d(0, 3) + d(1, 2)];
    let min = *sums.iter().min().expect("three sums");
    let winners: Vec<usize> = (0..3).filter(|&i| sums[i] == min).collect();
    (winners.len() == 1).then(|| winners[0] as u8 + 1)
}

fn triplet_shape(p: &PairTable, t: [usize; 3]) -> Shape {
    let depth = |x: usize, y: usize| p.depth[p.lca(t[x], t[y])];
    let pairs = [depth(0, 1), depth(0, 2), depth(1, 2)];
    let max = *pairs.iter().max().expect("three depths");
    let winners: Vec<usize> = (0..3).filter(|&i| pairs[i] == max).collect();
    (winners.len() == 1).then(|| winners[0] as u8)
}

fn prepare(a: &Tree, b: &Tree, k: usize) -> Result<Taxa> {
    check_kind(a, k)?;
    check_kind(b, k)?;
    a.check_same_labels(b)?;
    Ok(Taxa::from_tree(a))
}

fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn conserved(table: CategoryTable, n: usize, k: usize) -> CategoryTable {
    assert_eq!(
        table.total(),
        binomial(n as u64, k as u64),
        "category counts must cover every subset exactly once"
    );
    table
}

/// Category counts over every subset of size `k` (3: rooted triplets,
/// 4: unrooted quartets), from all-pairs path tables.
pub fn categorize(a: &Tree, b: &Tree, k: usize) -> Result<CategoryTable> {
    let taxa = prepare(a, b, k)?;
    let (pa, pb) = (PairTable::new(a, &taxa), PairTable::new(b, &taxa));
    let mut table = CategoryTable::default();
    for_each_subset(taxa.len(), k, |s| {
        if k == 3 {
            let t = [s[0], s[1], s[2]];
            table.add(triplet_shape(&pa, t), triplet_shape(&pb, t));
        } else {
            let q = [s[0], s[1], s[2], s[3]];
            table.add(quartet_shape(&pa, q), quartet_shape(&pb, q));
        }
    });
    Ok(conserved(table, taxa.len(), k))
}

/// Same counts, each subset classified by restricting both trees to it.
pub fn categorize_reference(a: &Tree, b: &Tree, k: usize) -> Result<CategoryTable> {
    let taxa = prepare(a, b, k)?;
    let mut table = CategoryTable::default();
    let mut err = None;
    let shape = |t: SubsetTopology| match t {
        SubsetTopology::Unresolved => None,
        SubsetTopology::Resolved(x, y) => Some((x, y)),
    };
    for_each_subset(taxa.len(), k, |s| {
        if err.is_some() {
            return;
        }
        let labels: Vec<&str> = s.iter().map(|&i| taxa.label(i).as_str()).collect();
        match (induced_topology(a, &labels), induced_topology(b, &labels)) {
            (Ok(x), Ok(y)) => table.add(shape(x), shape(y)),
            (Err(e), _) | (_, Err(e)) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(conserved(table, taxa.len(), k))
}

/// Number of 4-subsets displayed differently by two unrooted trees.
pub fn quartet_distance(a: &Tree, b: &Tree) -> Result<u64> {
    Ok(categorize(a, b, 4)?.distance())
}

/// Number of 3-subsets displayed differently by two rooted trees.
pub fn triplet_distance(a: &Tree, b: &Tree) -> Result<u64> {
    Ok(categorize(a, b, 3)?.distance())
}

/// Sum over triplets displayed alike by both trees of two path-length
/// differences: for a cherry `{i, j}` (i the smaller label) with outgroup
/// `k`, the paths i-j and i-k; for an unresolved triplet, the paths from
/// its smallest label to the other two. Path lengths include pendant edges.
/// Triplets displayed differently contribute nothing.
pub fn triplet_length_distance(a: &Tree, b: &Tree) -> Result<f64> {
    let taxa = prepare(a, b, 3)?;
    a.require_weighted()?;
    b.require_weighted()?;
    let (pa, pb) = (PairTable::new(a, &taxa), PairTable::new(b, &taxa));
    let delta = |x: usize, y: usize| (pa.dist(x, y) - pb.dist(x, y)).abs();
    let mut total = 0.0;
    for_each_subset(taxa.len(), 3, |s| {
        let t = [s[0], s[1], s[2]];
        let (sa, sb) = (triplet_shape(&pa, t), triplet_shape(&pb, t));
        if sa != sb {
            return;
        }
        let (i, j, k) = match sa {
            Some(1) => (t[0], t[2], t[1]),
            Some(2) => (t[1], t[2], t[0]),
            _ => (t[0], t[1], t[2]),
        };
        total += delta(i, j) + delta(i, k);
    });
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{random_trees, RandomSpec};

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    fn resolved(x: &str, y: &str) -> SubsetTopology {
        SubsetTopology::Resolved(x.into(), y.into())
    }

    #[test]
    fn induced_topologies() {
        assert_eq!(
            induced_topology(
                &t("((1,2),(3,4));").with_rooted(false),
                &["1", "2", "3", "4"]
            )
            .unwrap(),
            resolved("1", "2")
        );
        assert_eq!(
            induced_topology(&t("(1,2,3,4);"), &["1", "2", "3", "4"]).unwrap(),
            SubsetTopology::Unresolved
        );
        assert_eq!(
            induced_topology(&t("(((1,2),3),4);"), &["1", "2", "4"]).unwrap(),
            resolved("1", "2")
        );
        assert_eq!(
            induced_topology(&t("(((1,3),2),4);"), &["4", "2", "3"]).unwrap(),
            resolved("2", "3")
        );
        assert_eq!(
            induced_topology(&t("(1,2,3,4);"), &["1", "2", "3"]).unwrap_err(),
            TreeDistError::RootednessMismatch
        );
        assert!(matches!(
            induced_topology(&t("(1,2,3,4);"), &["1", "2"]),
            Err(TreeDistError::SubsetSizeMismatch {
                expected: 4,
                got: 2
            })
        ));
    }

    #[test]
    fn self_comparison_and_stars() {
        let a = t("((((1,2),3),(4,5)),6);");
        let table = categorize(&a, &a, 3).unwrap();
        assert_eq!(
            table,
            CategoryTable {
                a: 20,
                ..Default::default()
            }
        );
        let star = t("[&R](1,2,3,4,5);");
        let table = categorize(&star, &star, 3).unwrap();
        assert_eq!(
            table,
            CategoryTable {
                e: 10,
                ..Default::default()
            }
        );
    }

    #[test]
    fn four_leaf_triplet_table() {
        // (((1,2),3),4) against ((1,(2,3)),4)
        let a = t("(((1,2),3),4);");
        let b = t("((1,(2,3)),4);");
        let fast = categorize(&a, &b, 3).unwrap();
        let slow = categorize_reference(&a, &b, 3).unwrap();
        assert_eq!(fast, slow);
        assert_eq!(
            fast,
            CategoryTable {
                a: 3,
                b: 1,
                ..Default::default()
            }
        );
    }

    #[test]
    fn small_distances() {
        let a = t("((1,2),(3,4));").with_rooted(false);
        let b = t("((1,3),(2,4));").with_rooted(false);
        assert_eq!(quartet_distance(&a, &a).unwrap(), 0);
        assert_eq!(quartet_distance(&a, &b).unwrap(), 1);
        assert_eq!(quartet_distance(&a, &t("(1,2,3,4);")).unwrap(), 1);
        assert_eq!(
            triplet_distance(&t("((1,2),3);"), &t("((1,3),2);")).unwrap(),
            1
        );
        assert_eq!(
            triplet_distance(&t("((1,2),3);"), &t("((1,2),3);")).unwrap(),
            0
        );
    }

    #[test]
    fn fast_counts_match_reference() {
        for n in [4, 5, 7, 9] {
            for rooted in [true, false] {
                let k = if rooted { 3 } else { 4 };
                let spec = RandomSpec {
                    leaves: n,
                    rooted,
                    weighted: false,
                };
                let trees = random_trees(spec, 6, 40 + n as u64).unwrap();
                for pair in trees.chunks(2) {
                    assert_eq!(
                        categorize(&pair[0], &pair[1], k).unwrap(),
                        categorize_reference(&pair[0], &pair[1], k).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn triplet_length_values() {
        let a = t("((1:1,2:1):1,3:1);");
        assert_eq!(triplet_length_distance(&a, &a).unwrap(), 0.0);
        // pendant edge above 1 grows from 1 to 2: path 1-2 and 1-3 each +1
        let b = t("((1:2,2:1):1,3:1);");
        assert_eq!(triplet_length_distance(&a, &b).unwrap(), 2.0);
        // disagreeing triplet contributes nothing
        let c = t("((1:5,3:1):1,2:1);");
        assert_eq!(triplet_length_distance(&a, &c).unwrap(), 0.0);
        assert_eq!(
            triplet_length_distance(&t("((1,2),3);"), &t("((1,2),3);")).unwrap_err(),
            TreeDistError::UnweightedInput
        );
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(30, 4), 27405);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(5, 0), 1);
    }
}
