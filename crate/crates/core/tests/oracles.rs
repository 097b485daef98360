//! Fast paths against direct enumeration, on random binary and
//! multifurcating trees.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treedist::generate::{random_trees, RandomSpec};
use treedist::newick::{parse, serialize, serialize_all};
use treedist::quartet::{
    binomial, categorize, categorize_reference, quartet_distance, triplet_distance,
};
use treedist::rf::{
    rf_distance, rf_distance_oracle, rf_distance_unrooted, shared_clusters, strict_consensus,
};
use treedist::tree::{canonical_newick, clusters, contract, is_weight_identical, restrict, splits};
use treedist::Tree;

/// Random tree with about a third of its internal edges contracted.
fn coarse(n: usize, rooted: bool, weighted: bool, seed: u64) -> Tree {
    let mut t = random_trees(
        RandomSpec {
            leaves: n,
            rooted,
            weighted,
        },
        1,
        seed,
    )
    .unwrap()
    .remove(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for _ in 0..n / 3 {
        let inner: Vec<usize> = t.edges().filter(|&v| !t.is_leaf(v)).collect();
        if inner.is_empty() {
            break;
        }
        t = contract(&t, inner[rng.gen_range(0..inner.len())]).unwrap();
    }
    t
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..n)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

/// Subsets of size `k` on which the two restricted trees differ.
fn disagreements(a: &Tree, b: &Tree, k: usize) -> u64 {
    let labels: Vec<String> = a
        .leaf_labels()
        .iter()
        .map(|l| l.as_str().to_owned())
        .collect();
    subsets(labels.len(), k)
        .iter()
        .filter(|s| {
            let names: Vec<&str> = s.iter().map(|&i| labels[i].as_str()).collect();
            let (x, y) = (restrict(a, &names).unwrap(), restrict(b, &names).unwrap());
            canonical_newick(&x, false) != canonical_newick(&y, false)
        })
        .count() as u64
}

#[test]
fn quartet_and_triplet_match_enumeration() {
    for seed in 0..40 {
        let n = 4 + (seed as usize % 6);
        let coarse_pick = seed % 2 == 0;
        let make = |s: u64, rooted: bool| {
            if coarse_pick {
                coarse(n, rooted, false, s)
            } else {
                random_trees(
                    RandomSpec {
                        leaves: n,
                        rooted,
                        weighted: false,
                    },
                    1,
                    s,
                )
                .unwrap()
                .remove(0)
            }
        };
        let (ua, ub) = (make(seed, false), make(seed + 1000, false));
        assert_eq!(
            quartet_distance(&ua, &ub).unwrap(),
            disagreements(&ua, &ub, 4),
            "seed {seed}"
        );
        assert_eq!(
            categorize(&ua, &ub, 4).unwrap(),
            categorize_reference(&ua, &ub, 4).unwrap()
        );
        let (ra, rb) = (make(seed, true), make(seed + 1000, true));
        assert_eq!(
            triplet_distance(&ra, &rb).unwrap(),
            disagreements(&ra, &rb, 3),
            "seed {seed}"
        );
        let table = categorize(&ra, &rb, 3).unwrap();
        assert_eq!(table, categorize_reference(&ra, &rb, 3).unwrap());
        assert_eq!(table.total(), binomial(n as u64, 3));
    }
}

#[test]
fn quartets_never_decrease_when_leaves_are_added() {
    for seed in 0..30 {
        let n = 5 + seed as usize % 5;
        for rooted in [false, true] {
            let spec = RandomSpec {
                leaves: n + 1,
                rooted,
                weighted: false,
            };
            let big = random_trees(spec, 2, seed).unwrap();
            let keep: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
            let small: Vec<Tree> = big.iter().map(|t| restrict(t, &keep).unwrap()).collect();
            let d = if rooted {
                triplet_distance
            } else {
                quartet_distance
            };
            assert!(d(&small[0], &small[1]).unwrap() <= d(&big[0], &big[1]).unwrap());
        }
    }
}

#[test]
fn consensus_keeps_exactly_the_shared_clusters() {
    for seed in 0..20 {
        let trees: Vec<Tree> = (0..3)
            .map(|i| coarse(9, true, false, seed * 7 + i))
            .collect();
        let c = strict_consensus(&trees).unwrap();
        let expected: BTreeSet<_> = trees
            .iter()
            .map(|t| clusters(t).unwrap())
            .reduce(|x, y| &x & &y)
            .unwrap();
        assert_eq!(clusters(&c).unwrap(), expected);
        assert_eq!(shared_clusters(&trees).unwrap(), expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rf_matches_cluster_sets(seed in any::<u64>(), n in 2usize..40, multi in any::<bool>()) {
        let (a, b) = if multi {
            (coarse(n, true, false, seed), coarse(n, true, false, seed.wrapping_add(1)))
        } else {
            let pair = random_trees(RandomSpec { leaves: n, rooted: true, weighted: false }, 2, seed).unwrap();
            (pair[0].clone(), pair[1].clone())
        };
        let d = rf_distance(&a, &b).unwrap();
        prop_assert_eq!(d, rf_distance_oracle(&a, &b).unwrap());
        prop_assert_eq!(d, rf_distance(&b, &a).unwrap());
        prop_assert_eq!(rf_distance(&a, &a).unwrap(), 0);
    }

    #[test]
    fn unrooted_rf_counts_split_differences(seed in any::<u64>(), n in 4usize..30) {
        let a = coarse(n, false, false, seed);
        let b = coarse(n, false, false, seed.wrapping_add(9));
        let nontrivial = |t: &Tree| -> BTreeSet<String> {
            splits(t).into_iter().filter(|(_, s)| !s.is_trivial()).map(|(_, s)| s.to_string()).collect()
        };
        let expected = nontrivial(&a).symmetric_difference(&nontrivial(&b)).count();
        prop_assert_eq!(rf_distance_unrooted(&a, &b).unwrap(), expected);
    }

    #[test]
    fn newick_round_trip(seed in any::<u64>(), n in 2usize..=64, rooted in any::<bool>(), multi in any::<bool>()) {
        let t = if multi {
            coarse(n, rooted, true, seed)
        } else {
            random_trees(RandomSpec { leaves: n, rooted, weighted: true }, 1, seed).unwrap().remove(0)
        };
        let text = serialize(&t, None);
        let back = parse(&text).unwrap().trees.remove(0);
        prop_assert!(is_weight_identical(&t, &back).unwrap());
        prop_assert_eq!(back.is_rooted(), t.is_rooted());
        prop_assert_eq!(serialize(&back, None), text);
    }

    #[test]
    fn many_trees_per_document(seed in any::<u64>(), count in 1usize..6) {
        let trees = random_trees(RandomSpec { leaves: 6, rooted: true, weighted: true }, count, seed).unwrap();
        let doc = parse(&serialize_all(&trees, None)).unwrap();
        prop_assert_eq!(doc.trees.len(), count);
        for (x, y) in trees.iter().zip(&doc.trees) {
            prop_assert!(is_weight_identical(x, y).unwrap());
        }
    }
}
