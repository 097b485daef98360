//! Exhaustive path-space search, the reference for [`super::geodesic_distance`].
//!
//! Every pair of ordered partitions of the unique edges into the same number
//! of blocks is tried. Pairs violating P1 are skipped; the rest have their
//! blocks merged until the ratios increase and are measured with the closed
//! form.

use super::{merged_block_length, GeodesicOptions, Problem};
use crate::error::{Result, TreeDistError};
use crate::tree::Tree;

const LIMIT: usize = 5;

/// Block label of every element for each surjection of `m` elements onto
/// `k` ordered blocks.
fn surjections(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; m];
    loop {
        let mut used = vec![false; k];
        labels.iter().for_each(|&l| used[l] = true);
        if used.iter().all(|&u| u) {
            out.push(labels.clone());
        }
        let mut i = 0;
        while i < m && labels[i] == k - 1 {
            labels[i] = 0;
            i += 1;
        }
        if i == m {
            return out;
        }
        labels[i] += 1;
    }
}

fn block_squares(weights: &[f64], labels: &[usize], k: usize) -> Vec<f64> {
    let mut sq = vec![0.0; k];
    for (w, &l) in weights.iter().zip(labels) {
        sq[l] += w * w;
    }
    sq
}

/// Shortest path-space geodesic by brute force, counting pendant edges.
pub fn geodesic_oracle(a: &Tree, b: &Tree) -> Result<f64> {
    geodesic_oracle_with(a, b, GeodesicOptions::default())
}

pub fn geodesic_oracle_with(a: &Tree, b: &Tree, options: GeodesicOptions) -> Result<f64> {
    let p = Problem::new(a, b, options)?;
    let (ma, mb) = (p.a.len(), p.b.len());
    let size = ma.max(mb);
    if size > LIMIT {
        return Err(TreeDistError::TooLarge {
            what: "unique edges per tree",
            size,
            limit: LIMIT,
        });
    }
    let outside = p.outside();
    if ma == 0 {
        return Ok(outside.sqrt());
    }
    let wa: Vec<f64> = p.a.iter().map(|e| e.1).collect();
    let wb: Vec<f64> = p.b.iter().map(|e| e.1).collect();
    let mut best = f64::INFINITY;
    for k in 1..=ma.min(mb) {
        let parts_a = surjections(ma, k);
        let parts_b = surjections(mb, k);
        for la in &parts_a {
            let sa = block_squares(&wa, la, k);
            for lb in &parts_b {
                // P1: a conflicting pair may not have its A edge in a later block
                if p.conflicts.iter().any(|&(i, j)| la[i] > lb[j]) {
                    continue;
                }
                let sb = block_squares(&wb, lb, k);
                let squared: Vec<(f64, f64)> = sa.iter().copied().zip(sb).collect();
                best = best.min(merged_block_length(&squared));
            }
        }
    }
    Ok((best + outside).sqrt())
}
