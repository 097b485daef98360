//! Minimum-weight vertex cover of a bipartite graph via maximum flow.

use std::collections::VecDeque;

const EPS: f64 = 1e-12;

struct Arc {
    to: usize,
    cap: f64,
}

struct Network {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl Network {
    fn new(n: usize) -> Self {
        Network {
            arcs: Vec::new(),
            out: vec![Vec::new(); n],
        }
    }

    fn add(&mut self, from: usize, to: usize, cap: f64) {
        self.out[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap });
        self.out[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0.0 });
    }

    /// Predecessor arc of every vertex reachable from `s` in the residual
    /// graph (`Some(usize::MAX)` for `s` itself).
    fn residual_bfs(&self, s: usize) -> Vec<Option<usize>> {
        let mut pred = vec![None; self.out.len()];
        pred[s] = Some(usize::MAX);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.out[v] {
                let arc = &self.arcs[e];
                if arc.cap > EPS && pred[arc.to].is_none() {
                    pred[arc.to] = Some(e);
                    queue.push_back(arc.to);
                }
            }
        }
        pred
    }

    /// Edmonds-Karp. Returns the flow value and the residual reachability
    /// of the final (minimum) cut.
    fn max_flow(&mut self, s: usize, t: usize) -> (f64, Vec<bool>) {
        let mut total = 0.0;
        loop {
            let pred = self.residual_bfs(s);
            if pred[t].is_none() {
                return (total, pred.iter().map(Option::is_some).collect());
            }
            let mut push = f64::INFINITY;
            let mut v = t;
            while v != s {
                let e = pred[v].expect("on path");
                push = push.min(self.arcs[e].cap);
                v = self.arcs[e ^ 1].to;
            }
            let mut v = t;
            while v != s {
                let e = pred[v].expect("on path");
                self.arcs[e].cap -= push;
                self.arcs[e ^ 1].cap += push;
                v = self.arcs[e ^ 1].to;
            }
            total += push;
        }
    }
}

/// Cover of the edges `(i, j)` between left vertices weighted `left` and right
/// vertices weighted `right` with minimum total weight. Returns the weight and
/// the membership flags of each side.
pub(crate) fn min_weight_cover(
    left: &[f64],
    right: &[f64],
    edges: &[(usize, usize)],
) -> (f64, Vec<bool>, Vec<bool>) {
    let (p, q) = (left.len(), right.len());
    let (s, t) = (p + q, p + q + 1);
    let mut net = Network::new(p + q + 2);
    for (i, &w) in left.iter().enumerate() {
        net.add(s, i, w);
    }
    for (j, &w) in right.iter().enumerate() {
        net.add(p + j, t, w);
    }
    for &(i, j) in edges {
        net.add(i, p + j, f64::INFINITY);
    }
    let (flow, reach) = net.max_flow(s, t);
    let in_left = (0..p).map(|i| !reach[i]).collect();
    let in_right = (0..q).map(|j| reach[p + j]).collect();
    (flow, in_left, in_right)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(left: &[f64], right: &[f64], edges: &[(usize, usize)]) -> f64 {
        let (p, q) = (left.len(), right.len());
        let mut best = f64::INFINITY;
        for ml in 0u32..1 << p {
            for mr in 0u32..1 << q {
                if edges
                    .iter()
                    .all(|&(i, j)| ml >> i & 1 == 1 || mr >> j & 1 == 1)
                {
                    let w: f64 = (0..p)
                        .filter(|&i| ml >> i & 1 == 1)
                        .map(|i| left[i])
                        .sum::<f64>()
                        + (0..q)
                            .filter(|&j| mr >> j & 1 == 1)
                            .map(|j| right[j])
                            .sum::<f64>();
                    best = best.min(w);
                }
            }
        }
        best
    }

    #[test]
    fn cover_matches_brute_force() {
        let cases: Vec<(Vec<f64>, Vec<f64>, Vec<(usize, usize)>)> = vec![
            (vec![0.5, 0.5], vec![0.5, 0.5], vec![(0, 0), (1, 1)]),
            (vec![0.9, 0.1], vec![0.3, 0.7], vec![(0, 0), (0, 1), (1, 1)]),
            (
                vec![0.2, 0.3, 0.5],
                vec![0.6, 0.4],
                vec![(0, 0), (1, 0), (2, 1), (2, 0)],
            ),
            (vec![1.0], vec![1.0], vec![]),
        ];
        for (l, r, e) in cases {
            let (w, in_l, in_r) = min_weight_cover(&l, &r, &e);
            assert!((w - brute(&l, &r, &e)).abs() < 1e-12);
            assert!(e.iter().all(|&(i, j)| in_l[i] || in_r[j]));
            let chosen: f64 = l
                .iter()
                .zip(&in_l)
                .filter(|p| *p.1)
                .map(|p| p.0)
                .sum::<f64>()
                + r.iter()
                    .zip(&in_r)
                    .filter(|p| *p.1)
                    .map(|p| p.0)
                    .sum::<f64>();
            assert!((chosen - w).abs() < 1e-12);
        }
    }
}
