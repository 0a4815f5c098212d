//! Brute-force oracles shared by the integration tests. Deliberately naive and
//! independent of the library's own enumeration and counting code.
#![allow(dead_code)]

/// A labeled graph as an adjacency matrix of booleans.
#[derive(Clone, Debug)]
pub struct Small {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
}

impl Small {
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&x| x).count()
    }

    pub fn edges(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn concurrent(&self) -> usize {
        (0..self.n).filter(|&v| self.degree(v) >= 2).count()
    }

    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.adj[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn with(&self, i: usize, j: usize, on: bool) -> Small {
        let mut g = self.clone();
        g.adj[i][j] = on;
        g.adj[j][i] = on;
        g
    }
}

pub fn pairs_of(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

/// Every labeled graph on `n` vertices, in bitmask order over `pairs_of(n)`.
pub fn all_graphs(n: usize) -> impl Iterator<Item = (u64, Small)> {
    let pairs = pairs_of(n);
    assert!(pairs.len() <= 21, "too many dyads to enumerate");
    (0u64..1 << pairs.len()).map(move |mask| {
        let mut adj = vec![vec![false; n]; n];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
        (mask, Small { n, adj })
    })
}

pub fn mask_of(n: usize, edges: &[(usize, usize)]) -> u64 {
    let pairs = pairs_of(n);
    edges
        .iter()
        .map(|&(a, b)| {
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            1u64 << pairs.iter().position(|&p| p == (i, j)).unwrap()
        })
        .sum()
}

pub fn log_weight(g: &Small, te: f64, tc: f64) -> f64 {
    te * g.edges() as f64 + tc * g.concurrent() as f64
}

pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Exact probabilities of every graph on `n` vertices, indexed by mask.
pub fn exact_law(n: usize, te: f64, tc: f64) -> Vec<f64> {
    let lw: Vec<f64> = all_graphs(n).map(|(_, g)| log_weight(&g, te, tc)).collect();
    let lz = log_sum_exp(&lw);
    lw.iter().map(|x| (x - lz).exp()).collect()
}

/// Dense vertices (degree >= 2) keep at least two dense neighbours.
pub fn in_family(g: &Small) -> bool {
    (0..g.n).filter(|&v| g.degree(v) >= 2).all(|v| {
        (0..g.n)
            .filter(|&u| g.adj[v][u] && g.degree(u) >= 2)
            .count()
            >= 2
    })
}

pub fn theta_grid() -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for a in 0..5 {
        for b in 0..5 {
            out.push((-(a as f64), -1.5 * b as f64));
        }
    }
    out
}

/// Brute-force counts on `n` labeled vertices, indexed by edge count:
/// matchings, minimum-degree-2 graphs, and for each `n_s` the placements
/// where vertices `0..n_s` have degree <= 1 and every edge touches one.
pub struct OracleCounts {
    pub matchings: Vec<u64>,
    pub min_degree_two: Vec<u64>,
    pub interface: Vec<Vec<u64>>,
}

pub fn oracle_counts(n: usize) -> OracleCounts {
    let d = n * n.saturating_sub(1) / 2;
    let mut out = OracleCounts {
        matchings: vec![0; d + 1],
        min_degree_two: vec![0; d + 1],
        interface: vec![vec![0; d + 1]; n + 1],
    };
    for (_, g) in all_graphs(n) {
        let e = g.edges();
        let deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
        if deg.iter().all(|&x| x <= 1) {
            out.matchings[e] += 1;
        }
        if deg.iter().all(|&x| x >= 2) {
            out.min_degree_two[e] += 1;
        }
        for n_s in 0..=n {
            let sparse_ok = deg[..n_s].iter().all(|&x| x <= 1);
            let touches = g.edge_list().iter().all(|&(i, _)| i < n_s);
            if sparse_ok && touches {
                out.interface[n_s][e] += 1;
            }
        }
    }
    out
}
