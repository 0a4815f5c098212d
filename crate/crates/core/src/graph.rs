//! Simple undirected graphs with incrementally maintained degrees and the
//! model's sufficient statistics `(t_e, t_c)`.

use std::fmt;
use std::io::{self, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ABSENT: u32 = u32::MAX;

/// Degree class of a vertex: isolate (0), pendant (1), concurrent (>= 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Isolate,
    Pendant,
    Concurrent,
}

impl VertexKind {
    #[inline]
    pub fn of_degree(d: u32) -> Self {
        match d {
            0 => VertexKind::Isolate,
            1 => VertexKind::Pendant,
            _ => VertexKind::Concurrent,
        }
    }
}

/// Unordered pair of endpoint kinds, evaluated with the focal edge absent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DyadClass {
    II,
    IC,
    CC,
    PI,
    PC,
    PP,
}

/// Classes sharing a conditional tie probability: no pendant endpoint, one,
/// or two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassGroup {
    #[serde(rename = "II/IC/CC")]
    NoPendant,
    #[serde(rename = "PI/PC")]
    OnePendant,
    #[serde(rename = "PP")]
    TwoPendants,
}

impl DyadClass {
    pub const ALL: [DyadClass; 6] = [
        DyadClass::II,
        DyadClass::IC,
        DyadClass::CC,
        DyadClass::PI,
        DyadClass::PC,
        DyadClass::PP,
    ];

    pub fn from_kinds(a: VertexKind, b: VertexKind) -> Self {
        use VertexKind::*;
        match (a, b) {
            (Isolate, Isolate) => DyadClass::II,
            (Isolate, Concurrent) | (Concurrent, Isolate) => DyadClass::IC,
            (Concurrent, Concurrent) => DyadClass::CC,
            (Pendant, Isolate) | (Isolate, Pendant) => DyadClass::PI,
            (Pendant, Concurrent) | (Concurrent, Pendant) => DyadClass::PC,
            (Pendant, Pendant) => DyadClass::PP,
        }
    }

    pub fn group(self) -> ClassGroup {
        match self {
            DyadClass::II | DyadClass::IC | DyadClass::CC => ClassGroup::NoPendant,
            DyadClass::PI | DyadClass::PC => ClassGroup::OnePendant,
            DyadClass::PP => ClassGroup::TwoPendants,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            DyadClass::II => "I-I",
            DyadClass::IC => "I-C",
            DyadClass::CC => "C-C",
            DyadClass::PI => "P-I",
            DyadClass::PC => "P-C",
            DyadClass::PP => "P-P",
        }
    }
}

impl ClassGroup {
    pub const ALL: [ClassGroup; 3] = [
        ClassGroup::NoPendant,
        ClassGroup::OnePendant,
        ClassGroup::TwoPendants,
    ];

    pub fn pendant_count(self) -> u32 {
        self as u32
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            ClassGroup::NoPendant => "II/IC/CC",
            ClassGroup::OnePendant => "PI/PC",
            ClassGroup::TwoPendants => "PP",
        }
    }
}

impl fmt::Display for DyadClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Full recount of the statistics, independent of the incremental caches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recount {
    pub degree: Vec<u32>,
    pub edges: usize,
    pub concurrent: usize,
}

/// Order-`n` simple undirected graph.
///
/// Edges are kept in a dense list (so a uniformly random edge can be drawn in
/// O(1)) together with an `n x n` slot matrix mapping each present dyad to its
/// position in that list.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    slot: Vec<u32>,
    edges: Vec<(u32, u32)>,
    degree: Vec<u32>,
    concurrent: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("t_e", &self.edges.len())
            .field("t_c", &self.concurrent)
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        assert!(n > 0, "graph order must be positive");
        assert!(n < ABSENT as usize, "graph order too large");
        Self {
            n,
            slot: vec![ABSENT; n * n],
            edges: Vec::new(),
            degree: vec![0; n],
            concurrent: 0,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(i, j) in edges {
            g.check_dyad(i, j)?;
            if !g.has_edge(i, j) {
                g.toggle_unchecked(i, j);
            }
        }
        Ok(g)
    }

    /// Homogeneous Bernoulli graph with tie probability `p`.
    pub fn bernoulli<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Self {
        let mut g = Graph::empty(n);
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.random::<f64>() < p {
                    g.toggle_unchecked(i, j);
                }
            }
        }
        g
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn concurrent_count(&self) -> usize {
        self.concurrent
    }

    #[inline]
    pub fn degree(&self, v: usize) -> u32 {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degree
    }

    /// Edges as `(i, j)` with `i < j`, in internal (insertion-dependent) order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(i, j)| (i as usize, j as usize))
    }

    #[inline]
    pub fn edge_at(&self, k: usize) -> (usize, usize) {
        let (i, j) = self.edges[k];
        (i as usize, j as usize)
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.slot[i * self.n + j] != ABSENT
    }

    /// `1 - t_c / N`: the fraction of vertices with degree at most one.
    pub fn order_parameter(&self) -> f64 {
        1.0 - self.concurrent as f64 / self.n as f64
    }

    pub fn check_dyad(&self, i: usize, j: usize) -> Result<()> {
        for v in [i, j] {
            if v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
        }
        if i == j {
            return Err(Error::SelfLoop(i));
        }
        Ok(())
    }

    /// Flips the `i`-`j` dyad; returns `true` if an edge was formed.
    pub fn toggle_edge(&mut self, i: usize, j: usize) -> Result<bool> {
        self.check_dyad(i, j)?;
        Ok(self.toggle_unchecked(i, j))
    }

    /// As [`toggle_edge`](Self::toggle_edge) without range checks.
    #[inline]
    pub fn toggle_unchecked(&mut self, i: usize, j: usize) -> bool {
        debug_assert!(i != j && i < self.n && j < self.n);
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        let n = self.n;
        let k = self.slot[a * n + b];
        if k == ABSENT {
            let k = self.edges.len() as u32;
            self.edges.push((a as u32, b as u32));
            self.slot[a * n + b] = k;
            self.slot[b * n + a] = k;
            for v in [a, b] {
                self.degree[v] += 1;
                if self.degree[v] == 2 {
                    self.concurrent += 1;
                }
            }
            true
        } else {
            let k = k as usize;
            self.edges.swap_remove(k);
            if k < self.edges.len() {
                let (x, y) = self.edges[k];
                self.slot[x as usize * n + y as usize] = k as u32;
                self.slot[y as usize * n + x as usize] = k as u32;
            }
            self.slot[a * n + b] = ABSENT;
            self.slot[b * n + a] = ABSENT;
            for v in [a, b] {
                if self.degree[v] == 2 {
                    self.concurrent -= 1;
                }
                self.degree[v] -= 1;
            }
            false
        }
    }

    /// Endpoint degrees with the focal edge forced absent.
    #[inline]
    fn degrees_without(&self, i: usize, j: usize) -> (u32, u32) {
        let present = self.has_edge(i, j) as u32;
        (self.degree[i] - present, self.degree[j] - present)
    }

    /// `t(y+) - t(y-)` for the dyad: always one edge, plus one concurrent
    /// vertex for each endpoint that is a pendant in `y-`.
    pub fn change_score(&self, i: usize, j: usize) -> Result<(i64, i64)> {
        self.check_dyad(i, j)?;
        Ok(self.change_score_unchecked(i, j))
    }

    #[inline]
    pub fn change_score_unchecked(&self, i: usize, j: usize) -> (i64, i64) {
        let (di, dj) = self.degrees_without(i, j);
        (1, (di == 1) as i64 + (dj == 1) as i64)
    }

    pub fn classify_dyad(&self, i: usize, j: usize) -> Result<DyadClass> {
        self.check_dyad(i, j)?;
        Ok(self.classify_unchecked(i, j))
    }

    #[inline]
    pub fn classify_unchecked(&self, i: usize, j: usize) -> DyadClass {
        let (di, dj) = self.degrees_without(i, j);
        DyadClass::from_kinds(VertexKind::of_degree(di), VertexKind::of_degree(dj))
    }

    /// Recomputes degrees and statistics from the edge set alone.
    pub fn recount(&self) -> Recount {
        let mut degree = vec![0u32; self.n];
        let mut edges = 0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.slot[i * self.n + j] != ABSENT {
                    degree[i] += 1;
                    degree[j] += 1;
                    edges += 1;
                }
            }
        }
        let concurrent = degree.iter().filter(|&&d| d > 1).count();
        Recount {
            degree,
            edges,
            concurrent,
        }
    }

    /// True when every cache agrees with a full recount and the slot matrix is
    /// symmetric and consistent with the edge list.
    pub fn caches_consistent(&self) -> bool {
        let r = self.recount();
        if r.degree != self.degree || r.edges != self.edges.len() || r.concurrent != self.concurrent {
            return false;
        }
        for i in 0..self.n {
            if self.slot[i * self.n + i] != ABSENT {
                return false;
            }
            for j in 0..self.n {
                if self.slot[i * self.n + j] != self.slot[j * self.n + i] {
                    return false;
                }
            }
        }
        self.edges.iter().enumerate().all(|(k, &(a, b))| {
            a < b && self.slot[a as usize * self.n + b as usize] == k as u32
        })
    }

    /// Edge-list text: a header line `N <n>` then one `i j` line per edge,
    /// zero-indexed with `i < j`, sorted.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "N {}", self.n)?;
        let mut edges: Vec<_> = self.edges().collect();
        edges.sort_unstable();
        for (i, j) in edges {
            writeln!(w, "{i} {j}")?;
        }
        Ok(())
    }

    pub fn to_edge_list(&self) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("edge list is ASCII")
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hl, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing `N <n>` header".into(),
        })?;
        let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["N", n] => n.parse::<usize>().ok().filter(|&n| n > 0),
            _ => None,
        }
        .ok_or_else(|| Error::Parse {
            line: hl,
            msg: format!("expected `N <n>` with n > 0, got `{header}`"),
        })?;

        let mut g = Graph::empty(n);
        for (line, l) in lines {
            let bad = |msg: String| Error::Parse { line, msg };
            let mut it = l.split_whitespace();
            let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
                return Err(bad(format!("expected `i j`, got `{l}`")));
            };
            let i: usize = a.parse().map_err(|_| bad(format!("bad vertex `{a}`")))?;
            let j: usize = b.parse().map_err(|_| bad(format!("bad vertex `{b}`")))?;
            if i >= j {
                return Err(bad(format!("pair must satisfy i < j, got {i} {j}")));
            }
            if j >= n {
                return Err(bad(format!("vertex {j} out of range for N = {n}")));
            }
            if g.has_edge(i, j) {
                return Err(bad(format!("duplicate edge {i} {j}")));
            }
            g.toggle_unchecked(i, j);
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn order_parameter_examples() {
        assert_eq!(Graph::empty(5).order_parameter(), 1.0);
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(tri.order_parameter(), 0.0);
        assert!((path3().order_parameter() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn toggle_examples() {
        let mut g = Graph::empty(3);
        assert!(g.toggle_edge(0, 1).unwrap());
        assert_eq!((g.edge_count(), g.concurrent_count()), (1, 0));
        g.toggle_edge(1, 2).unwrap();
        assert_eq!((g.edge_count(), g.concurrent_count()), (2, 1));
        assert!(!g.toggle_edge(2, 1).unwrap());
        assert_eq!((g.edge_count(), g.concurrent_count()), (1, 0));
        assert!(g.caches_consistent());
    }

    #[test]
    fn toggle_errors() {
        let mut g = Graph::empty(3);
        assert!(matches!(g.toggle_edge(1, 1), Err(Error::SelfLoop(1))));
        assert!(matches!(g.toggle_edge(0, 3), Err(Error::VertexOutOfRange { vertex: 3, n: 3 })));
        assert!(g.change_score(2, 2).is_err());
        assert!(g.classify_dyad(0, 0).is_err());
    }

    #[test]
    fn change_score_examples() {
        let g = Graph::empty(4);
        assert_eq!(g.change_score(0, 1).unwrap(), (1, 0));

        // two disjoint pendant pairs: 0-1, 2-3; dyad 1-2 joins two pendants
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.change_score(1, 2).unwrap(), (1, 2));

        // 0 pendant (attached to 3), 1 concurrent (attached to 2 and 3)
        let g = Graph::from_edges(4, &[(0, 3), (1, 2), (1, 3)]).unwrap();
        let (de, dc) = g.change_score(0, 1).unwrap();
        let mut plus = g.clone();
        plus.toggle_edge(0, 1).unwrap();
        assert_eq!(de, (plus.edge_count() - g.edge_count()) as i64);
        assert_eq!(dc, plus.concurrent_count() as i64 - g.concurrent_count() as i64);
        assert_eq!((de, dc), (1, 1));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(Graph::empty(4).classify_dyad(0, 3).unwrap(), DyadClass::II);
        let p = path3();
        assert_eq!(p.classify_dyad(0, 2).unwrap(), DyadClass::PP);
        // focal edge 0-1 removed: 0 becomes isolate, 1 pendant
        assert_eq!(p.classify_dyad(0, 1).unwrap(), DyadClass::PI);
        assert_eq!(p.classify_dyad(1, 0).unwrap(), DyadClass::PI);
        assert_eq!(DyadClass::PI.group(), ClassGroup::OnePendant);
    }

    #[test]
    fn class_is_order_insensitive() {
        use VertexKind::*;
        for a in [Isolate, Pendant, Concurrent] {
            for b in [Isolate, Pendant, Concurrent] {
                assert_eq!(DyadClass::from_kinds(a, b), DyadClass::from_kinds(b, a));
            }
        }
    }

    #[test]
    fn edge_list_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = Graph::bernoulli(9, 0.3, &mut rng);
        let text = g.to_edge_list();
        assert!(text.starts_with("N 9\n"));
        let h = Graph::parse_edge_list(&text).unwrap();
        assert_eq!(g.recount(), h.recount());
        for i in 0..9 {
            for j in 0..9 {
                assert_eq!(g.has_edge(i, j), h.has_edge(i, j));
            }
        }
    }

    #[test]
    fn edge_list_rejects_malformed() {
        assert!(Graph::parse_edge_list("").is_err());
        assert!(Graph::parse_edge_list("N 0\n").is_err());
        assert!(Graph::parse_edge_list("N 3\n1 0\n").is_err());
        assert!(Graph::parse_edge_list("N 3\n0 3\n").is_err());
        assert!(Graph::parse_edge_list("N 3\n0 1\n0 1\n").is_err());
        assert!(Graph::parse_edge_list("N 3\n0 1 2\n").is_err());
        let g = Graph::parse_edge_list("# comment\nN 3\n\n0 2\n").unwrap();
        assert!(g.has_edge(2, 0));
    }
}
