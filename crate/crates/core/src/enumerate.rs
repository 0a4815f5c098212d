//! Exhaustive enumeration of small labeled graphs, used as an independent
//! oracle for the counting and partition-function code.

use crate::error::{Error, Result};

/// Largest number of dyads enumerated (`binom(8, 2)`).
pub const MAX_DYADS: usize = 28;
const MAX_ORDER: usize = 8;

/// One enumerated graph: an edge bitmask over the dyads of `K_n` in
/// lexicographic order, with its degree sequence.
#[derive(Debug, Clone)]
pub struct EnumGraph<'a> {
    pub n: usize,
    pub mask: u32,
    dyads: &'a [(u8, u8)],
    degree: [u8; MAX_ORDER],
}

impl<'a> EnumGraph<'a> {
    pub fn edge_count(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degree[v] as usize
    }

    pub fn degrees(&self) -> &[u8] {
        &self.degree[..self.n]
    }

    pub fn concurrent_count(&self) -> usize {
        self.degrees().iter().filter(|&&d| d > 1).count()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.dyads
            .iter()
            .enumerate()
            .filter(|(k, _)| self.mask >> k & 1 == 1)
            .map(|(_, &(i, j))| (i as usize, j as usize))
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.dyads
            .iter()
            .position(|&(x, y)| x as usize == a && y as usize == b)
            .is_some_and(|k| self.mask >> k & 1 == 1)
    }
}

pub fn dyads(n: usize) -> Vec<(u8, u8)> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push((i as u8, j as u8));
        }
    }
    out
}

fn check_size(n: usize) -> Result<Vec<(u8, u8)>> {
    let d = n * n.saturating_sub(1) / 2;
    if n > MAX_ORDER || d > MAX_DYADS {
        return Err(Error::EnumerationTooLarge {
            dyads: d,
            limit: MAX_DYADS,
        });
    }
    Ok(dyads(n))
}

fn visit(n: usize, dyads: &[(u8, u8)], mask: u32, f: &mut impl FnMut(&EnumGraph)) {
    let mut degree = [0u8; MAX_ORDER];
    let mut m = mask;
    while m != 0 {
        let k = m.trailing_zeros() as usize;
        let (i, j) = dyads[k];
        degree[i as usize] += 1;
        degree[j as usize] += 1;
        m &= m - 1;
    }
    f(&EnumGraph { n, mask, dyads, degree });
}

/// Calls `f` on every labeled simple graph of order `n`.
pub fn for_each_graph(n: usize, mut f: impl FnMut(&EnumGraph)) -> Result<()> {
    let dyads = check_size(n)?;
    let total: u64 = 1 << dyads.len();
    for mask in 0..total {
        visit(n, &dyads, mask as u32, &mut f);
    }
    Ok(())
}

/// Calls `f` on every labeled simple graph of order `n` with exactly `e` edges.
pub fn for_each_graph_with_edges(n: usize, e: usize, mut f: impl FnMut(&EnumGraph)) -> Result<()> {
    let dyads = check_size(n)?;
    let d = dyads.len();
    if e > d {
        return Ok(());
    }
    if e == 0 {
        visit(n, &dyads, 0, &mut f);
        return Ok(());
    }
    // Gosper's hack over the d-bit masks with popcount e.
    let limit: u64 = 1 << d;
    let mut mask: u64 = (1 << e) - 1;
    while mask < limit {
        visit(n, &dyads, mask as u32, &mut f);
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
    Ok(())
}

/// Number of labeled graphs of order `n` with `e` edges satisfying `pred`.
pub fn brute_force_count(n: usize, e: usize, pred: impl Fn(&EnumGraph) -> bool) -> Result<u64> {
    let mut count = 0;
    for_each_graph_with_edges(n, e, |g| {
        if pred(g) {
            count += 1;
        }
    })?;
    Ok(count)
}
