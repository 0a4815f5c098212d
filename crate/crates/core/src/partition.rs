//! Stratified approximation of the partition function.
//!
//! A stratum fixes the number `n_s` of sparse-phase (degree <= 1) vertices,
//! and with it the order parameter `m = n_s / N` and `t_c = N - n_s`. Within a
//! stratum the graphs counted are those whose dense vertices reach degree two
//! using dense–dense edges alone, with sparse vertices attached by matchings
//! or cut edges:
//!
//! `Z(n_s) = binom(N, n_s) e^{theta_c (N - n_s)}
//!           sum_{E_s} sum_{E_d} e^{theta_e (E_s + E_d)} C_si(E_s, n_s) C_d(E_d, N - n_s)`.
//!
//! Every counted graph is a distinct graph with exactly `N - n_s` concurrent
//! vertices, so each stratum is a lower bound on the exact conditional
//! partition function. Graphs whose dense vertices rely on cut edges for their
//! degree are omitted; in particular strata with one or two dense vertices
//! receive zero mass. The all-sparse stratum is exact.

use rayon::prelude::*;
use serde::Serialize;
use statrs::function::factorial::ln_binomial;

use crate::enumerate;
use crate::error::{Error, Result};
use crate::lognum::{LogAccumulator, LogNumber};
use crate::multiplicity::{pairs, MultiplicityTable};
use crate::params::{ModelParams, PhysicalParams};

/// Largest order accepted by [`exact_log_partition`].
pub const MAX_EXACT_ORDER: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StratumResult {
    pub n_s: usize,
    /// Concurrent-vertex count of every graph in the stratum, `N - n_s`.
    pub t_c: usize,
    pub log_z: LogNumber,
    /// Conditional mean edge count; NaN for zero-mass strata.
    pub mean_edges: f64,
}

impl StratumResult {
    pub fn is_populated(&self) -> bool {
        !self.log_z.is_zero()
    }

    /// Conditional mean of `phi . t` in edge units.
    pub fn mean_energy(&self, phi_c: f64) -> f64 {
        self.mean_edges + phi_c * self.t_c as f64
    }

    /// Shannon entropy (nats) of the conditional distribution over the
    /// stratum's graphs: `log Z - theta . <t>`.
    pub fn entropy(&self, p: &ModelParams) -> Option<f64> {
        self.is_populated()
            .then(|| self.log_z.ln() - p.theta_e * self.mean_edges - p.theta_c * self.t_c as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionResult {
    pub n: usize,
    pub params: ModelParams,
    pub strata: Vec<StratumResult>,
    pub log_z: LogNumber,
}

struct Moments {
    mass: LogNumber,
    mean: f64,
}

/// `sum_E c[E] e^{theta_e E}` over `E in range` and the corresponding mean of `E`.
fn weighted_moments(counts: &[LogNumber], range: std::ops::RangeInclusive<usize>, theta_e: f64) -> Moments {
    let mut mass = LogAccumulator::new();
    let mut first = LogAccumulator::new();
    for e in range {
        let c = counts[e];
        if c.is_zero() {
            continue;
        }
        let w = c.ln() + theta_e * e as f64;
        mass.push_ln(w);
        if e > 0 {
            first.push_ln(w + (e as f64).ln());
        }
    }
    let mass = mass.total();
    let mean = if mass.is_zero() {
        f64::NAN
    } else {
        first.total().ln_ratio(mass).exp()
    };
    Moments { mass, mean }
}

/// Conditional partition mass and mean edge count of the `n_s` stratum.
///
/// The double sum over `(E_s, E_d)` factorizes into a sparse/interface sum
/// times a dense sum, which is how it is evaluated.
pub fn stratum_log_partition(
    p: &ModelParams,
    n: usize,
    n_s: usize,
    tables: &MultiplicityTable,
) -> Result<StratumResult> {
    tables.check_order(n)?;
    if n_s > n {
        return Err(Error::StratumOutOfRange { n_s, n });
    }
    let n_d = n - n_s;
    let sparse = weighted_moments(tables.sparse_row(n_s), 0..=n_s, p.theta_e);
    // E_d runs from N - n_s up to binom(N - n_s, 2); empty for n_d in {1, 2}.
    let dense_range = n_d..=pairs(n_d);
    let dense = if dense_range.is_empty() {
        Moments {
            mass: LogNumber::ZERO,
            mean: f64::NAN,
        }
    } else {
        weighted_moments(tables.dense_column(n_d), dense_range, p.theta_e)
    };
    let log_z = (sparse.mass * dense.mass).scale_exp(ln_binomial(n as u64, n_s as u64) + p.theta_c * n_d as f64);
    let mean_edges = if log_z.is_zero() {
        f64::NAN
    } else {
        sparse.mean + dense.mean
    };
    Ok(StratumResult {
        n_s,
        t_c: n_d,
        log_z,
        mean_edges,
    })
}

/// All strata plus their total. Strata are computed in parallel and summed in
/// a fixed order, so results do not depend on the thread count.
pub fn log_partition(p: &ModelParams, n: usize, tables: &MultiplicityTable) -> Result<PartitionResult> {
    tables.check_order(n)?;
    let strata = (0..=n)
        .into_par_iter()
        .map(|n_s| stratum_log_partition(p, n, n_s, tables))
        .collect::<Result<Vec<_>>>()?;
    let log_z = strata.iter().map(|s| s.log_z).sum();
    Ok(PartitionResult {
        n,
        params: *p,
        strata,
        log_z,
    })
}

/// Maps an order-parameter value onto its stratum index `n_s = m N`.
pub fn grid_index(m: f64, n: usize) -> Result<usize> {
    let x = m * n as f64;
    let k = x.round();
    if !(0.0..=n as f64).contains(&k) || (x - k).abs() > 1e-9 * (n as f64).max(1.0) {
        return Err(Error::OffGrid { m, n });
    }
    Ok(k as usize)
}

/// `F(T | M) = -T log Z(T, phi | M)` in edge units; `+inf` for zero-mass strata.
pub fn conditional_free_energy(pp: &PhysicalParams, n: usize, m: f64, tables: &MultiplicityTable) -> Result<f64> {
    let s = stratum_log_partition(&pp.to_model(), n, grid_index(m, n)?, tables)?;
    Ok(free_energy_of(pp, &s))
}

pub(crate) fn free_energy_of(pp: &PhysicalParams, s: &StratumResult) -> f64 {
    if s.is_populated() {
        -pp.temperature * s.log_z.ln()
    } else {
        f64::INFINITY
    }
}

/// `S = (U - F) / T` in nats, with `U` the conditional mean energy.
pub fn conditional_entropy(pp: &PhysicalParams, n: usize, m: f64, tables: &MultiplicityTable) -> Result<f64> {
    let n_s = grid_index(m, n)?;
    let s = stratum_log_partition(&pp.to_model(), n, n_s, tables)?;
    if !s.is_populated() {
        return Err(Error::ZeroMassStratum(n_s));
    }
    Ok(entropy_of(pp, &s))
}

pub(crate) fn entropy_of(pp: &PhysicalParams, s: &StratumResult) -> f64 {
    if !s.is_populated() {
        return f64::NAN;
    }
    (s.mean_energy(pp.phi_c) - free_energy_of(pp, s)) / pp.temperature
}

/// Exact normalizer by exhaustive enumeration, with per-`t_c` strata.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactPartition {
    pub total: LogNumber,
    /// Indexed by `t_c` in `0..=N`.
    pub by_concurrent: Vec<LogNumber>,
}

pub fn exact_log_partition(p: &ModelParams, n: usize) -> Result<ExactPartition> {
    if n > MAX_EXACT_ORDER {
        return Err(Error::EnumerationTooLarge {
            dyads: pairs(n),
            limit: pairs(MAX_EXACT_ORDER),
        });
    }
    let mut acc = vec![LogAccumulator::new(); n + 1];
    enumerate::for_each_graph(n, |g| {
        let tc = g.concurrent_count();
        acc[tc].push_ln(p.dot(g.edge_count() as i64, tc as i64));
    })?;
    let by_concurrent: Vec<LogNumber> = acc.iter().map(|a| a.total()).collect();
    Ok(ExactPartition {
        total: by_concurrent.iter().copied().sum(),
        by_concurrent,
    })
}
