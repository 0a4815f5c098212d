//! Oracle suites behind the `verify` command: the production counting and
//! partition code checked against exhaustive enumeration on small graphs.

use std::path::PathBuf;

use serde::Serialize;

use crate::enumerate::{brute_force_count, for_each_graph, EnumGraph};
use crate::error::{Error, Result};
use crate::lognum::{LogAccumulator, LogNumber};
use crate::multiplicity::{min_degree_two_count, pairs, sparse_interface_count, sparse_matchings, MultiplicityTable};
use crate::params::ModelParams;
use crate::partition::{exact_log_partition, stratum_log_partition, MAX_EXACT_ORDER};

#[derive(Debug, Clone, Serialize)]
pub struct VerifyConfig {
    /// Largest graph order for the partition suites (at most 6).
    pub max_n: usize,
    /// A table cache file to check, keyed by the order in its name.
    pub cache: Option<(usize, PathBuf)>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            max_n: MAX_EXACT_ORDER,
            cache: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    pub max_deviation: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }
}

struct Suite {
    name: &'static str,
    checks: usize,
    max_dev: f64,
    failures: Vec<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checks: 0,
            max_dev: 0.0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, dev: f64, what: impl FnOnce() -> String) {
        self.checks += 1;
        if dev.is_finite() {
            self.max_dev = self.max_dev.max(dev);
        }
        if !ok && self.failures.len() < 5 {
            self.failures.push(what());
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name.to_string(),
            passed: self.failures.is_empty(),
            checks: self.checks,
            max_deviation: self.max_dev,
            detail: self.failures.join("; "),
        }
    }
}

fn log_matches(got: LogNumber, want: u64, tol: f64) -> (bool, f64) {
    if want == 0 {
        return (got.is_zero(), if got.is_zero() { 0.0 } else { f64::INFINITY });
    }
    let dev = (got.ln() - (want as f64).ln()).abs();
    (dev <= tol, dev)
}

fn max_degree_one(g: &EnumGraph) -> bool {
    g.degrees().iter().all(|&d| d <= 1)
}

fn min_degree_two(g: &EnumGraph) -> bool {
    g.degrees().iter().all(|&d| d >= 2)
}

/// Sparse vertices `0..n_s` have degree <= 1 and every edge touches one.
fn sparse_interface_placement(g: &EnumGraph, n_s: usize) -> bool {
    (0..n_s).all(|v| g.degree(v) <= 1) && g.edges().all(|(i, _)| i < n_s)
}

/// Dense vertices (degree >= 2) have at least two neighbours among
/// themselves: the graphs the stratum approximation counts.
pub fn in_constructed_family(g: &EnumGraph) -> bool {
    let dense = |v: usize| g.degree(v) >= 2;
    (0..g.n).filter(|&v| dense(v)).all(|v| (0..g.n).filter(|&u| u != v && dense(u) && g.has_edge(u, v)).count() >= 2)
}

fn multiplicity_suite(max_n: usize) -> Result<SuiteResult> {
    let mut s = Suite::new("multiplicity-oracle");
    for n in 0..=max_n {
        for e in 0..=pairs(n) {
            let want = brute_force_count(n, e, max_degree_one)?;
            let (ok, dev) = log_matches(sparse_matchings(e, n), want, 1e-9);
            s.check(ok, dev, || format!("matchings E={e} n={n}"));
            let want = brute_force_count(n, e, min_degree_two)?;
            let (ok, dev) = log_matches(min_degree_two_count(e, n), want, 1e-9);
            s.check(ok, dev, || format!("min-degree-2 E={e} n={n}"));
            for n_s in 0..=n {
                let want = brute_force_count(n, e, |g| sparse_interface_placement(g, n_s))?;
                let (ok, dev) = log_matches(sparse_interface_count(e, n_s, n - n_s), want, 1e-9);
                s.check(ok, dev, || format!("interface E={e} n_s={n_s} n_d={}", n - n_s));
            }
        }
    }
    Ok(s.finish())
}

fn theta_grid() -> Vec<ModelParams> {
    let mut out = Vec::with_capacity(25);
    for a in 0..5 {
        for b in 0..5 {
            out.push(ModelParams::new(-4.0 * a as f64 / 4.0, -6.0 * b as f64 / 4.0));
        }
    }
    out
}

fn partition_suite(max_n: usize) -> Result<SuiteResult> {
    let mut s = Suite::new("partition-undercount");
    for n in 1..=max_n {
        let t = MultiplicityTable::build(n);
        for p in theta_grid() {
            let exact = exact_log_partition(&p, n)?;
            let mut approx_total = LogAccumulator::new();
            for n_s in 0..=n {
                let a = stratum_log_partition(&p, n, n_s, &t)?.log_z;
                approx_total.push(a);
                let x = exact.by_concurrent[n - n_s];
                let slack = 1e-9 * x.ln().abs().max(1.0);
                s.check(a.is_zero() || a.ln() <= x.ln() + slack, 0.0, || {
                    format!("N={n} n_s={n_s} theta={p:?} approx exceeds exact")
                });
                if n_s == n {
                    let dev = (a.ln() - x.ln()).abs();
                    s.check(dev <= 1e-9, dev, || format!("N={n} t_c=0 theta={p:?} off by {dev}"));
                }
            }
            let a = approx_total.total().ln();
            s.check(a <= exact.total.ln() + 1e-9 * a.abs().max(1.0), 0.0, || {
                format!("N={n} theta={p:?} total exceeds exact")
            });
        }
    }
    Ok(s.finish())
}

/// Approximate strata against direct sums over the family of graphs the
/// approximation counts: log Z and entropy `-sum p log p`.
fn family_suite(max_n: usize) -> Result<SuiteResult> {
    let mut s = Suite::new("constructed-family");
    for n in 1..=max_n {
        let t = MultiplicityTable::build(n);
        for p in theta_grid() {
            // per t_c: log-weights of member graphs
            let mut weights: Vec<Vec<f64>> = vec![Vec::new(); n + 1];
            for_each_graph(n, |g| {
                if in_constructed_family(g) {
                    let tc = g.concurrent_count();
                    weights[tc].push(p.dot(g.edge_count() as i64, tc as i64));
                }
            })?;
            for n_s in 0..=n {
                let w = &weights[n - n_s];
                let r = stratum_log_partition(&p, n, n_s, &t)?;
                if w.is_empty() {
                    s.check(r.log_z.is_zero(), 0.0, || format!("N={n} n_s={n_s} should be empty"));
                    continue;
                }
                let mut acc = LogAccumulator::new();
                for &x in w {
                    acc.push_ln(x);
                }
                let lz = acc.total().ln();
                let dev = (r.log_z.ln() - lz).abs();
                s.check(dev <= 1e-9, dev, || format!("N={n} n_s={n_s} theta={p:?} log Z off by {dev}"));
                let direct: f64 = w.iter().map(|&x| -(x - lz).exp() * (x - lz)).sum();
                let via = r.entropy(&p).unwrap_or(f64::NAN);
                let dev = (direct - via).abs();
                s.check(dev <= 1e-9, dev, || format!("N={n} n_s={n_s} theta={p:?} entropy off by {dev}"));
            }
        }
    }
    Ok(s.finish())
}

fn cache_suite(n: usize, path: &PathBuf) -> SuiteResult {
    let mut s = Suite::new("table-cache");
    let res = std::fs::File::open(path)
        .map_err(Error::from)
        .and_then(|f| MultiplicityTable::read_cache(std::io::BufReader::new(f), n));
    let msg = res.as_ref().err().map(|e| e.to_string());
    s.check(res.is_ok(), 0.0, || format!("{}: {}", path.display(), msg.unwrap_or_default()));
    s.finish()
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.max_n > MAX_EXACT_ORDER {
        return Err(Error::EnumerationTooLarge {
            dyads: pairs(cfg.max_n),
            limit: pairs(MAX_EXACT_ORDER),
        });
    }
    let mut suites = vec![
        multiplicity_suite(cfg.max_n.max(1) + 1)?,
        partition_suite(cfg.max_n)?,
        family_suite(cfg.max_n.min(5))?,
    ];
    if let Some((n, path)) = &cfg.cache {
        suites.push(cache_suite(*n, path));
    }
    Ok(VerifyReport { suites })
}
