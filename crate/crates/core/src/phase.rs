//! Free-energy landscapes over the order parameter and the phase structure
//! read off them: local minima, the critical temperature above which only the
//! dense phase is locally stable, the lower edge of coexistence, and the
//! temperature at which the stable branch flips.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::multiplicity::MultiplicityTable;
use crate::params::PhysicalParams;
use crate::partition::{entropy_of, free_energy_of, stratum_log_partition};

/// Conditional free energy `F(T | M)` and entropy `S(T | M)` on the grid
/// `M = n_s / N`, `n_s = 0..=N`. Zero-mass strata have `F = +inf`, `S = NaN`.
#[derive(Debug, Clone, Serialize)]
pub struct FreeEnergyCurve {
    pub temperature: f64,
    pub phi_c: f64,
    pub n: usize,
    pub m: Vec<f64>,
    pub f: Vec<f64>,
    pub s: Vec<f64>,
}

/// A local minimum of a free-energy curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Minimum {
    pub n_s: usize,
    pub m: f64,
    pub f: f64,
}

/// Which side of the order-parameter axis a minimum sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Dense,
    Sparse,
}

impl Minimum {
    pub fn branch(&self) -> Branch {
        if self.m < 0.5 {
            Branch::Dense
        } else {
            Branch::Sparse
        }
    }
}

pub fn free_energy_curve(pp: &PhysicalParams, n: usize, tables: &MultiplicityTable) -> Result<FreeEnergyCurve> {
    tables.check_order(n)?;
    let p = pp.to_model();
    let strata = (0..=n)
        .map(|n_s| stratum_log_partition(&p, n, n_s, tables))
        .collect::<Result<Vec<_>>>()?;
    Ok(FreeEnergyCurve {
        temperature: pp.temperature,
        phi_c: pp.phi_c,
        n,
        m: (0..=n).map(|k| k as f64 / n as f64).collect(),
        f: strata.iter().map(|s| free_energy_of(pp, s)).collect(),
        s: strata.iter().map(|s| entropy_of(pp, s)).collect(),
    })
}

impl FreeEnergyCurve {
    pub fn local_minima(&self) -> Result<Vec<Minimum>> {
        local_minima(self)
    }

    pub fn global_minimum(&self) -> Result<Minimum> {
        Ok(self.local_minima()?[0])
    }

    /// Maximum of `F` over finite grid points strictly between two indices.
    pub fn barrier_between(&self, a: usize, b: usize) -> Option<f64> {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.f[lo + 1..hi]
            .iter()
            .copied()
            .filter(|x| x.is_finite())
            .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))))
    }
}

/// Discrete local minima over the finite points of the curve, sorted by `F`
/// ascending (first = stable, rest metastable).
///
/// Infinite points are skipped: each finite point is compared with the
/// nearest finite point on either side, and endpoints (of the grid or of the
/// finite support) compare one-sidedly. Runs of equal values form a plateau
/// that counts once, at its lowest index.
pub fn local_minima(curve: &FreeEnergyCurve) -> Result<Vec<Minimum>> {
    let finite: Vec<(usize, f64)> = curve
        .f
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, f)| f.is_finite())
        .collect();
    if finite.is_empty() {
        return Err(Error::AllInfinite);
    }
    // plateau runs: (first index into `finite`, value)
    let mut runs: Vec<(usize, f64)> = Vec::new();
    for (k, &(_, f)) in finite.iter().enumerate() {
        if runs.last().is_none_or(|&(_, v)| v != f) {
            runs.push((k, f));
        }
    }
    let mut out: Vec<Minimum> = runs
        .iter()
        .enumerate()
        .filter(|&(r, &(_, f))| {
            let left_ok = r == 0 || runs[r - 1].1 > f;
            let right_ok = r + 1 == runs.len() || runs[r + 1].1 > f;
            left_ok && right_ok
        })
        .map(|(_, &(k, f))| {
            let n_s = finite[k].0;
            Minimum { n_s, m: curve.m[n_s], f }
        })
        .collect();
    out.sort_by(|a, b| a.f.total_cmp(&b.f).then(a.n_s.cmp(&b.n_s)));
    Ok(out)
}

/// Local minima of the curve at one temperature, stable first.
pub fn minima_at(temperature: f64, phi_c: f64, n: usize, tables: &MultiplicityTable) -> Result<Vec<Minimum>> {
    free_energy_curve(&PhysicalParams::new(temperature, phi_c)?, n, tables)?.local_minima()
}

fn coexists(temperature: f64, phi_c: f64, n: usize, tables: &MultiplicityTable) -> Result<bool> {
    Ok(minima_at(temperature, phi_c, n, tables)?.len() >= 2)
}

/// Search settings for [`critical_temperature`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CriticalSearch {
    /// Initial bracket, in edge-temperature units.
    pub lo: f64,
    pub hi: f64,
    /// Absolute tolerance on the returned temperature.
    pub tol: f64,
    /// Ratio between successive temperatures of the downward geometric scan.
    pub scan_ratio: f64,
    /// Doublings of `hi` allowed while coexistence persists at the top.
    pub max_expansions: usize,
}

impl Default for CriticalSearch {
    fn default() -> Self {
        Self {
            lo: 0.05,
            hi: 5.0,
            tol: 1e-3,
            scan_ratio: 1.02,
            max_expansions: 6,
        }
    }
}

/// Supremum temperature at which the free-energy curve has two or more local
/// minima.
///
/// Coexistence holds only on a window of temperatures, so the bracket is
/// found by a downward geometric scan from `hi` (doubling `hi` first if it
/// still coexists) and then refined by bisection.
pub fn critical_temperature(
    phi_c: f64,
    n: usize,
    tables: &MultiplicityTable,
    search: &CriticalSearch,
) -> Result<f64> {
    tables.check_order(n)?;
    let mut hi = search.hi;
    let mut expansions = 0;
    while coexists(hi, phi_c, n, tables)? {
        if expansions == search.max_expansions {
            return Err(Error::NoTransition { lo: search.lo, hi });
        }
        hi *= 2.0;
        expansions += 1;
    }
    let mut above = hi;
    let mut t = hi / search.scan_ratio;
    let below = loop {
        if t < search.lo {
            return Err(Error::NoTransition { lo: search.lo, hi });
        }
        if coexists(t, phi_c, n, tables)? {
            break t;
        }
        above = t;
        t /= search.scan_ratio;
    };
    let (mut a, mut b) = (below, above);
    while b - a > search.tol {
        let mid = 0.5 * (a + b);
        if coexists(mid, phi_c, n, tables)? {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Temperature in `[lo, hi]` at which the stable minimum switches between the
/// sparse branch (below) and the dense branch (above), by bisection.
pub fn stability_flip_temperature(
    phi_c: f64,
    n: usize,
    tables: &MultiplicityTable,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<Option<f64>> {
    let branch = |t: f64| -> Result<Branch> { Ok(minima_at(t, phi_c, n, tables)?[0].branch()) };
    let (mut a, mut b) = (lo, hi);
    if branch(a)? != Branch::Sparse || branch(b)? != Branch::Dense {
        return Ok(None);
    }
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if branch(mid)? == Branch::Sparse {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(Some(0.5 * (a + b)))
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagramRow {
    pub temperature: f64,
    pub relative: f64,
    /// Sorted by `F`: stable first.
    pub minima: Vec<Minimum>,
}

impl DiagramRow {
    pub fn stable(&self) -> &Minimum {
        &self.minima[0]
    }

    pub fn metastable(&self) -> Option<&Minimum> {
        self.minima.get(1)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseDiagram {
    pub phi_c: f64,
    pub n: usize,
    pub critical_temperature: f64,
    /// Rows in ascending `T / T_c`.
    pub rows: Vec<DiagramRow>,
    /// Least `T / T_c` on the grid with two or more minima.
    pub coexistence_lower: Option<f64>,
    /// Adjacent grid values of `T / T_c` between which the stable minimum
    /// moves from the sparse branch (below) to the dense branch (above),
    /// taking the highest such change.
    pub flip_interval: Option<(f64, f64)>,
}

pub fn phase_diagram(
    phi_c: f64,
    n: usize,
    relative_grid: &[f64],
    tables: &MultiplicityTable,
    critical_temperature: f64,
) -> Result<PhaseDiagram> {
    tables.check_order(n)?;
    let mut grid = relative_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let rows = grid
        .par_iter()
        .map(|&r| {
            let t = r * critical_temperature;
            Ok(DiagramRow {
                temperature: t,
                relative: r,
                minima: minima_at(t, phi_c, n, tables)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let coexistence_lower = rows.iter().find(|r| r.minima.len() >= 2).map(|r| r.relative);
    let flip_interval = rows
        .windows(2)
        .rev()
        .find(|w| w[0].stable().branch() == Branch::Sparse && w[1].stable().branch() == Branch::Dense)
        .map(|w| (w[0].relative, w[1].relative));

    Ok(PhaseDiagram {
        phi_c,
        n,
        critical_temperature,
        rows,
        coexistence_lower,
        flip_interval,
    })
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64)
            .collect(),
    }
}
