use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sampler::{ChainConfig, ProposalKind, SeedDensity};
use crate::error::{Error, Result};
use crate::params::PhysicalParams;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub proposal: ProposalKind,
    pub burn_in: u64,
    pub reps: usize,
    pub seed: u64,
    pub seed_density: SeedDensity,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            proposal: ProposalKind::TieNoTie,
            burn_in: 500_000,
            reps: 250,
            seed: 0,
            seed_density: SeedDensity::Uniform,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderParamPoint {
    pub temperature: f64,
    pub relative: f64,
    pub mean_m: f64,
    pub sd: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub reps: usize,
    /// Each replicate's final `m`, in stream order.
    pub draws: Vec<f64>,
}

/// One draw of `m` per replicate chain, taken right after burn-in, at each
/// `T / T_c` on the grid. Replicate `r` at grid point `g` uses stream
/// `g * reps + r`.
pub fn mean_order_parameter_experiment(
    phi_c: f64,
    n: usize,
    relative_grid: &[f64],
    critical_temperature: f64,
    cfg: &ExperimentConfig,
) -> Result<Vec<OrderParamPoint>> {
    if cfg.reps == 0 || relative_grid.is_empty() {
        return Err(Error::Config("need at least one replicate and one grid point".into()));
    }
    let reps = cfg.reps;
    let jobs: Vec<(usize, usize)> = (0..relative_grid.len())
        .flat_map(|g| (0..reps).map(move |r| (g, r)))
        .collect();
    let draws = jobs
        .par_iter()
        .map(|&(g, r)| {
            let pp = PhysicalParams::new(relative_grid[g] * critical_temperature, phi_c)?;
            let chain = ChainConfig {
                n,
                params: pp.to_model(),
                proposal: cfg.proposal,
                burn_in: cfg.burn_in,
                steps: cfg.burn_in,
                thinning: 1,
                seed: cfg.seed,
                stream: (g * reps + r) as u64,
                seed_density: cfg.seed_density,
            };
            let mut s = chain.seeded_sampler()?;
            s.run(cfg.burn_in);
            Ok(s.graph.order_parameter())
        })
        .collect::<Result<Vec<f64>>>()?;

    Ok(relative_grid
        .iter()
        .zip(draws.chunks(reps))
        .map(|(&rel, d)| {
            let k = d.len() as f64;
            let mean = d.iter().sum::<f64>() / k;
            let sd = if d.len() > 1 {
                (d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt()
            } else {
                0.0
            };
            let half = 1.959_963_984_540_054 * sd / k.sqrt();
            OrderParamPoint {
                temperature: rel * critical_temperature,
                relative: rel,
                mean_m: mean,
                sd,
                ci_lo: mean - half,
                ci_hi: mean + half,
                reps: d.len(),
                draws: d.to_vec(),
            }
        })
        .collect())
}

/// `T / T_c` at which the mean order parameter first drops below one half,
/// scanning upward, by linear interpolation between grid points.
pub fn empirical_flip(points: &[OrderParamPoint]) -> Option<f64> {
    points.windows(2).find_map(|w| {
        let (a, b) = (&w[0], &w[1]);
        (a.mean_m >= 0.5 && b.mean_m < 0.5).then(|| {
            let t = (a.mean_m - 0.5) / (a.mean_m - b.mean_m);
            a.relative + t * (b.relative - a.relative)
        })
    })
}
