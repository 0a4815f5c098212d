use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sampler::{chain_rng, metropolis_step};
use crate::error::{Error, Result};
use crate::graph::{DyadClass, Graph};
use crate::params::ModelParams;

/// One accepted toggle, with the statistics just before it was applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToggleEvent {
    pub step: u64,
    pub i: u32,
    pub j: u32,
    pub formed: bool,
    pub class: DyadClass,
    pub m_before: f64,
    pub t_e_before: u32,
    pub t_c_before: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectorySummary {
    /// Attempt index, which is also the generator stream.
    pub attempt: u64,
    /// Step at which `m` first reached the dense threshold.
    pub steps: u64,
    pub completed: bool,
    /// Every k-th accepted toggle.
    pub events: Vec<ToggleEvent>,
    /// Every accepted toggle, when requested.
    pub full_log: Option<Vec<ToggleEvent>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectoryConfig {
    pub n: usize,
    pub params: ModelParams,
    pub count: usize,
    pub step_cap: u64,
    pub subsample: usize,
    pub dense_threshold: f64,
    /// Abort when completed / attempted falls below this after `floor_after`
    /// attempts.
    pub acceptance_floor: f64,
    pub floor_after: u64,
    pub seed: u64,
    pub keep_full_log: bool,
}

impl TrajectoryConfig {
    pub fn new(n: usize, params: ModelParams, count: usize, step_cap: u64, seed: u64) -> Self {
        Self {
            n,
            params,
            count,
            step_cap,
            subsample: 5,
            dense_threshold: 0.05,
            acceptance_floor: 0.02,
            floor_after: 50,
            seed,
            keep_full_log: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::Config("trajectories need at least three vertices".into()));
        }
        if self.subsample == 0 || self.count == 0 {
            return Err(Error::Config("count and subsample must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.dense_threshold) {
            return Err(Error::Config(format!("dense threshold {} outside [0, 1)", self.dense_threshold)));
        }
        Ok(())
    }
}

/// Runs Metropolis dynamics from the empty graph until `m` drops to the dense
/// threshold or the cap is hit.
pub fn run_trajectory(cfg: &TrajectoryConfig, attempt: u64) -> TrajectorySummary {
    let mut rng = chain_rng(cfg.seed, attempt);
    let mut g = Graph::empty(cfg.n);
    let n = cfg.n as f64;
    let threshold_tc = ((1.0 - cfg.dense_threshold) * n - 1e-9).ceil() as usize;
    let mut events = Vec::new();
    let mut full = cfg.keep_full_log.then(Vec::new);
    let mut accepted = 0usize;
    for step in 1..=cfg.step_cap {
        let before = (g.edge_count() as u32, g.concurrent_count() as u32);
        let out = metropolis_step(&mut g, &cfg.params, &mut rng);
        if !out.accepted {
            continue;
        }
        let ev = ToggleEvent {
            step,
            i: out.i as u32,
            j: out.j as u32,
            formed: out.formation,
            class: out.class,
            m_before: 1.0 - before.1 as f64 / n,
            t_e_before: before.0,
            t_c_before: before.1,
        };
        accepted += 1;
        if accepted % cfg.subsample == 0 {
            events.push(ev);
        }
        if let Some(f) = full.as_mut() {
            f.push(ev);
        }
        if g.concurrent_count() >= threshold_tc {
            return TrajectorySummary {
                attempt,
                steps: step,
                completed: true,
                events,
                full_log: full,
            };
        }
    }
    TrajectorySummary {
        attempt,
        steps: cfg.step_cap,
        completed: false,
        events,
        full_log: full,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrajectorySet {
    pub trajectories: Vec<TrajectorySummary>,
    pub attempts: u64,
}

impl TrajectorySet {
    pub fn completion_rate(&self) -> f64 {
        self.trajectories.len() as f64 / self.attempts as f64
    }
}

/// Collects `count` completed sparse-to-dense trajectories. Attempts that hit
/// the cap are discarded; attempts run in parallel batches but are admitted in
/// attempt order, so the set is independent of the thread count.
pub fn capture_transition_trajectories(cfg: &TrajectoryConfig) -> Result<TrajectorySet> {
    cfg.validate()?;
    let batch = (rayon::current_num_threads() as u64 * 2).max(8);
    let mut kept = Vec::with_capacity(cfg.count);
    let mut attempted = 0u64;
    while kept.len() < cfg.count {
        let results: Vec<TrajectorySummary> = (attempted..attempted + batch)
            .into_par_iter()
            .map(|a| run_trajectory(cfg, a))
            .collect();
        for t in results {
            if kept.len() == cfg.count {
                break;
            }
            attempted += 1;
            if t.completed {
                kept.push(t);
            }
        }
        let rate = kept.len() as f64 / attempted as f64;
        if kept.len() < cfg.count && attempted >= cfg.floor_after && rate < cfg.acceptance_floor {
            return Err(Error::AcceptanceFloor {
                accepted: kept.len(),
                attempted: attempted as usize,
                floor: cfg.acceptance_floor,
            });
        }
    }
    Ok(TrajectorySet {
        trajectories: kept,
        attempts: attempted,
    })
}

/// Replays a full toggle log from the empty graph, checking each recorded
/// pre-toggle statistic and class. Returns the index of the first mismatch.
pub fn replay_mismatch(n: usize, log: &[ToggleEvent]) -> Option<usize> {
    let mut g = Graph::empty(n);
    for (k, ev) in log.iter().enumerate() {
        let (i, j) = (ev.i as usize, ev.j as usize);
        let ok = g.edge_count() as u32 == ev.t_e_before
            && g.concurrent_count() as u32 == ev.t_c_before
            && g.order_parameter() == ev.m_before
            && g.has_edge(i, j) != ev.formed
            && g.classify_unchecked(i, j) == ev.class;
        if !ok {
            return Some(k);
        }
        g.toggle_unchecked(i, j);
    }
    None
}
