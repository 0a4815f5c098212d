//! The commands behind the `ecvm` binary, as library functions that take a
//! config and an output directory and write figure-ready files.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mcmc::{
    capture_transition_trajectories, mean_order_parameter_experiment, tabulate_event_rates, EventSelector,
    ExperimentConfig, TrajectoryConfig, TrajectorySet,
};
use crate::multiplicity::MultiplicityTable;
use crate::output::{fmt_f64, fmt_opt, write_json, CsvWriter, RunMeta};
use crate::params::{ModelParams, PhysicalParams};
use crate::phase::{
    critical_temperature, free_energy_curve, phase_diagram, stability_flip_temperature, CriticalSearch,
};
use crate::verify::{run_verify, VerifyConfig, VerifyReport};
use crate::{ClassGroup, DyadClass};

/// Environment variable naming the multiplicity-table cache directory.
pub const CACHE_ENV: &str = "ECVM_CACHE_DIR";

/// Model parameters as given on the command line, in either form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParamSpec {
    Theta(ModelParams),
    Physical(PhysicalParams),
}

impl ParamSpec {
    pub fn model(&self) -> ModelParams {
        match self {
            ParamSpec::Theta(p) => *p,
            ParamSpec::Physical(pp) => pp.to_model(),
        }
    }

    pub fn physical(&self) -> Result<PhysicalParams> {
        match self {
            ParamSpec::Theta(p) => p.to_physical(),
            ParamSpec::Physical(pp) => Ok(*pp),
        }
    }
}

pub fn cache_dir_from_env() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).map(PathBuf::from)
}

fn tables(n: usize, cache: Option<&Path>) -> Result<MultiplicityTable> {
    MultiplicityTable::load_or_build(n, cache)
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub theta_e: f64,
    pub theta_c: f64,
    pub lower: f64,
    pub upper: f64,
    pub ratio: f64,
}

pub fn cmd_bounds(params: &ParamSpec) -> BoundsReport {
    let p = params.model();
    let (lower, upper) = p.bernoulli_bounds();
    BoundsReport {
        theta_e: p.theta_e,
        theta_c: p.theta_c,
        lower,
        upper,
        ratio: lower / upper,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FreeEnergyConfig {
    pub n: usize,
    /// One curve per entry.
    pub params: Vec<PhysicalParams>,
}

/// Writes `curve.csv` with columns `T, phi_c, m, F, S, finite`.
pub fn cmd_free_energy(cfg: &FreeEnergyConfig, out_dir: &Path, cache: Option<&Path>) -> Result<PathBuf> {
    if cfg.params.is_empty() {
        return Err(Error::Config("no temperatures requested".into()));
    }
    let t = tables(cfg.n, cache)?;
    let meta = RunMeta::new("free-energy", None, cfg)?;
    let path = out_dir.join("curve.csv");
    let mut w = CsvWriter::create(&path, &meta, &["T", "phi_c", "m", "F", "S", "finite"])?;
    for pp in &cfg.params {
        let c = free_energy_curve(pp, cfg.n, &t)?;
        for k in 0..=cfg.n {
            w.row([
                fmt_f64(c.temperature),
                fmt_f64(c.phi_c),
                fmt_f64(c.m[k]),
                fmt_f64(c.f[k]),
                fmt_f64(c.s[k]),
                (c.f[k].is_finite() as u8).to_string(),
            ])?;
        }
    }
    w.finish()?;
    Ok(path)
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseConfig {
    pub n: usize,
    pub phi_c: f64,
    /// A temperature whose position relative to `T_c` is reported.
    pub reference_temperature: Option<f64>,
    pub relative_grid: Vec<f64>,
    pub search: CriticalSearch,
}

impl PhaseConfig {
    pub fn from_params(n: usize, params: &ParamSpec, relative_grid: Vec<f64>) -> Result<Self> {
        let pp = params.physical()?;
        Ok(Self {
            n,
            phi_c: pp.phi_c,
            reference_temperature: Some(pp.temperature),
            relative_grid,
            search: CriticalSearch::default(),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriticalReport {
    pub n: usize,
    pub phi_c: f64,
    /// Absolute edge temperature.
    pub critical_temperature: f64,
    pub coexistence_lower: Option<f64>,
    pub flip_interval: Option<(f64, f64)>,
    /// Bisected flip, as `T / T_c`.
    pub flip_relative: Option<f64>,
    pub reference_temperature: Option<f64>,
    pub reference_relative: Option<f64>,
    /// `T_c` if the reference temperature sat at `relative_anchor` of it.
    pub relative_anchor: f64,
    pub critical_if_anchored: Option<f64>,
}

/// Writes `diagram.csv` and `critical.json`.
pub fn cmd_phase(cfg: &PhaseConfig, out_dir: &Path, cache: Option<&Path>) -> Result<CriticalReport> {
    if cfg.relative_grid.is_empty() {
        return Err(Error::Config("empty T/T_c grid".into()));
    }
    let t = tables(cfg.n, cache)?;
    let tc = critical_temperature(cfg.phi_c, cfg.n, &t, &cfg.search)?;
    let d = phase_diagram(cfg.phi_c, cfg.n, &cfg.relative_grid, &t, tc)?;
    let flip = stability_flip_temperature(cfg.phi_c, cfg.n, &t, cfg.search.lo.max(1e-3), tc, 1e-4)?;
    let meta = RunMeta::new("phase", None, cfg)?;

    let mut w = CsvWriter::create(
        &out_dir.join("diagram.csv"),
        &meta,
        &["T", "T_over_Tc", "minima", "m_star", "F_star", "m_meta", "F_meta"],
    )?;
    for r in &d.rows {
        let meta_min = r.metastable();
        w.row([
            fmt_f64(r.temperature),
            fmt_f64(r.relative),
            r.minima.len().to_string(),
            fmt_f64(r.stable().m),
            fmt_f64(r.stable().f),
            fmt_opt(meta_min.map(|x| x.m)),
            fmt_opt(meta_min.map(|x| x.f)),
        ])?;
    }
    w.finish()?;

    let anchor = 0.95;
    let report = CriticalReport {
        n: cfg.n,
        phi_c: cfg.phi_c,
        critical_temperature: tc,
        coexistence_lower: d.coexistence_lower,
        flip_interval: d.flip_interval,
        flip_relative: flip.map(|f| f / tc),
        reference_temperature: cfg.reference_temperature,
        reference_relative: cfg.reference_temperature.map(|r| r / tc),
        relative_anchor: anchor,
        critical_if_anchored: cfg.reference_temperature.map(|r| r / anchor),
    };
    write_json(&out_dir.join("critical.json"), &meta, &report)?;
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulateConfig {
    pub n: usize,
    pub phi_c: f64,
    pub relative_grid: Vec<f64>,
    /// Computed from the free energy when absent.
    pub critical_temperature: Option<f64>,
    pub experiment: ExperimentConfig,
}

/// Writes `orderparam.csv` with columns `T, T_over_Tc, mean_m, ci_lo, ci_hi, sd, reps`.
pub fn cmd_simulate(cfg: &SimulateConfig, out_dir: &Path, cache: Option<&Path>) -> Result<PathBuf> {
    let tc = match cfg.critical_temperature {
        Some(tc) => tc,
        None => {
            let t = tables(cfg.n, cache)?;
            critical_temperature(cfg.phi_c, cfg.n, &t, &CriticalSearch::default())?
        }
    };
    let pts = mean_order_parameter_experiment(cfg.phi_c, cfg.n, &cfg.relative_grid, tc, &cfg.experiment)?;
    let meta = RunMeta::new("simulate", Some(cfg.experiment.seed), cfg)?;
    let path = out_dir.join("orderparam.csv");
    let mut w = CsvWriter::create(&path, &meta, &["T", "T_over_Tc", "mean_m", "ci_lo", "ci_hi", "sd", "reps"])?;
    for p in &pts {
        w.row([
            fmt_f64(p.temperature),
            fmt_f64(p.relative),
            fmt_f64(p.mean_m),
            fmt_f64(p.ci_lo),
            fmt_f64(p.ci_hi),
            fmt_f64(p.sd),
            p.reps.to_string(),
        ])?;
    }
    w.finish()?;
    Ok(path)
}

#[derive(Debug, Clone, Serialize)]
pub struct EventsConfig {
    pub trajectory: TrajectoryConfig,
    pub bin_width: f64,
    pub write_log: bool,
    pub prior: &'static str,
}

impl EventsConfig {
    pub fn new(trajectory: TrajectoryConfig) -> Self {
        Self {
            trajectory,
            bin_width: 0.02,
            write_log: false,
            prior: "jeffreys",
        }
    }
}

/// Writes `events.csv` (per bin and class) and, on request,
/// `trajectories.log` with one accepted-toggle sample per line.
pub fn cmd_events(cfg: &EventsConfig, out_dir: &Path) -> Result<TrajectorySet> {
    let set = capture_transition_trajectories(&cfg.trajectory)?;
    let tally = tabulate_event_rates(&set.trajectories, cfg.bin_width)?;
    let meta = RunMeta::new("events", Some(cfg.trajectory.seed), cfg)?;
    let mut w = CsvWriter::create(
        &out_dir.join("events.csv"),
        &meta,
        &["bin_lo", "bin_hi", "class", "count", "exposure", "rate", "lo", "hi"],
    )?;
    let selectors = DyadClass::ALL
        .iter()
        .map(|&c| EventSelector::Class(c))
        .chain(ClassGroup::ALL.iter().map(|&g| EventSelector::Group(g)));
    let selectors: Vec<EventSelector> = selectors.collect();
    for b in &tally.bins {
        for &sel in &selectors {
            let r = b.rate(sel);
            w.row([
                fmt_f64(b.lo),
                fmt_f64(b.hi),
                sel.label().to_string(),
                b.count(sel).to_string(),
                b.exposure.to_string(),
                fmt_opt(r.map(|x| x.mean)),
                fmt_opt(r.map(|x| x.lo)),
                fmt_opt(r.map(|x| x.hi)),
            ])?;
        }
    }
    w.finish()?;

    if cfg.write_log {
        let mut w = CsvWriter::create(
            &out_dir.join("trajectories.log"),
            &meta,
            &["attempt", "step", "i", "j", "event", "class", "m"],
        )?;
        for t in &set.trajectories {
            for e in &t.events {
                w.row([
                    t.attempt.to_string(),
                    e.step.to_string(),
                    e.i.to_string(),
                    e.j.to_string(),
                    if e.formed { "formed" } else { "dissolved" }.to_string(),
                    e.class.label().to_string(),
                    fmt_f64(e.m_before),
                ])?;
            }
        }
        w.finish()?;
    }
    Ok(set)
}

pub fn cmd_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    run_verify(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::output::CsvTable;

    #[test]
    fn bounds_in_both_forms() {
        let a = cmd_bounds(&ParamSpec::Theta(ModelParams::new(-1.631, -5.502)));
        let b = cmd_bounds(&ParamSpec::Physical(PhysicalParams::new(1.0 / 1.631, 5.502 / 1.631).unwrap()));
        assert!((a.lower / b.lower - 1.0).abs() < 1e-12);
        assert!((a.upper - 0.1637).abs() < 1e-4);
        let z = cmd_bounds(&ParamSpec::Theta(ModelParams::new(0.0, 0.0)));
        assert_eq!((z.lower, z.upper), (0.5, 0.5));
    }

    #[test]
    fn free_energy_rows_per_temperature() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = FreeEnergyConfig {
            n: 3,
            params: vec![PhysicalParams::new(0.5, 1.0).unwrap(), PhysicalParams::new(2.0, 1.0).unwrap()],
        };
        let path = cmd_free_energy(&cfg, dir.path(), None).unwrap();
        let t = CsvTable::read(&path).unwrap();
        assert_eq!(t.rows.len(), 8);
        assert_eq!(t.column("finite").unwrap(), vec!["1", "0", "0", "1", "1", "0", "0", "1"]);
    }
}
