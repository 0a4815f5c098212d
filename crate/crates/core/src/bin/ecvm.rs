use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ecvm::cli::{
    cache_dir_from_env, cmd_bounds, cmd_events, cmd_free_energy, cmd_phase, cmd_simulate, cmd_verify, EventsConfig,
    FreeEnergyConfig, ParamSpec, PhaseConfig, SimulateConfig,
};
use ecvm::mcmc::{ExperimentConfig, ProposalKind, SeedDensity, TrajectoryConfig};
use ecvm::multiplicity::MultiplicityTable;
use ecvm::phase::linear_grid;
use ecvm::verify::VerifyConfig;
use ecvm::{ModelParams, PhysicalParams};

#[derive(Parser)]
#[command(name = "ecvm", version, about = "Edge/concurrent-vertex random graphs: bounds, free energy, phases, simulation")]
struct Cli {
    /// Worker threads (default: available parallelism; 1 gives reference output).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output directory.
    #[arg(long, short, global = true, default_value = ".")]
    out: PathBuf,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Params {
    /// Natural parameters `theta_e,theta_c` (repeatable where a command takes several).
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["temp", "phic"])]
    theta: Vec<String>,

    /// Edge temperature(s), comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "phic")]
    temp: Vec<f64>,

    /// Concurrency energy in edge units.
    #[arg(long, allow_hyphen_values = true)]
    phic: Option<f64>,
}

impl Params {
    fn specs(&self) -> Result<Vec<ParamSpec>, String> {
        if !self.theta.is_empty() {
            return self.theta.iter().map(|t| parse_theta(t).map(ParamSpec::Theta)).collect();
        }
        let phic = self.phic.ok_or("give --theta or --temp with --phic")?;
        if self.temp.is_empty() {
            return Err("--phic needs at least one --temp here".into());
        }
        self.temp
            .iter()
            .map(|&t| PhysicalParams::new(t, phic).map(ParamSpec::Physical).map_err(|e| e.to_string()))
            .collect()
    }

    fn one(&self) -> Result<ParamSpec, String> {
        let s = self.specs()?;
        match s.as_slice() {
            [p] => Ok(*p),
            _ => Err("exactly one parameter setting expected".into()),
        }
    }

    /// `phi_c` plus an optional reference temperature.
    fn phi_c(&self) -> Result<(f64, Option<f64>), String> {
        if self.theta.is_empty() && self.temp.is_empty() {
            return self.phic.map(|p| (p, None)).ok_or_else(|| "give --phic or --theta".into());
        }
        let pp = self.one()?.physical().map_err(|e| e.to_string())?;
        Ok((pp.phi_c, Some(pp.temperature)))
    }
}

fn parse_theta(s: &str) -> Result<ModelParams, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("bad --theta {s:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        [e, c] => Ok(ModelParams::new(*e, *c)),
        _ => Err(format!("--theta takes two values, got {s:?}")),
    }
}

/// `lo:hi:count` or a comma list.
fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let bad = |e: std::num::ParseFloatError| format!("bad grid {s:?}: {e}");
    if let [lo, hi, k] = s.split(':').collect::<Vec<_>>().as_slice() {
        let k: usize = k.parse().map_err(|_| format!("bad grid count in {s:?}"))?;
        return Ok(linear_grid(lo.parse().map_err(bad)?, hi.parse().map_err(bad)?, k));
    }
    s.split(',').map(|x| x.trim().parse::<f64>().map_err(bad)).collect()
}

#[derive(Clone, Copy, ValueEnum)]
enum Proposal {
    Tnt,
    Metropolis,
    Gibbs,
}

impl From<Proposal> for ProposalKind {
    fn from(p: Proposal) -> Self {
        match p {
            Proposal::Tnt => ProposalKind::TieNoTie,
            Proposal::Metropolis => ProposalKind::UniformDyad,
            Proposal::Gibbs => ProposalKind::Gibbs,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Marginal tie-probability bounds.
    Bounds {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        json: bool,
    },
    /// Conditional free energy and entropy over the order parameter (curve.csv).
    FreeEnergy {
        #[arg(long, short)]
        n: usize,
        #[command(flatten)]
        params: Params,
    },
    /// Critical temperature and phase diagram (diagram.csv, critical.json).
    Phase {
        #[arg(long, short, default_value_t = 100)]
        n: usize,
        #[command(flatten)]
        params: Params,
        /// T/T_c grid: `lo:hi:count` or a comma list.
        #[arg(long, default_value = "0.3:1.2:19", value_parser = parse_grid)]
        grid: std::vec::Vec<f64>,
        /// Upper end of the initial T_c search bracket.
        #[arg(long, default_value_t = 5.0)]
        tc_hi: f64,
    },
    /// Mean order parameter from independent chains (orderparam.csv).
    Simulate {
        #[arg(long, short, default_value_t = 100)]
        n: usize,
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value = "0.3:1.2:19", value_parser = parse_grid)]
        grid: std::vec::Vec<f64>,
        #[arg(long, default_value_t = 250)]
        reps: usize,
        #[arg(long, default_value_t = 500_000)]
        burn_in: u64,
        /// 50 replicates instead of 250.
        #[arg(long)]
        desk: bool,
        /// Use this T_c instead of computing it.
        #[arg(long)]
        tc: Option<f64>,
        #[arg(long, value_enum, default_value = "tnt")]
        proposal: Proposal,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Sparse-to-dense trajectories and formation-event rates (events.csv).
    Events {
        #[arg(long, short, default_value_t = 100)]
        n: usize,
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 50_000_000)]
        cap: u64,
        #[arg(long, default_value_t = 5)]
        subsample: usize,
        #[arg(long, default_value_t = 0.02)]
        bin_width: f64,
        #[arg(long, default_value_t = 0.05)]
        threshold: f64,
        /// Minimum completed/attempted fraction before giving up.
        #[arg(long, default_value_t = 0.02)]
        floor: f64,
        /// 100 trajectories with a 10^7 step cap.
        #[arg(long)]
        desk: bool,
        /// Also write trajectories.log.
        #[arg(long)]
        log: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Oracle suites against exhaustive enumeration.
    Verify {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        /// Check the cached table for this N in the cache directory.
        #[arg(long)]
        cache_n: Option<usize>,
    },
}

enum Failure {
    Usage(String),
    Compute(ecvm::Error),
    Verify,
}

impl From<ecvm::Error> for Failure {
    fn from(e: ecvm::Error) -> Self {
        Failure::Compute(e)
    }
}

fn seed_or_random(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("seed {s}");
        s
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cache = cache_dir_from_env();
    let cache = cache.as_deref();
    let out = cli.out.as_path();
    match cli.cmd {
        Cmd::Bounds { params, json } => {
            let r = cmd_bounds(&params.one().map_err(Failure::Usage)?);
            if json {
                println!("{}", serde_json::to_string_pretty(&r).map_err(ecvm::Error::from)?);
            } else {
                println!("lower {:.6e}\nupper {:.6e}\nratio {:.6e}", r.lower, r.upper, r.ratio);
            }
        }
        Cmd::FreeEnergy { n, params } => {
            let specs = params.specs().map_err(Failure::Usage)?;
            let params = specs.iter().map(|s| s.physical()).collect::<ecvm::Result<Vec<_>>>()?;
            let path = cmd_free_energy(&FreeEnergyConfig { n, params }, out, cache)?;
            println!("{}", path.display());
        }
        Cmd::Phase {
            n,
            params,
            grid,
            tc_hi,
        } => {
            let (phi_c, reference) = params.phi_c().map_err(Failure::Usage)?;
            let mut cfg = PhaseConfig {
                n,
                phi_c,
                reference_temperature: reference,
                relative_grid: grid,
                search: Default::default(),
            };
            cfg.search.hi = tc_hi;
            let r = cmd_phase(&cfg, out, cache)?;
            println!("{}", serde_json::to_string_pretty(&r).map_err(ecvm::Error::from)?);
        }
        Cmd::Simulate {
            n,
            params,
            grid,
            reps,
            burn_in,
            desk,
            tc,
            proposal,
            seed,
        } => {
            let (phi_c, _) = params.phi_c().map_err(Failure::Usage)?;
            let cfg = SimulateConfig {
                n,
                phi_c,
                relative_grid: grid,
                critical_temperature: tc,
                experiment: ExperimentConfig {
                    proposal: proposal.into(),
                    burn_in,
                    reps: if desk { 50 } else { reps },
                    seed: seed_or_random(seed),
                    seed_density: SeedDensity::Uniform,
                },
            };
            println!("{}", cmd_simulate(&cfg, out, cache)?.display());
        }
        Cmd::Events {
            n,
            params,
            count,
            cap,
            subsample,
            bin_width,
            threshold,
            floor,
            desk,
            log,
            seed,
        } => {
            let p = params.one().map_err(Failure::Usage)?.model();
            let (count, cap) = if desk { (100, 10_000_000) } else { (count, cap) };
            let mut t = TrajectoryConfig::new(n, p, count, cap, seed_or_random(seed));
            t.subsample = subsample;
            t.dense_threshold = threshold;
            t.acceptance_floor = floor;
            let mut cfg = EventsConfig::new(t);
            cfg.bin_width = bin_width;
            cfg.write_log = log;
            let set = cmd_events(&cfg, out)?;
            println!(
                "{} trajectories from {} attempts; {}",
                set.trajectories.len(),
                set.attempts,
                out.join("events.csv").display()
            );
        }
        Cmd::Verify { max_n, cache_n } => {
            let cache = match cache_n {
                Some(n) => {
                    let dir = cache.ok_or_else(|| Failure::Usage(format!("--cache-n needs {}", ecvm::cli::CACHE_ENV)))?;
                    Some((n, dir.join(MultiplicityTable::cache_file_name(n))))
                }
                None => None,
            };
            let r = cmd_verify(&VerifyConfig { max_n, cache })?;
            for s in &r.suites {
                println!(
                    "{} {:<22} checks {:>7}  max deviation {:.3e}{}",
                    if s.passed { "PASS" } else { "FAIL" },
                    s.name,
                    s.checks,
                    s.max_deviation,
                    if s.detail.is_empty() { String::new() } else { format!("  [{}]", s.detail) }
                );
            }
            if !r.passed() {
                return Err(Failure::Verify);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Verify) => ExitCode::from(1),
    }
}
