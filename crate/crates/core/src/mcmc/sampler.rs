use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DyadClass, Graph};
use crate::params::{inv_logit, ModelParams};

/// Reproducible generator for one chain: ChaCha8 keyed by `seed`, with the
/// replicate (or trajectory attempt) index selecting the stream.
pub fn chain_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProposalKind {
    /// Metropolis with a uniformly random dyad toggle.
    UniformDyad,
    /// Metropolis–Hastings: half the time a uniformly random existing edge,
    /// otherwise a uniformly random dyad.
    TieNoTie,
    /// Heat-bath update of a uniformly random dyad.
    Gibbs,
}

/// What happened at one sampler step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepOutcome {
    pub i: usize,
    pub j: usize,
    /// The dyad was absent before the step (a formation was on offer).
    pub formation: bool,
    /// The dyad was toggled.
    pub accepted: bool,
    /// Class of the dyad with the focal edge forced absent.
    pub class: DyadClass,
}

#[inline]
fn uniform_dyad<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (usize, usize) {
    let i = rng.random_range(0..n);
    let mut j = rng.random_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    (i, j)
}

#[inline]
fn accept<R: Rng + ?Sized>(log_ratio: f64, rng: &mut R) -> bool {
    log_ratio >= 0.0 || rng.random::<f64>() < log_ratio.exp()
}

/// Signed `theta . Delta` for toggling `(i, j)` from its current state.
#[inline]
fn toggle_log_ratio(g: &Graph, p: &ModelParams, i: usize, j: usize) -> (f64, bool, DyadClass) {
    let (de, dc) = g.change_score_unchecked(i, j);
    let present = g.has_edge(i, j);
    let lr = p.dot(de, dc);
    (if present { -lr } else { lr }, !present, g.classify_unchecked(i, j))
}

/// One Metropolis step with a uniform dyad proposal.
pub fn metropolis_step<R: Rng + ?Sized>(g: &mut Graph, p: &ModelParams, rng: &mut R) -> StepOutcome {
    let (i, j) = uniform_dyad(g.order(), rng);
    let (lr, formation, class) = toggle_log_ratio(g, p, i, j);
    let accepted = accept(lr, rng);
    if accepted {
        g.toggle_unchecked(i, j);
    }
    StepOutcome {
        i,
        j,
        formation,
        accepted,
        class,
    }
}

/// Probability that the tie/no-tie kernel proposes toggling a given dyad:
/// `1/D` on the empty graph, else `1/(2D) + 1/(2 t_e)` for an edge and
/// `1/(2D)` for a non-edge.
#[inline]
fn tnt_proposal_prob(dyads: f64, edges: usize, is_edge: bool) -> f64 {
    if edges == 0 {
        1.0 / dyads
    } else if is_edge {
        0.5 / dyads + 0.5 / edges as f64
    } else {
        0.5 / dyads
    }
}

/// One tie/no-tie Metropolis–Hastings step. With an empty graph the edge
/// branch has nothing to draw from and falls through to a uniform dyad.
pub fn tnt_step<R: Rng + ?Sized>(g: &mut Graph, p: &ModelParams, rng: &mut R) -> StepOutcome {
    let n = g.order();
    let dyads = (n * (n - 1) / 2) as f64;
    let te = g.edge_count();
    let (i, j) = if te > 0 && rng.random::<bool>() {
        g.edge_at(rng.random_range(0..te))
    } else {
        uniform_dyad(n, rng)
    };
    let (lr, formation, class) = toggle_log_ratio(g, p, i, j);
    let (q_fwd, q_rev) = if formation {
        (tnt_proposal_prob(dyads, te, false), tnt_proposal_prob(dyads, te + 1, true))
    } else {
        (tnt_proposal_prob(dyads, te, true), tnt_proposal_prob(dyads, te - 1, false))
    };
    let accepted = accept(lr + (q_rev / q_fwd).ln(), rng);
    if accepted {
        g.toggle_unchecked(i, j);
    }
    StepOutcome {
        i,
        j,
        formation,
        accepted,
        class,
    }
}

/// One Gibbs (heat-bath) update of a uniformly random dyad.
pub fn gibbs_step<R: Rng + ?Sized>(g: &mut Graph, p: &ModelParams, rng: &mut R) -> StepOutcome {
    let (i, j) = uniform_dyad(g.order(), rng);
    let (de, dc) = g.change_score_unchecked(i, j);
    let present = g.has_edge(i, j);
    let want = rng.random::<f64>() < inv_logit(p.dot(de, dc));
    let accepted = want != present;
    let class = g.classify_unchecked(i, j);
    if accepted {
        g.toggle_unchecked(i, j);
    }
    StepOutcome {
        i,
        j,
        formation: !present,
        accepted,
        class,
    }
}

/// A graph, parameters, proposal kernel and generator bundled as a chain.
#[derive(Debug, Clone)]
pub struct Sampler {
    pub graph: Graph,
    pub params: ModelParams,
    pub kind: ProposalKind,
    pub rng: ChaCha8Rng,
    pub steps: u64,
    pub accepted: u64,
}

impl Sampler {
    pub fn new(graph: Graph, params: ModelParams, kind: ProposalKind, rng: ChaCha8Rng) -> Self {
        Self {
            graph,
            params,
            kind,
            rng,
            steps: 0,
            accepted: 0,
        }
    }

    #[inline]
    pub fn step(&mut self) -> StepOutcome {
        let out = match self.kind {
            ProposalKind::UniformDyad => metropolis_step(&mut self.graph, &self.params, &mut self.rng),
            ProposalKind::TieNoTie => tnt_step(&mut self.graph, &self.params, &mut self.rng),
            ProposalKind::Gibbs => gibbs_step(&mut self.graph, &self.params, &mut self.rng),
        };
        self.steps += 1;
        self.accepted += out.accepted as u64;
        out
    }

    pub fn run(&mut self, steps: u64) {
        for _ in 0..steps {
            self.step();
        }
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            self.accepted as f64 / self.steps as f64
        }
    }
}

/// Formation proposals and acceptances by dyad class.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ProposalTally {
    pub proposed: [u64; 6],
    pub accepted: [u64; 6],
}

impl ProposalTally {
    pub fn record(&mut self, s: &StepOutcome) {
        if s.formation {
            self.proposed[s.class.index()] += 1;
            self.accepted[s.class.index()] += s.accepted as u64;
        }
    }

    pub fn acceptance(&self, c: DyadClass) -> Option<f64> {
        let k = c.index();
        (self.proposed[k] > 0).then(|| self.accepted[k] as f64 / self.proposed[k] as f64)
    }
}

/// How the starting graph's density is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedDensity {
    Fixed(f64),
    /// Drawn uniformly from `[0, 1]` by the chain's own generator.
    Uniform,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainConfig {
    pub n: usize,
    pub params: ModelParams,
    pub proposal: ProposalKind,
    pub burn_in: u64,
    /// Total steps, burn-in included.
    pub steps: u64,
    pub thinning: u64,
    pub seed: u64,
    pub stream: u64,
    pub seed_density: SeedDensity,
}

impl ChainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config("chains need at least two vertices".into()));
        }
        if self.steps < self.burn_in {
            return Err(Error::Config(format!(
                "total steps {} shorter than burn-in {}",
                self.steps, self.burn_in
            )));
        }
        if self.thinning == 0 {
            return Err(Error::Config("thinning must be at least 1".into()));
        }
        if let SeedDensity::Fixed(d) = self.seed_density {
            if !(0.0..=1.0).contains(&d) {
                return Err(Error::Config(format!("seed density {d} outside [0, 1]")));
            }
        }
        Ok(())
    }

    pub fn seeded_sampler(&self) -> Result<Sampler> {
        self.validate()?;
        let mut rng = chain_rng(self.seed, self.stream);
        let density = match self.seed_density {
            SeedDensity::Fixed(d) => d,
            SeedDensity::Uniform => rng.random::<f64>(),
        };
        let g = Graph::bernoulli(self.n, density, &mut rng);
        Ok(Sampler::new(g, self.params, self.proposal, rng))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainSample {
    pub step: u64,
    pub t_e: usize,
    pub t_c: usize,
    pub m: f64,
}

/// Runs a chain, discarding burn-in and recording every `thinning`-th state
/// thereafter.
pub fn run_chain(config: &ChainConfig) -> Result<Vec<ChainSample>> {
    let mut s = config.seeded_sampler()?;
    s.run(config.burn_in);
    let mut out = Vec::with_capacity(((config.steps - config.burn_in) / config.thinning) as usize);
    for step in (config.burn_in + 1)..=config.steps {
        s.step();
        if (step - config.burn_in) % config.thinning == 0 {
            out.push(ChainSample {
                step,
                t_e: s.graph.edge_count(),
                t_c: s.graph.concurrent_count(),
                m: s.graph.order_parameter(),
            });
        }
    }
    Ok(out)
}
