mod common;

use common::*;
use ecvm::mcmc::{chain_rng, run_chain, ChainConfig, ProposalKind, Sampler, SeedDensity};
use ecvm::{Graph, ModelParams};

fn graph_mask(g: &Graph, pairs: &[(usize, usize)]) -> usize {
    pairs
        .iter()
        .enumerate()
        .filter(|(_, &(i, j))| g.has_edge(i, j))
        .map(|(k, _)| 1 << k)
        .sum()
}

fn total_variation(kind: ProposalKind, te: f64, tc: f64, steps: u64, seed: u64) -> f64 {
    let pairs = pairs_of(4);
    let law = exact_law(4, te, tc);
    let mut s = Sampler::new(Graph::empty(4), ModelParams::new(te, tc), kind, chain_rng(seed, 0));
    s.run(10_000);
    let mut hits = vec![0u64; law.len()];
    for _ in 0..steps {
        s.step();
        hits[graph_mask(&s.graph, &pairs)] += 1;
    }
    0.5 * law
        .iter()
        .zip(&hits)
        .map(|(p, &h)| (p - h as f64 / steps as f64).abs())
        .sum::<f64>()
}

#[test]
fn gibbs_matches_exact_law() {
    for (te, tc) in [(-1.0, -1.0), (0.5, -2.0)] {
        let tv = total_variation(ProposalKind::Gibbs, te, tc, 4_000_000, 17);
        assert!(tv < 0.01, "theta=({te},{tc}) tv={tv}");
    }
}

#[test]
fn uniform_measure_has_half_density() {
    let mut s = Sampler::new(Graph::empty(4), ModelParams::new(0.0, 0.0), ProposalKind::TieNoTie, chain_rng(4, 0));
    s.run(1000);
    let steps = 1_000_000;
    let mut edges = 0u64;
    for _ in 0..steps {
        s.step();
        edges += s.graph.edge_count() as u64;
    }
    let density = edges as f64 / (steps as f64 * 6.0);
    assert!((density - 0.5).abs() < 0.01, "{density}");
}

#[test]
fn cold_chain_empties_the_dense_phase() {
    let cfg = ChainConfig {
        n: 30,
        params: ModelParams::new(-4.0, -6.0),
        proposal: ProposalKind::TieNoTie,
        burn_in: 200_000,
        steps: 210_000,
        thinning: 1000,
        seed: 8,
        stream: 0,
        seed_density: SeedDensity::Fixed(0.8),
    };
    let out = run_chain(&cfg).unwrap();
    assert!(out.iter().all(|s| s.m > 0.95), "{:?}", out.last());
}

#[test]
fn uniform_graphs_are_all_concurrent() {
    let cfg = ChainConfig {
        n: 100,
        params: ModelParams::new(0.0, 0.0),
        proposal: ProposalKind::UniformDyad,
        burn_in: 100_000,
        steps: 200_000,
        thinning: 500,
        seed: 1,
        stream: 2,
        seed_density: SeedDensity::Uniform,
    };
    let out = run_chain(&cfg).unwrap();
    let mean = out.iter().map(|s| s.m).sum::<f64>() / out.len() as f64;
    assert!(mean < 1e-3, "{mean}");
    for s in &out {
        assert!((s.m - (1.0 - s.t_c as f64 / 100.0)).abs() < 1e-15);
    }
}
