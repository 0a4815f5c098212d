//! A single seeded chain with each proposal scheme, cold and hot.
use ecvm::mcmc::{chain_rng, ProposalKind, Sampler};
use ecvm::{Graph, PhysicalParams};

fn main() -> ecvm::Result<()> {
    for t in [0.3, 1.2] {
        let p = PhysicalParams::new(t, 3.373)?.to_model();
        for kind in [ProposalKind::UniformDyad, ProposalKind::TieNoTie, ProposalKind::Gibbs] {
            let mut s = Sampler::new(Graph::empty(100), p, kind, chain_rng(1, 0));
            s.run(500_000);
            println!(
                "T = {t}  {kind:?}: edges {}, concurrent {}, m = {:.2}, acceptance {:.3}",
                s.graph.edge_count(),
                s.graph.concurrent_count(),
                s.graph.order_parameter(),
                s.acceptance_rate()
            );
        }
    }
    Ok(())
}
