//! Dense-to-sparse transition trajectories and per-class tie-formation rates
//! binned by the order parameter.
use ecvm::mcmc::{capture_transition_trajectories, tabulate_event_rates, EventSelector, TrajectoryConfig};
use ecvm::{DyadClass, PhysicalParams};

fn main() -> ecvm::Result<()> {
    let params = PhysicalParams::new(0.79, 3.373)?.to_model();
    let cfg = TrajectoryConfig::new(50, params, 20, 10_000_000, 3);
    let set = capture_transition_trajectories(&cfg)?;
    println!("{} trajectories, completion rate {:.2}", set.trajectories.len(), set.completion_rate());
    let tally = tabulate_event_rates(&set.trajectories, 0.02)?;
    for bin in tally.populated().step_by(4) {
        print!("m in [{:.2}, {:.2}) exposure {:>6}:", bin.lo, bin.hi, bin.exposure);
        for c in [DyadClass::II, DyadClass::IC, DyadClass::PP] {
            let r = bin.rate(EventSelector::Class(c)).unwrap();
            print!("  {} {:.4}", c.label(), r.mean);
        }
        println!();
    }
    println!("P-P above another class in {} bins", tally.pp_violations().len());
    println!("I-C overtakes I-I below m = {:?}", tally.isolate_crossover());
    Ok(())
}
