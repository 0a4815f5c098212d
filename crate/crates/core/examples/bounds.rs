//! Bernoulli bounds on every full conditional tie probability, plus the
//! per-class conditional probabilities they enclose.
use ecvm::{DyadClass, ModelParams, PhysicalParams};

fn main() -> ecvm::Result<()> {
    let settings = [
        ModelParams::new(-1.631, -5.502),
        ModelParams::new(-1.0, -1.0),
        PhysicalParams::new(0.5, 2.0)?.to_model(),
    ];
    for p in settings {
        let (lo, hi) = p.bernoulli_bounds();
        println!("theta = ({:.3}, {:.3})  bounds [{lo:.3e}, {hi:.3e}]", p.theta_e, p.theta_c);
        for c in DyadClass::ALL {
            println!("  {:>3}  {:.3e}", c.label(), p.conditional_tie_prob(c));
        }
    }
    Ok(())
}
