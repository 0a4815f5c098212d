//! Mean order parameter from independent chains across temperature, next
//! to the predicted stable branch.
use ecvm::mcmc::{empirical_flip, mean_order_parameter_experiment, ExperimentConfig};
use ecvm::phase::{critical_temperature, linear_grid, CriticalSearch};
use ecvm::MultiplicityTable;

fn main() -> ecvm::Result<()> {
    let (n, phi_c) = (100, 3.373);
    let tables = MultiplicityTable::build(n);
    let tc = critical_temperature(phi_c, n, &tables, &CriticalSearch::default())?;
    let cfg = ExperimentConfig { reps: 20, burn_in: 200_000, seed: 7, ..Default::default() };
    let points = mean_order_parameter_experiment(phi_c, n, &linear_grid(0.5, 1.1, 7), tc, &cfg)?;
    for p in &points {
        println!("{:.2}  <m> = {:.3}  95% CI [{:.3}, {:.3}]", p.relative, p.mean_m, p.ci_lo, p.ci_hi);
    }
    println!("empirical flip: {:?}", empirical_flip(&points));
    Ok(())
}
