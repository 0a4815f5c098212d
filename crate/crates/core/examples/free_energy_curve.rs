//! Free-energy landscape F(m) at a few temperatures, with its local minima.
use ecvm::phase::free_energy_curve;
use ecvm::{MultiplicityTable, PhysicalParams};

fn main() -> ecvm::Result<()> {
    let n = 100;
    let tables = MultiplicityTable::build(n);
    for t in [0.4, 0.6, 0.65, 0.9] {
        let curve = free_energy_curve(&PhysicalParams::new(t, 3.373)?, n, &tables)?;
        let minima = curve.local_minima()?;
        print!("T = {t:.2}:");
        for m in &minima {
            print!("  m = {:.2} F = {:.3} ({:?})", m.m, m.f, m.branch());
        }
        println!();
        if minima.len() == 2 {
            let b = curve.barrier_between(minima[0].n_s, minima[1].n_s).unwrap();
            println!("  barrier top F = {b:.3}");
        }
    }
    Ok(())
}
