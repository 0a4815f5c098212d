//! Stable and metastable minima on a relative-temperature grid.
use ecvm::phase::{critical_temperature, linear_grid, phase_diagram, CriticalSearch};
use ecvm::MultiplicityTable;

fn main() -> ecvm::Result<()> {
    let (n, phi_c) = (100, 3.373);
    let tables = MultiplicityTable::build(n);
    let tc = critical_temperature(phi_c, n, &tables, &CriticalSearch::default())?;
    let d = phase_diagram(phi_c, n, &linear_grid(0.3, 1.2, 19), &tables, tc)?;
    println!("T_c = {tc:.4}  coexistence from {:?}  flip in {:?}", d.coexistence_lower, d.flip_interval);
    for row in &d.rows {
        let s = row.stable();
        let meta = row.metastable().map(|m| format!("{:.2}", m.m)).unwrap_or_else(|| "-".into());
        println!("{:.2}  T = {:.3}  m* = {:.2}  meta = {meta}", row.relative, row.temperature, s.m);
    }
    Ok(())
}
