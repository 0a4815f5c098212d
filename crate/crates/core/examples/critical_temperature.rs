//! Critical temperature (limit of metastability) and the stability flip for
//! two system sizes.
use ecvm::phase::{critical_temperature, stability_flip_temperature, CriticalSearch};
use ecvm::MultiplicityTable;

fn main() -> ecvm::Result<()> {
    let phi_c = 3.373;
    for n in [50, 100] {
        let tables = MultiplicityTable::build(n);
        let tc = critical_temperature(phi_c, n, &tables, &CriticalSearch::default())?;
        let flip = stability_flip_temperature(phi_c, n, &tables, 0.2 * tc, tc, 1e-5)?;
        match flip {
            Some(f) => println!("N = {n}: T_c = {tc:.4}, flip at T = {f:.4} ({:.3} T_c)", f / tc),
            None => println!("N = {n}: T_c = {tc:.4}, no flip below T_c"),
        }
    }
    Ok(())
}
