//! Stratified log partition function against brute-force enumeration on a
//! tiny graph, then the same strata at N = 100.
use ecvm::partition::{exact_log_partition, log_partition};
use ecvm::{ModelParams, MultiplicityTable};

fn main() -> ecvm::Result<()> {
    let p = ModelParams::new(-1.0, -1.5);
    let n = 6;
    let tables = MultiplicityTable::build(n);
    let approx = log_partition(&p, n, &tables)?;
    let exact = exact_log_partition(&p, n)?;
    println!("N = {n}: approx log Z = {:.6}, exact log Z = {:.6}", approx.log_z.ln(), exact.total.ln());
    for s in &approx.strata {
        println!("  n_s = {}  log Z = {:.6}  <E> = {:.3}", s.n_s, s.log_z.ln(), s.mean_edges);
    }

    let n = 100;
    let tables = MultiplicityTable::build(n);
    let big = log_partition(&ModelParams::new(-1.631, -5.502), n, &tables)?;
    let best = big.strata.iter().max_by(|a, b| a.log_z.ln().total_cmp(&b.log_z.ln())).unwrap();
    println!("N = {n}: log Z = {:.3}, heaviest stratum n_s = {}", big.log_z.ln(), best.n_s);
    Ok(())
}
