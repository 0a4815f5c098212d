//! Built-in self-checks against brute-force enumeration.
use ecvm::verify::{run_verify, VerifyConfig};

fn main() -> ecvm::Result<()> {
    let report = run_verify(&VerifyConfig { max_n: 5, cache: None })?;
    for s in &report.suites {
        println!("{:<22} {} ({} checks, max dev {:.1e})", s.name, if s.passed { "ok" } else { "FAILED" }, s.checks, s.max_deviation);
    }
    std::process::exit(if report.passed() { 0 } else { 1 });
}
