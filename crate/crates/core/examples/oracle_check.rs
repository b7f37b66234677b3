//! Cross-check the fast spectrum test against brute-force oracles.

use permlike::oracle::{run_oracle_check, OracleConfig};

fn main() {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let clean = run_oracle_check(&OracleConfig {
        seed,
        ..OracleConfig::default()
    })
    .unwrap();
    println!(
        "seed {seed}: {} instances, {} permutation-like, {} checks, {} discrepancies",
        clean.instances,
        clean.permutation_like,
        clean.checks,
        clean.discrepancies.len()
    );
    let faulty = run_oracle_check(&OracleConfig {
        seed,
        instances: 10,
        inject_fault: true,
        ..OracleConfig::default()
    })
    .unwrap();
    for d in &faulty.discrepancies {
        println!("injected fault caught by {}: {}", d.check, d.detail);
    }
}
