//! Every closed circuit has probability 0 or 1: chains of tests on 2|>2
//! swept exhaustively, plus random circuits.

use optlab::oracles::{check_determinism, DeterminismConfig, EnumCap};
use optlab::SystemType;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = DeterminismConfig {
        depth: 2,
        random_circuits: 500,
        seed: 7,
        ..DeterminismConfig::default()
    };
    let outcome = check_determinism(&SystemType::new(2, 2), &cfg, EnumCap::default())?;
    print!("{}", outcome.report());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("determinism example");
}
