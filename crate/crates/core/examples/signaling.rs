//! Bob's choice of pointer test on his half of a shared deterministic state
//! changes Alice's marginal.

use optlab::oracles::{
    pointer_tests, signaling_scan, signaling_witness, swap_shared_state, EnumCap,
};
use optlab::SystemType;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let shared = swap_shared_state();
    let b = SystemType::new(2, 2);
    let analysis = signaling_witness(&shared, &pointer_tests(&b))?;
    println!("shared state: {shared}");
    for (v, m) in analysis.marginals.iter().enumerate() {
        println!("Bob performs D{v}: Alice holds {m}");
    }
    if let Some(w) = &analysis.witness {
        println!(
            "Alice's {} sees {:?} vs {:?}",
            w.alice_test.label(),
            w.distributions.0,
            w.distributions.1
        );
    }

    // how common is this among all deterministic shared states?
    let scan = signaling_scan(&b, &b, EnumCap::default())?;
    println!(
        "{} of {} deterministic states on {} let Bob signal",
        scan.signaling.len(),
        scan.states,
        b.compose(&b)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("signaling example");
}
