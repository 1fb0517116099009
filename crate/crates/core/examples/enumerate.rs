//! Closed-form counts next to the sizes of the actual enumerations.

use optlab::oracles::{
    count_effects, count_states, count_transformations, enumerate_atomic_states,
    enumerate_deterministic_effects, enumerate_effects, enumerate_states,
    enumerate_transformations, EnumCap,
};
use optlab::SystemType;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cap = EnumCap::default();
    println!("system  states  effects  atomic  det.effects");
    for n in 1..=3 {
        for m in 1..=3 {
            let s = SystemType::new(n, m);
            let states = enumerate_states(&s, cap)?.len();
            let effects = enumerate_effects(&s, cap)?.len();
            assert_eq!(states as u128, count_states(&s));
            assert_eq!(effects as u128, count_effects(&s));
            println!(
                "{n}|>{m}    {states:>6}  {effects:>7}  {:>6}  {:>11}",
                enumerate_atomic_states(&s).len(),
                enumerate_deterministic_effects(&s).len()
            );
        }
    }
    let a = SystemType::new(2, 2);
    let ts = enumerate_transformations(&a, &a, cap)?;
    println!(
        "transformations {a} -> {a}: {} (formula {})",
        ts.len(),
        count_transformations(&a, &a)
    );
    println!("first few:");
    for t in ts.iter().take(3) {
        println!("  {t}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("enumerate example");
}
