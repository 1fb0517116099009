//! Alice prepares `α_{1,{i}}` and later reads pointer 0 or pointer 1. The
//! probability of her preparation outcome depends on that later choice.
//!
//! ```text
//! cargo run --example alice
//! ```

use optlab::circuit::{Circuit, Outcomes, Test};
use optlab::{EffectEvent, EventKind, StateEvent, SystemType};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = SystemType::new(2, 2);
    let prep = Test::new(
        "P",
        vec![
            StateEvent::new(a.clone(), [(0, 1)])?.into(),
            StateEvent::new(a.clone(), [(1, 1)])?.into(),
        ],
    )?;
    for v in 0..2 {
        let events: Vec<EventKind> = (0..2)
            .map(|j| EffectEvent::atomic(a.clone(), v, j).map(EventKind::from))
            .collect::<Result<_, _>>()?;
        let obs = Test::new(format!("D{v}"), events)?;

        let mut c = Circuit::new();
        let p = c.add_test(prep.clone());
        let d = c.add_test(obs);
        c.wire(p, 0, d, 0);
        for i in 0..2 {
            let prob = c.marginal_probability(&Outcomes::from([(p, i)]))?;
            println!("P(r{i} | D{v}) = {prob}");
        }
    }

    let verdict = optlab::oracles::check_causality(&a)?;
    println!("causal: {}", verdict.causal);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("alice example");
}
