//! States of a composite are told apart by local effects, and its atomic
//! states are products of local atomic states.

use optlab::kernel::{compose_par, pair, EffectEvent};
use optlab::oracles::{check_local_discriminability, swap_shared_state, EnumCap};
use optlab::SystemType;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = SystemType::new(2, 2);
    let verdict = check_local_discriminability(&a, &a, EnumCap::default())?;
    print!("{}", verdict.report());

    // a product effect probes one pointer on each side
    let eps = swap_shared_state();
    let x = EffectEvent::atomic(a.clone(), 1, 0)?;
    let y = EffectEvent::atomic(a.clone(), 0, 1)?;
    let xy = compose_par(&x.into(), &y.into());
    let xy = xy.as_effect().expect("product of effects");
    println!("pairing of {xy} with the shared state: {}", pair(xy, &eps)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("local discriminability example");
}
