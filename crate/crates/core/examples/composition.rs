//! The event algebra: apply, sequential and parallel composition, sums,
//! and marginalizing one factor of a bipartite state.

use optlab::kernel::{apply, compose_par, compose_seq, marginalize, sum_events};
use optlab::{EffectEvent, EventKind, StateEvent, SystemType, TransformationEvent};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = SystemType::new(2, 2);
    // output pointer t reads input pointer 1 - t and keeps the value
    let swap = TransformationEvent::channel(a.clone(), a.clone(), &[1, 0], |_, s| s)?;
    let rho = StateEvent::deterministic(a.clone(), &[0, 1])?;
    println!("swap {rho} = {}", apply(&swap, &rho)?);
    let twice = compose_seq(&swap, &swap)?;
    println!("swap ; swap = {twice}");
    println!(
        "is the identity: {}",
        twice == TransformationEvent::identity(a.clone())
    );

    let r0 = StateEvent::atomic(a.clone(), 0, 1)?;
    let r1 = StateEvent::atomic(a.clone(), 1, 0)?;
    let sum = sum_events(&[r0.clone().into(), r1.into()])?;
    println!("sum of atoms: {sum}");

    let joint = compose_par(&r0.into(), &EventKind::from(rho));
    let joint = joint.as_state().expect("product of states");
    let e = EffectEvent::deterministic(a, 0)?;
    println!(
        "joint {joint}, second factor read at pointer 0: {}",
        marginalize(joint, 1, &e)?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("composition example");
}
