//! A three-branch diagram: a bipartite preparation feeds Alice's branch
//! (a swap channel, then an observation) and Bob's observation. Precedence is
//! the transitive closure of direct wiring. Bob does not precede Alice, yet
//! her marginal depends on which test he performs.
//!
//! ```text
//!      ┌── X ── DA      (Alice)
//!  S ──┤
//!      └── DB           (Bob)
//! ```

use std::collections::BTreeSet;

use optlab::circuit::{Circuit, Outcomes, Payload, Test};
use optlab::oracles::{pointer_tests, swap_shared_state};
use optlab::{EventKind, SystemType, TransformationEvent};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = SystemType::new(2, 2);
    let swap = TransformationEvent::channel(a.clone(), a.clone(), &[1, 0], |_, s| s)?;
    let d = pointer_tests(&a);

    let mut c = Circuit::new();
    let s = c.add_test(Test::new("S", vec![swap_shared_state().into()])?);
    let x = c.add_test(Test::new("X", vec![EventKind::from_transformation(swap)])?);
    let alice = c.add_test(d[0].clone());
    let bob = c.add_test(d[0].clone());
    c.wire(s, 0, x, 0);
    c.wire(x, 0, alice, 0);
    c.wire(s, 1, bob, 0);
    c.typecheck().map_err(|e| format!("{e:?}"))?;

    let name = |id| ["S", "X", "DA", "DB"][id];
    for (p, q) in [(s, x), (x, alice), (s, alice), (bob, alice), (x, bob)] {
        println!("{} ≺ {}: {}", name(p.0), name(q.0), c.precedes(p, q)?);
    }

    println!(
        "joint distribution over (S, X, DA, DB): {:?}",
        c.joint_distribution()?.entries
    );
    let verdict = c.no_backward_signaling_check(alice, bob, &d)?;
    println!(
        "Alice's marginal unaffected by Bob's choice: {}",
        verdict.holds()
    );
    println!("  {verdict:?}");

    // replace S and X by one event: the swapped shared state
    let contracted = c.contract(&BTreeSet::from([s, x]), &Outcomes::from([(s, 0), (x, 0)]))?;
    if let Payload::Event(e) = &contracted.circuit.node(contracted.node)?.payload {
        println!("S ; X contracts to {e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("precedence example");
}
