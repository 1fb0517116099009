//! The atomic transformations `A[s,s' -> t,t']` of 2|>2 are exactly the
//! atoms: none of them splits into two nonzero events.

use optlab::oracles::{check_atomicity, enumerate_atomic_transformations, integer_rank, EnumCap};
use optlab::{EventKind, SystemType};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = SystemType::new(2, 2);
    let atoms = enumerate_atomic_transformations(&a, &a);
    let mut rows = Vec::new();
    for t in &atoms {
        let e = EventKind::from_transformation(t.clone());
        let v = check_atomicity(&e, EnumCap::default())?;
        assert!(v.atomic);
        rows.push(e.as_vector().into_iter().map(i64::from).collect());
    }
    println!(
        "{} atomic transformations, rank {}",
        atoms.len(),
        integer_rank(&rows)
    );

    // a channel is not atomic: it splits
    let id = EventKind::from_transformation(optlab::TransformationEvent::identity(a));
    let v = check_atomicity(&id, EnumCap::default())?;
    if let Some((x, y)) = v.witness {
        println!("identity = {x}\n         + {y}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("atomicity example");
}
