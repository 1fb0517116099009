//! Which 0/1 matrices are transformations? Structural recovery, local brute
//! force and extension by an ancilla must agree on every matrix.

use optlab::kernel::BoolMatrix;
use optlab::oracles::{
    admissibility_equivalence, brute_force_admissible, structural_recover, EnumCap,
};
use optlab::SystemType;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = SystemType::new(2, 2);

    // rows are (s, s'), columns (t, t'); this one copies pointer 0 to both outputs
    #[rustfmt::skip]
    let copy = BoolMatrix::from_entries(4, 4, &[
        1, 0, 1, 0,
        0, 1, 0, 1,
        0, 0, 0, 0,
        0, 0, 0, 0,
    ])?;
    println!(
        "copy pointer 0: {:?}",
        structural_recover(&copy, &a, &a).map(|t| t.to_string())
    );

    // output pointer 0 would read from both input pointers
    #[rustfmt::skip]
    let clash = BoolMatrix::from_entries(4, 4, &[
        1, 0, 0, 0,
        0, 0, 0, 0,
        0, 0, 0, 0,
        0, 1, 0, 0,
    ])?;
    println!(
        "clash: {:?}",
        structural_recover(&clash, &a, &a).map(|t| t.to_string())
    );
    println!(
        "clash admissible by brute force: {}",
        brute_force_admissible(&clash, &a, &a)?
    );

    let eq = admissibility_equivalence(&a, &a, std::slice::from_ref(&a), EnumCap::default())?;
    print!("{}", eq.report());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("admissibility example");
}
