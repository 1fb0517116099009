// Runs every shipped example so they stay in sync with the library.

#[path = "../examples/admissibility.rs"]
mod admissibility;
#[path = "../examples/alice.rs"]
mod alice;
#[path = "../examples/atomicity.rs"]
mod atomicity;
#[path = "../examples/circuit_precedence.rs"]
mod circuit_precedence;
#[path = "../examples/composition.rs"]
mod composition;
#[path = "../examples/determinism.rs"]
mod determinism;
#[path = "../examples/dsl_roundtrip.rs"]
mod dsl_roundtrip;
#[path = "../examples/enumerate.rs"]
mod enumerate;
#[path = "../examples/local_discriminability.rs"]
mod local_discriminability;
#[path = "../examples/signaling.rs"]
mod signaling;

#[test]
fn example_admissibility() {
    admissibility::run_example().unwrap();
}

#[test]
fn example_alice() {
    alice::run_example().unwrap();
}

#[test]
fn example_atomicity() {
    atomicity::run_example().unwrap();
}

#[test]
fn example_circuit_precedence() {
    circuit_precedence::run_example().unwrap();
}

#[test]
fn example_composition() {
    composition::run_example().unwrap();
}

#[test]
fn example_determinism() {
    determinism::run_example().unwrap();
}

#[test]
fn example_dsl_roundtrip() {
    dsl_roundtrip::run_example().unwrap();
}

#[test]
fn example_enumerate() {
    enumerate::run_example().unwrap();
}

#[test]
fn example_local_discriminability() {
    local_discriminability::run_example().unwrap();
}

#[test]
fn example_signaling() {
    signaling::run_example().unwrap();
}
