//! Load a `.opt` source, print its canonical form, and run its `eval`s.

use optlab::dsl;

const SRC: &str = "
# a channel that swaps the two pointers, applied to a deterministic state
system A = 2 |> 2
state s : A = {1 -> 0, 0 -> 1}
test S : prep = {s}
transform swap : A -> A = {(0,0)->(1,0),(1,0)->(1,1),(0,1)->(0,0),(1,1)->(0,1)}
test X : chan = {swap}
circuit C = S ; X
eval C @ 0, 0
";

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let model = dsl::load(SRC).map_err(|d| d[0].to_string())?;
    let canonical = dsl::print(&model);
    print!("{canonical}");
    assert_eq!(dsl::load(&canonical).map_err(|d| d[0].to_string())?, model);
    for r in dsl::execute(&model)? {
        println!("{r}");
    }

    // diagnostics carry a position and the tokens that would have fit
    if let Err(diags) = dsl::parse("system A = 2 |> \nstate r : A = {0 -> 1}") {
        for d in diags {
            println!("{d}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("dsl example");
}
