//! Random closed circuits of tests, for the randomized part of the determinism sweep.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::circuit::{Circuit, NodeId, Payload, PortRef, Test, TestKind};
use crate::kernel::{Branch, EffectEvent, EventKind, StateEvent, TransformationEvent};
use crate::system::SystemType;

use super::partition_event;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomCircuitConfig {
    pub max_nodes: usize,
    pub max_n: usize,
    pub max_m: usize,
    pub max_outcomes: usize,
}

impl Default for RandomCircuitConfig {
    fn default() -> Self {
        RandomCircuitConfig {
            max_nodes: 6,
            max_n: 3,
            max_m: 3,
            max_outcomes: 3,
        }
    }
}

pub fn random_system<R: Rng>(rng: &mut R, cfg: &RandomCircuitConfig) -> SystemType {
    SystemType::new(rng.gen_range(1..=cfg.max_n), rng.gen_range(1..=cfg.max_m))
}

/// A uniformly chosen deterministic event `input → output`.
pub fn random_deterministic<R: Rng>(
    rng: &mut R,
    input: &SystemType,
    output: &SystemType,
) -> EventKind {
    if input.is_trivial() {
        let f: Vec<usize> = (0..output.n())
            .map(|_| rng.gen_range(0..output.m()))
            .collect();
        StateEvent::deterministic(output.clone(), &f)
            .expect("in range")
            .into()
    } else if output.is_trivial() {
        EffectEvent::deterministic(input.clone(), rng.gen_range(0..input.n()))
            .expect("in range")
            .into()
    } else {
        let branches = (0..output.n())
            .map(|_| {
                Some(Branch {
                    anchor: rng.gen_range(0..input.n()),
                    targets: (0..input.m())
                        .map(|_| Some(rng.gen_range(0..output.m())))
                        .collect(),
                })
            })
            .collect();
        TransformationEvent::from_branches(input.clone(), output.clone(), branches)
            .expect("in range")
            .into()
    }
}

/// A random test: a random deterministic event split into at most
/// `max_outcomes` nonempty parts.
pub fn random_test<R: Rng>(
    rng: &mut R,
    label: &str,
    input: &SystemType,
    output: &SystemType,
    max_outcomes: usize,
) -> Test {
    let det = random_deterministic(rng, input, output);
    let support = det.as_vector().iter().filter(|&&x| x == 1).count();
    let parts = rng.gen_range(1..=max_outcomes.min(support).max(1));
    let raw: Vec<usize> = (0..support).map(|_| rng.gen_range(0..parts)).collect();
    // Renumber blocks by first appearance so no block is empty.
    let mut names = Vec::new();
    let blocks: Vec<usize> = raw
        .iter()
        .map(|b| match names.iter().position(|x| x == b) {
            Some(k) => k,
            None => {
                names.push(*b);
                names.len() - 1
            }
        })
        .collect();
    let kind = match (input.is_trivial(), output.is_trivial()) {
        (true, _) => TestKind::Preparation,
        (false, true) => TestKind::Observation,
        _ => TestKind::Transformation,
    };
    let events = if support == 0 {
        vec![det]
    } else {
        partition_event(&det, &blocks)
    };
    Test::with_kind(label, kind, events).expect("parts of a deterministic event form a test")
}

fn product(ports: &[SystemType]) -> SystemType {
    ports
        .iter()
        .fold(SystemType::trivial(), |a, p| a.compose(p))
}

/// A random closed circuit of tests with at most `cfg.max_nodes` nodes. Nodes
/// take one or two open wires as inputs and produce zero, one or two wires.
pub fn random_circuit<R: Rng>(rng: &mut R, cfg: &RandomCircuitConfig) -> Circuit {
    let mut c = Circuit::new();
    let mut open: Vec<(PortRef, SystemType)> = Vec::new();
    let add = |c: &mut Circuit,
               rng: &mut R,
               open: &mut Vec<(PortRef, SystemType)>,
               inputs: Vec<(PortRef, SystemType)>,
               outputs: Vec<SystemType>| {
        let label = format!("N{}", c.nodes().len());
        let in_ports: Vec<SystemType> = inputs.iter().map(|(_, s)| s.clone()).collect();
        let test = random_test(
            rng,
            &label,
            &product(&in_ports),
            &product(&outputs),
            cfg.max_outcomes,
        );
        let id: NodeId = c
            .add_node_with_ports(label, Payload::Test(test), in_ports, outputs.clone())
            .expect("ports multiply to the test systems");
        for (k, (from, _)) in inputs.into_iter().enumerate() {
            c.connect(from, PortRef::new(id, k));
        }
        for (k, s) in outputs.into_iter().enumerate() {
            open.push((PortRef::new(id, k), s));
        }
    };

    let budget = rng.gen_range(2..=cfg.max_nodes.max(2));
    loop {
        let used = c.nodes().len();
        // Closing needs at least ceil(open/2) observation nodes.
        let closing = open.len().div_ceil(2);
        let room = budget.saturating_sub(used + closing);
        if open.is_empty() && used + 2 > budget {
            break;
        }
        if room == 0 && !open.is_empty() {
            break;
        }
        let take = if open.is_empty() {
            0
        } else {
            rng.gen_range(0..=open.len().min(2))
        };
        let produce = rng.gen_range(if take == 0 { 1 } else { 0 }..=2);
        // Keep enough room to close whatever is open afterwards.
        let after_open = open.len() - take + produce;
        if used + 1 + after_open.div_ceil(2) > budget {
            if open.is_empty() {
                break;
            }
            continue;
        }
        open.shuffle(rng);
        let inputs: Vec<(PortRef, SystemType)> = open.drain(..take).collect();
        let outputs: Vec<SystemType> = (0..produce).map(|_| random_system(rng, cfg)).collect();
        add(&mut c, rng, &mut open, inputs, outputs);
        if rng.gen_bool(0.2) {
            break;
        }
    }
    while !open.is_empty() {
        let take = if open.len() >= 2
            && (rng.gen_bool(0.5) || c.nodes().len() + open.len() > cfg.max_nodes)
        {
            2
        } else {
            1
        };
        let inputs: Vec<(PortRef, SystemType)> = open.drain(..take).collect();
        add(&mut c, rng, &mut open, inputs, Vec::new());
    }
    c
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn circuits_are_closed_and_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cfg = RandomCircuitConfig::default();
        for _ in 0..300 {
            let c = random_circuit(&mut rng, &cfg);
            assert!(c.typecheck().is_ok());
            assert!(c.is_closed());
            assert!(
                c.nodes().len() <= cfg.max_nodes,
                "{} nodes",
                c.nodes().len()
            );
            assert!(!c.nodes().is_empty());
        }
    }
}
