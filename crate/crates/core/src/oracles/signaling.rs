//! Signaling without interaction through a shared deterministic state.

use super::{alice_tests, enumerate_deterministic_states, EnumCap, OracleError, Result};
use crate::circuit::{Test, TestKind};
use crate::kernel::{marginalize, pair, sum_events, EventKind, StateEvent};
use crate::system::{Factor, SystemType};

/// `ε = Σ_{s,t} α_{s,t} ⊗ α_{t,s}` on `(2▷2)(2▷2)`.
pub fn swap_shared_state() -> StateEvent {
    let sys = SystemType::from_factors(vec![Factor::new(2, 2), Factor::new(2, 2)]);
    let pairs = (0..2).flat_map(|s| (0..2).map(move |t| (s * 2 + t, t * 2 + s)));
    StateEvent::new(sys, pairs).expect("a permutation of the pointers")
}

/// The observation tests `D_v = {a_{v,{j}}}_j`, one per pointer value.
pub fn pointer_tests(sys: &SystemType) -> Vec<Test> {
    alice_tests(sys).1
}

/// Alice's test that tells two of Bob's choices apart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignalingWitness {
    pub bob_choices: (usize, usize),
    pub alice_test: Test,
    pub distributions: (Vec<u8>, Vec<u8>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignalingAnalysis {
    pub shared: StateEvent,
    pub bob_tests: Vec<Test>,
    /// Alice's marginal state for each of Bob's tests.
    pub marginals: Vec<StateEvent>,
    pub witness: Option<SignalingWitness>,
}

fn outcome_distribution(test: &Test, rho: &StateEvent) -> Result<Vec<u8>> {
    test.events()
        .iter()
        .map(|e| {
            let e = e.as_effect().ok_or_else(|| {
                OracleError::Invalid(format!("test {} is not an observation", test.label()))
            })?;
            Ok(pair(e, rho)?)
        })
        .collect()
}

/// Alice's marginals on the first factor of `shared` when Bob performs each
/// test on the second factor, plus a discriminating test on Alice's side when
/// two marginals differ. Candidates for Alice are the pointer tests `D_v`,
/// tried in increasing `v`.
pub fn signaling_witness(shared: &StateEvent, bob_tests: &[Test]) -> Result<SignalingAnalysis> {
    let factors = shared.system().factors();
    if factors.len() != 2 {
        return Err(OracleError::Invalid(format!(
            "shared state must live on exactly two factors, got {}",
            shared.system()
        )));
    }
    if !shared.is_deterministic() {
        return Err(OracleError::Invalid(
            "shared state must be deterministic".into(),
        ));
    }
    let alice = SystemType::from_factors(vec![factors[0]]);
    let bob = SystemType::from_factors(vec![factors[1]]);
    let mut marginals = Vec::with_capacity(bob_tests.len());
    for test in bob_tests {
        if test.kind() != TestKind::Observation || !test.input().matches(&bob) {
            return Err(OracleError::Invalid(format!(
                "Bob's test {} must be an observation test on {bob}",
                test.label()
            )));
        }
        let parts: Vec<EventKind> = test
            .events()
            .iter()
            .map(|e| {
                let e = e.as_effect().expect("observation test");
                marginalize(shared, 1, e).map(EventKind::from)
            })
            .collect::<std::result::Result<_, _>>()?;
        let sum = sum_events(&parts)?;
        let state = sum
            .as_state()
            .expect("sum of states")
            .reshape(alice.clone())?;
        marginals.push(state);
    }
    let candidates = pointer_tests(&alice);
    let mut witness = None;
    'search: for i in 0..marginals.len() {
        for j in i + 1..marginals.len() {
            if marginals[i] == marginals[j] {
                continue;
            }
            for test in &candidates {
                let a = outcome_distribution(test, &marginals[i])?;
                let b = outcome_distribution(test, &marginals[j])?;
                if a != b {
                    witness = Some(SignalingWitness {
                        bob_choices: (i, j),
                        alice_test: test.clone(),
                        distributions: (a, b),
                    });
                    break 'search;
                }
            }
        }
    }
    Ok(SignalingAnalysis {
        shared: shared.clone(),
        bob_tests: bob_tests.to_vec(),
        marginals,
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignalingTranscript {
    pub analysis: SignalingAnalysis,
    pub lines: Vec<String>,
}

fn show_test(t: &Test) -> String {
    let events: Vec<String> = t.events().iter().map(ToString::to_string).collect();
    format!("{} = {{{}}}", t.label(), events.join(", "))
}

fn tuple(v: &[u8]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Bob's remote choice between `D_0` and `D_1` on the shared state `ε`
/// changes Alice's marginal, and Alice's `D_0` reveals it.
pub fn signaling_demo() -> Result<SignalingTranscript> {
    let shared = swap_shared_state();
    let b = SystemType::new(2, 2);
    let bob = pointer_tests(&b);
    let analysis = signaling_witness(&shared, &bob)?;
    let mut lines = vec![
        format!(
            "shared state on {}: ε = Σ_st α_(s,t) ⊗ α_(t,s) = {}",
            shared.system(),
            shared
        ),
        "Bob holds the second factor and chooses one of:".to_string(),
    ];
    lines.extend(bob.iter().map(|t| format!("  {}", show_test(t))));
    for (test, marginal) in bob.iter().zip(&analysis.marginals) {
        let h: Vec<String> = marginal
            .values()
            .iter()
            .map(|v| v.map_or("-".into(), |x| x.to_string()))
            .collect();
        lines.push(format!(
            "if Bob performs {}, Alice's marginal is {} (ε_h with h = [{}])",
            test.label(),
            marginal,
            h.join(", ")
        ));
    }
    match &analysis.witness {
        Some(w) => {
            lines.push(format!("Alice performs {}", show_test(&w.alice_test)));
            lines.push(format!(
                "  outcome probabilities {} if Bob chose {}, {} if Bob chose {}",
                tuple(&w.distributions.0),
                bob[w.bob_choices.0].label(),
                tuple(&w.distributions.1),
                bob[w.bob_choices.1].label()
            ));
            lines.push(format!(
                "Alice reads Bob's choice with {} although no system travelled between them: signaling without interaction",
                w.alice_test.label()
            ));
        }
        None => lines.push("Alice's marginal does not depend on Bob's choice".to_string()),
    }
    Ok(SignalingTranscript { analysis, lines })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignalingScan {
    pub a: SystemType,
    pub b: SystemType,
    pub states: usize,
    /// Deterministic shared states whose marginal depends on Bob's pointer test.
    pub signaling: Vec<StateEvent>,
}

impl SignalingScan {
    pub fn contains(&self, state: &StateEvent) -> bool {
        self.signaling.iter().any(|s| s.values() == state.values())
    }
}

/// Runs [`signaling_witness`] with Bob's pointer tests over every deterministic state of `a ⊗ b`.
pub fn signaling_scan(a: &SystemType, b: &SystemType, cap: EnumCap) -> Result<SignalingScan> {
    let composite =
        SystemType::from_factors(vec![Factor::new(a.n(), a.m()), Factor::new(b.n(), b.m())]);
    let states = enumerate_deterministic_states(&composite, cap)?;
    let bob = pointer_tests(b);
    let mut signaling = Vec::new();
    for s in &states {
        if signaling_witness(s, &bob)?.witness.is_some() {
            signaling.push(s.clone());
        }
    }
    Ok(SignalingScan {
        a: a.clone(),
        b: b.clone(),
        states: states.len(),
        signaling,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::compose_par;

    fn s22() -> SystemType {
        SystemType::new(2, 2)
    }

    #[test]
    fn shared_state_is_the_sum_of_swapped_products() {
        let parts: Vec<EventKind> = (0..2)
            .flat_map(|s| (0..2).map(move |t| (s, t)))
            .map(|(s, t)| {
                compose_par(
                    &StateEvent::atomic(s22(), s, t).unwrap().into(),
                    &StateEvent::atomic(s22(), t, s).unwrap().into(),
                )
            })
            .collect();
        let sum = sum_events(&parts).unwrap();
        assert_eq!(
            sum.as_state().unwrap().values(),
            swap_shared_state().values()
        );
    }

    #[test]
    fn demo_marginals() {
        let t = signaling_demo().unwrap();
        let h0 = StateEvent::deterministic(s22(), &[0, 0]).unwrap();
        let h1 = StateEvent::deterministic(s22(), &[1, 1]).unwrap();
        assert_eq!(t.analysis.marginals, vec![h0, h1]);
        let w = t.analysis.witness.unwrap();
        assert_eq!(w.alice_test.label(), "D0");
        assert_eq!(w.distributions, (vec![1, 0], vec![0, 1]));
    }

    #[test]
    fn product_states_do_not_signal() {
        let sigma = StateEvent::deterministic(s22(), &[1, 0]).unwrap();
        let tau = StateEvent::deterministic(s22(), &[0, 1]).unwrap();
        let joint = compose_par(&sigma.clone().into(), &tau.into());
        let a = signaling_witness(joint.as_state().unwrap(), &pointer_tests(&s22())).unwrap();
        assert!(a.witness.is_none());
        assert!(a.marginals.iter().all(|m| *m == sigma));
    }

    #[test]
    fn scan_finds_the_shared_state() {
        let scan = signaling_scan(&s22(), &s22(), EnumCap::default()).unwrap();
        assert_eq!(scan.states, 256);
        assert!(scan.contains(&swap_shared_state()));
        assert!(!scan.signaling.is_empty() && scan.signaling.len() < 256);
    }
}
