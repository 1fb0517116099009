use super::{
    enumerate_deterministic_effects, enumerate_observation_tests, enumerate_preparation_tests,
    EnumCap, Result, TheoryReport, Verdict,
};
use crate::circuit::{Circuit, NodeId, Outcomes, Test, TestKind};
use crate::kernel::{EffectEvent, StateEvent};
use crate::system::SystemType;

/// The causal condition with outcome-probability evidence: a preparation test
/// and two observation tests such that some preparation outcome's probability
/// depends on which observation is performed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CausalityWitness {
    pub preparation: Test,
    pub observations: [Test; 2],
    /// `probabilities[i][k]` = probability of preparation outcome `i` when
    /// observation `k` is performed.
    pub probabilities: Vec<[u64; 2]>,
}

impl CausalityWitness {
    /// First preparation outcome whose probability differs between the two observations.
    pub fn differing_outcome(&self) -> Option<usize> {
        self.probabilities.iter().position(|p| p[0] != p[1])
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![format!(
            "preparation {} = {{{}}}",
            self.preparation.label(),
            join(self.preparation.events())
        )];
        for obs in &self.observations {
            out.push(format!(
                "observation {} = {{{}}}",
                obs.label(),
                join(obs.events())
            ));
        }
        for (i, p) in self.probabilities.iter().enumerate() {
            out.push(format!(
                "P({}_{i} | {}) = {}    P({}_{i} | {}) = {}",
                self.preparation.label(),
                self.observations[0].label(),
                p[0],
                self.preparation.label(),
                self.observations[1].label(),
                p[1]
            ));
        }
        out
    }
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CausalityVerdict {
    pub system: SystemType,
    pub deterministic_effects: Vec<EffectEvent>,
    pub causal: bool,
    pub witness: Option<CausalityWitness>,
}

impl CausalityVerdict {
    pub fn report(&self) -> TheoryReport {
        let report = TheoryReport::new(
            "causality",
            vec![self.system.to_string()],
            Verdict::from_bool(self.causal),
            self.deterministic_effects.len() as u128,
        )
        .fact("deterministic_effects", self.deterministic_effects.len())
        .fact(
            "deterministic_effect_list",
            self.deterministic_effects
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>(),
        );
        match &self.witness {
            Some(w) => report
                .fact("probabilities", &w.probabilities)
                .with_witness(w.lines()),
            None => report,
        }
    }
}

/// Causal iff the deterministic effect is unique, which happens iff `n = 1`.
pub fn is_causal(sys: &SystemType) -> bool {
    enumerate_deterministic_effects(sys).len() == 1
}

/// The preparation test `{α_{f,{i}}}_i` with `f ≡ 1 mod m` and the observation
/// tests `D_v = {a_{v,{j}}}_j`, one per pointer value.
pub fn alice_tests(sys: &SystemType) -> (Test, Vec<Test>) {
    let value = 1 % sys.m();
    let prep = Test::with_kind(
        "P",
        TestKind::Preparation,
        (0..sys.n())
            .map(|i| {
                StateEvent::new(sys.clone(), [(i, value)])
                    .expect("in range")
                    .into()
            })
            .collect(),
    )
    .expect("the parts of ε_f form a test");
    let obs = (0..sys.n())
        .map(|v| {
            Test::with_kind(
                format!("D{v}"),
                TestKind::Observation,
                (0..sys.m())
                    .map(|j| {
                        EffectEvent::atomic(sys.clone(), v, j)
                            .expect("in range")
                            .into()
                    })
                    .collect(),
            )
            .expect("the parts of e_v form a test")
        })
        .collect();
    (prep, obs)
}

/// A preparation test wired into an observation test.
pub fn alice_circuit(prep: &Test, obs: &Test) -> (Circuit, NodeId, NodeId) {
    let mut c = Circuit::new();
    let p = c.add_test(prep.clone());
    let o = c.add_test(obs.clone());
    for port in 0..prep.output().factors().len() {
        c.wire(p, port, o, port);
    }
    (c, p, o)
}

fn preparation_marginals(prep: &Test, obs: &Test) -> Result<Vec<u64>> {
    let (c, p, _) = alice_circuit(prep, obs);
    let dist = c.joint_distribution()?;
    Ok((0..prep.len())
        .map(|i| dist.marginal(&Outcomes::from([(p, i)])))
        .collect())
}

fn witness_for(prep: &Test, a: &Test, b: &Test) -> Result<Option<CausalityWitness>> {
    let pa = preparation_marginals(prep, a)?;
    let pb = preparation_marginals(prep, b)?;
    if pa == pb {
        return Ok(None);
    }
    Ok(Some(CausalityWitness {
        preparation: prep.clone(),
        observations: [a.clone(), b.clone()],
        probabilities: pa.into_iter().zip(pb).map(|(x, y)| [x, y]).collect(),
    }))
}

/// Decides causality and, when it fails, builds the witness from the two
/// lowest pointer tests `D_0` and `D_1`; the probabilities are computed by
/// circuit evaluation, not assumed.
pub fn check_causality(sys: &SystemType) -> Result<CausalityVerdict> {
    let det = enumerate_deterministic_effects(sys);
    let causal = det.len() == 1;
    let witness = if causal {
        None
    } else {
        let (prep, obs) = alice_tests(sys);
        witness_for(&prep, &obs[0], &obs[1])?
    };
    Ok(CausalityVerdict {
        system: sys.clone(),
        deterministic_effects: det,
        causal,
        witness,
    })
}

/// Searches every (preparation test, observation test, observation test)
/// triple of nonzero-event tests for a causality violation.
pub fn search_causality_witness(
    sys: &SystemType,
    cap: EnumCap,
) -> Result<Option<CausalityWitness>> {
    let preps = enumerate_preparation_tests(sys, cap)?;
    let obs = enumerate_observation_tests(sys, cap)?;
    for prep in &preps {
        let marginals: Vec<Vec<u64>> = obs
            .iter()
            .map(|o| preparation_marginals(prep, o))
            .collect::<Result<_>>()?;
        for i in 0..obs.len() {
            for j in i + 1..obs.len() {
                if marginals[i] != marginals[j] {
                    return witness_for(prep, &obs[i], &obs[j]);
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_is_not_causal() {
        let v = check_causality(&SystemType::new(2, 2)).unwrap();
        assert!(!v.causal);
        let w = v.witness.unwrap();
        assert_eq!(w.probabilities, vec![[1, 0], [0, 1]]);
        assert_eq!(w.differing_outcome(), Some(0));
    }

    #[test]
    fn single_pointer_is_causal() {
        for m in 1..=3 {
            let sys = SystemType::new(1, m);
            assert!(is_causal(&sys));
            assert!(check_causality(&sys).unwrap().witness.is_none());
            assert!(search_causality_witness(&sys, EnumCap::default())
                .unwrap()
                .is_none());
        }
    }

    #[test]
    fn search_agrees_with_verdict() {
        for n in 1..=3 {
            for m in 1..=2 {
                let sys = SystemType::new(n, m);
                let found = search_causality_witness(&sys, EnumCap::default()).unwrap();
                assert_eq!(found.is_some(), !is_causal(&sys), "{sys}");
            }
        }
    }
}
