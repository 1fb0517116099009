//! Bounded verification that closed circuits only produce probabilities 0 and 1.
//!
//! Three independent routes are combined:
//!
//! * a literal sweep that builds every chain `prep → (chan) → obs` as a
//!   circuit and evaluates its full joint distribution through the kernel,
//!   cross-checked entry by entry against the dense integer contractor;
//! * an exact quotient for longer chains: the joint distribution of
//!   `prep → T_1 → … → T_d → obs` only depends on the multiset of nonzero
//!   integer vectors `T_{j_d}…T_{j_1} ρ_i`, so chains are explored level by
//!   level over distinct multisets, with circuit counts carried along;
//! * random wider circuits evaluated both ways.

use std::collections::{BTreeMap, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::dense::dense_joint;
use super::random::{random_circuit, RandomCircuitConfig};
use super::{
    enumerate_channel_tests, enumerate_observation_tests, enumerate_preparation_tests, EnumCap,
    Result, TheoryReport, Verdict,
};
use crate::circuit::{Circuit, Test};
use crate::system::SystemType;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeterminismConfig {
    /// Maximum number of transformation tests in the exhaustive chains.
    pub depth: usize,
    /// Chains up to this depth are also built and evaluated one by one.
    pub literal_depth: usize,
    pub random_circuits: usize,
    pub seed: u64,
    pub random: RandomCircuitConfig,
}

impl Default for DeterminismConfig {
    fn default() -> Self {
        DeterminismConfig {
            depth: 3,
            literal_depth: 1,
            random_circuits: 10_000,
            seed: 0,
            random: RandomCircuitConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminismOutcome {
    pub system: SystemType,
    pub depth: usize,
    pub preparation_tests: usize,
    pub channel_tests: usize,
    pub observation_tests: usize,
    /// Chains evaluated circuit by circuit.
    pub literal_circuits: u128,
    /// All chains of length `0..=depth` covered by the quotient sweep.
    pub chain_circuits: u128,
    /// Distinct outcome-vector multisets per depth.
    pub classes_per_depth: Vec<usize>,
    pub random_circuits: usize,
    pub random_tuples: u128,
    pub failures: Vec<String>,
}

impl DeterminismOutcome {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn report(&self) -> TheoryReport {
        TheoryReport::new(
            "determinism",
            vec![self.system.to_string()],
            Verdict::from_bool(self.holds()),
            self.chain_circuits + self.random_circuits as u128,
        )
        .fact("depth", self.depth)
        .fact("preparation_tests", self.preparation_tests)
        .fact("channel_tests", self.channel_tests)
        .fact("observation_tests", self.observation_tests)
        .fact("literal_circuits", self.literal_circuits)
        .fact("chain_circuits", self.chain_circuits)
        .fact("classes_per_depth", &self.classes_per_depth)
        .fact("random_circuits", self.random_circuits)
        .fact("random_outcome_tuples", self.random_tuples)
        .with_witness(self.failures.iter().take(8).cloned().collect())
        .note("closed circuits are infinitely many; chains prep -> chan^d -> obs are covered exhaustively up to the depth, wider shapes by random sampling")
    }
}

/// Checks one integer joint distribution: entries in {0,1}, exactly one unit.
fn distribution_ok(values: impl IntoIterator<Item = i64>) -> bool {
    let mut units = 0;
    for v in values {
        match v {
            0 => {}
            1 => units += 1,
            _ => return false,
        }
    }
    units == 1
}

type Vector = Vec<i64>;
type Multiset = Vec<Vector>;

fn dense_matrix(event: &crate::kernel::EventKind) -> (usize, usize, Vec<i64>) {
    let (rows, cols) = (event.input().dim(), event.output().dim());
    (
        rows,
        cols,
        event.as_vector().into_iter().map(i64::from).collect(),
    )
}

fn apply_dense(matrix: &(usize, usize, Vec<i64>), v: &[i64]) -> Vector {
    let (rows, cols, entries) = matrix;
    let mut out = vec![0; *cols];
    for r in 0..*rows {
        if v[r] != 0 {
            for c in 0..*cols {
                out[c] += v[r] * entries[r * cols + c];
            }
        }
    }
    out
}

fn canonical(mut set: Multiset) -> Multiset {
    set.retain(|v| v.iter().any(|&x| x != 0));
    set.sort();
    set
}

/// The outcome probabilities of a chain ending in `obs`, given the surviving vectors.
fn close_with(set: &Multiset, obs: &[(usize, usize, Vec<i64>)]) -> Vec<i64> {
    set.iter()
        .flat_map(|v| obs.iter().map(move |e| apply_dense(e, v)[0]))
        .collect()
}

fn literal_chain_ok(
    prep: &Test,
    middle: Option<&Test>,
    obs: &Test,
) -> std::result::Result<u128, String> {
    let mut chain = vec![prep];
    chain.extend(middle);
    chain.push(obs);
    check_circuit(&chain_circuit(&chain))
}

/// Tests wired one after the other, port by port.
pub fn chain_circuit(tests: &[&Test]) -> Circuit {
    let mut c = Circuit::new();
    let ids: Vec<_> = tests.iter().map(|t| c.add_test((*t).clone())).collect();
    for (k, pair) in ids.windows(2).enumerate() {
        for port in 0..tests[k].output().factors().len() {
            c.wire(pair[0], port, pair[1], port);
        }
    }
    c
}

/// Kernel joint distribution versus dense contraction; returns the number of tuples.
fn check_circuit(circuit: &Circuit) -> std::result::Result<u128, String> {
    let kernel = circuit.joint_distribution().map_err(|e| e.to_string())?;
    let dense = dense_joint(circuit).map_err(|e| e.to_string())?;
    let tuples = kernel.entries.len() as u128;
    if !distribution_ok(dense.values().copied()) {
        return Err(format!(
            "dense joint distribution not 0/1 normalized: {dense:?}"
        ));
    }
    for (tuple, &p) in &kernel.entries {
        if dense.get(tuple).copied().unwrap_or(0) != p as i64 {
            return Err(format!("kernel and dense disagree at {tuple:?}"));
        }
    }
    if kernel.unit_entries() != 1 || kernel.total() != 1 {
        return Err("kernel joint distribution does not have exactly one unit entry".into());
    }
    Ok(tuples)
}

pub fn check_determinism(
    sys: &SystemType,
    cfg: &DeterminismConfig,
    cap: EnumCap,
) -> Result<DeterminismOutcome> {
    let preps = enumerate_preparation_tests(sys, cap)?;
    let chans = if cfg.depth > 0 {
        enumerate_channel_tests(sys, sys, cap)?
    } else {
        Vec::new()
    };
    let obs = enumerate_observation_tests(sys, cap)?;
    let mut failures = Vec::new();

    // Literal sweep.
    let literal_depth = cfg.literal_depth.min(cfg.depth).min(1);
    let literal_count = (preps.len() * obs.len()) as u128
        * (1 + if literal_depth == 1 {
            chans.len() as u128
        } else {
            0
        });
    cap.check(|| format!("literal circuits on {sys}"), literal_count)?;
    let mut middles: Vec<Option<&Test>> = vec![None];
    if literal_depth == 1 {
        middles.extend(chans.iter().map(Some));
    }
    let obs_ref = &obs;
    let middles_ref = &middles;
    let literal_failures: Vec<String> = preps
        .par_iter()
        .flat_map_iter(|p| {
            middles_ref.iter().flat_map(move |mid| {
                obs_ref.iter().filter_map(move |o| {
                    literal_chain_ok(p, *mid, o).err().map(|e| {
                        format!(
                            "{} -> {} -> {}: {e}",
                            p.label(),
                            mid.map_or("-", |t| t.label()),
                            o.label()
                        )
                    })
                })
            })
        })
        .collect();
    failures.extend(literal_failures);

    // Quotient sweep.
    let chan_mats: Vec<Vec<(usize, usize, Vec<i64>)>> = chans
        .iter()
        .map(|t| t.events().iter().map(dense_matrix).collect())
        .collect();
    let obs_mats: Vec<Vec<(usize, usize, Vec<i64>)>> = obs
        .iter()
        .map(|t| t.events().iter().map(dense_matrix).collect())
        .collect();
    let mut level: HashMap<Multiset, u128> = HashMap::new();
    for p in &preps {
        let set = p.events().iter().map(|e| dense_matrix(e).2).collect();
        *level.entry(canonical(set)).or_insert(0) += 1;
    }
    let mut chain_circuits = 0u128;
    let mut classes = Vec::new();
    for d in 0..=cfg.depth {
        classes.push(level.len());
        let mut sorted: Vec<(&Multiset, &u128)> = level.iter().collect();
        sorted.sort();
        for (set, &count) in &sorted {
            for (k, o) in obs_mats.iter().enumerate() {
                chain_circuits += count;
                if !distribution_ok(close_with(set, o)) {
                    failures.push(format!(
                        "depth {d}: class {set:?} closed by {} not 0/1 normalized",
                        obs[k].label()
                    ));
                }
            }
        }
        if d == cfg.depth {
            break;
        }
        let next: Vec<(Multiset, u128)> = sorted
            .par_iter()
            .flat_map_iter(|(set, &count)| {
                chan_mats.iter().map(move |events| {
                    let image = set
                        .iter()
                        .flat_map(|v| events.iter().map(move |e| apply_dense(e, v)))
                        .collect();
                    (canonical(image), count)
                })
            })
            .collect();
        let mut merged: HashMap<Multiset, u128> = HashMap::new();
        for (set, count) in next {
            *merged.entry(set).or_insert(0) += count;
        }
        level = merged;
    }

    // Random wider circuits.
    let random_results: Vec<std::result::Result<u128, String>> = (0..cfg.random_circuits)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(
                cfg.seed
                    .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                    .wrapping_add(k as u64),
            );
            let c = random_circuit(&mut rng, &cfg.random);
            check_circuit(&c).map_err(|e| format!("random circuit {k}: {e}"))
        })
        .collect();
    let mut random_tuples = 0;
    for r in random_results {
        match r {
            Ok(t) => random_tuples += t,
            Err(e) => failures.push(e),
        }
    }

    Ok(DeterminismOutcome {
        system: sys.clone(),
        depth: cfg.depth,
        preparation_tests: preps.len(),
        channel_tests: chans.len(),
        observation_tests: obs.len(),
        literal_circuits: literal_count,
        chain_circuits,
        classes_per_depth: classes,
        random_circuits: cfg.random_circuits,
        random_tuples,
        failures,
    })
}

/// Joint distribution of two closed circuits placed side by side, for the
/// product rule of independent closed circuits.
pub fn side_by_side(a: &Circuit, b: &Circuit) -> Circuit {
    let mut c = Circuit::new();
    let mut maps = Vec::new();
    for part in [a, b] {
        let mut map = BTreeMap::new();
        for n in part.nodes() {
            let id = c
                .add_node_with_ports(
                    n.label.clone(),
                    n.payload.clone(),
                    n.inputs.clone(),
                    n.outputs.clone(),
                )
                .expect("ports valid");
            map.insert(n.id, id);
        }
        for w in part.wires() {
            c.wire(map[&w.from.node], w.from.port, map[&w.to.node], w.to.port);
        }
        maps.push(map);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Outcomes;
    use crate::oracles::{alice_circuit, alice_tests};

    #[test]
    fn small_sweep_holds() {
        let cfg = DeterminismConfig {
            depth: 2,
            literal_depth: 1,
            random_circuits: 50,
            seed: 3,
            random: RandomCircuitConfig::default(),
        };
        let out = check_determinism(&SystemType::new(1, 2), &cfg, EnumCap::default()).unwrap();
        assert!(out.holds(), "{:?}", out.failures);
        // 2 prep tests, 2 obs tests; channels 1▷2→1▷2: 4, tests 4 * Bell(2)
        assert_eq!(out.channel_tests, 8);
        assert_eq!(out.chain_circuits, 2 * 2 * (1 + 8 + 64));
    }

    #[test]
    fn broken_distribution_detected() {
        assert!(distribution_ok([0, 1, 0]));
        assert!(!distribution_ok([0, 0]));
        assert!(!distribution_ok([1, 1]));
        assert!(!distribution_ok([2, -1]));
    }

    #[test]
    fn closed_circuits_multiply() {
        let sys = SystemType::new(2, 2);
        let (prep, obs) = alice_tests(&sys);
        let a = alice_circuit(&prep, &obs[0]).0;
        let b = alice_circuit(&prep, &obs[1]).0;
        let both = side_by_side(&a, &b);
        let ja = a.joint_distribution().unwrap();
        let jb = b.joint_distribution().unwrap();
        let jab = both.joint_distribution().unwrap();
        for (ta, pa) in &ja.entries {
            for (tb, pb) in &jb.entries {
                let tuple: Vec<usize> = ta.iter().chain(tb).copied().collect();
                assert_eq!(jab.entries[&tuple], pa * pb);
            }
        }
        let ids = both.test_nodes();
        let fixed = Outcomes::from([(ids[0], 0), (ids[2], 1)]);
        assert_eq!(both.marginal_probability(&fixed).unwrap(), 1);
    }
}
