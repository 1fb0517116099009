//! Exact contraction of circuits.
//!
//! Evaluation sweeps the nodes in topological order while keeping a single
//! frontier state over the currently open wires. Each node permutes the
//! wires it consumes to the front and acts on them with `T ⊗ I`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use super::graph::{Circuit, NodeId, Payload, PortRef, Wire, WiringError};
use super::Test;
use crate::kernel::{
    apply_leading, sum_events, BoolMatrix, EventKind, KernelError, StateEvent, TransformationEvent,
};
use crate::system::{Factor, SystemType};

/// Chosen outcome per test node.
pub type Outcomes = BTreeMap<NodeId, usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("circuit does not typecheck: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Wiring(Vec<WiringError>),
    #[error("circuit is open ({inputs} dangling inputs, {outputs} dangling outputs)")]
    Open { inputs: usize, outputs: usize },
    #[error("no outcome given for test node {0}")]
    MissingOutcome(NodeId),
    #[error("outcome {outcome} out of range for node {node} with {count} outcomes")]
    OutcomeOutOfRange {
        node: NodeId,
        outcome: usize,
        count: usize,
    },
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("node {0} is not a test")]
    NotATest(NodeId),
    #[error("invalid evaluation order: {0}")]
    BadOrder(String),
    #[error("invalid boundary: {0}")]
    BadBoundary(String),
    #[error("replacement for node {node} does not fit: {detail}")]
    BadReplacement { node: NodeId, detail: String },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

pub type Result<T> = std::result::Result<T, EvalError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Slot {
    /// Wire leaving an output port.
    Out(PortRef),
    /// Dangling input port fed from the overall input.
    In(PortRef),
}

struct Frontier {
    slots: Vec<Slot>,
    state: StateEvent,
}

fn wire_factor(system: &SystemType) -> Factor {
    Factor::new(system.n(), system.m())
}

/// The full outcome table of a closed circuit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Distribution {
    /// Test nodes in increasing id order; tuple positions follow this order.
    pub tests: Vec<NodeId>,
    pub entries: BTreeMap<Vec<usize>, u8>,
}

impl Distribution {
    pub fn total(&self) -> u64 {
        self.entries.values().map(|&p| p as u64).sum()
    }

    pub fn unit_entries(&self) -> usize {
        self.entries.values().filter(|&&p| p == 1).count()
    }

    /// The unique outcome tuple with probability one, if there is exactly one.
    pub fn certain_outcome(&self) -> Option<&[usize]> {
        let mut units = self.entries.iter().filter(|(_, &p)| p == 1);
        let first = units.next()?;
        units.next().is_none().then_some(first.0.as_slice())
    }

    /// Sum over all tuples agreeing with `fixed`.
    pub fn marginal(&self, fixed: &Outcomes) -> u64 {
        let positions: Vec<(usize, usize)> = self
            .tests
            .iter()
            .enumerate()
            .filter_map(|(k, id)| fixed.get(id).map(|&o| (k, o)))
            .collect();
        self.entries
            .iter()
            .filter(|(tuple, _)| positions.iter().all(|&(k, o)| tuple[k] == o))
            .map(|(_, &p)| p as u64)
            .sum()
    }

    /// Marginal distribution of a single test node's outcomes.
    pub fn marginal_of(&self, node: NodeId) -> Option<Vec<u64>> {
        let k = self.tests.iter().position(|&id| id == node)?;
        let count = self.entries.keys().map(|t| t[k] + 1).max().unwrap_or(0);
        let mut out = vec![0; count];
        for (tuple, &p) in &self.entries {
            out[tuple[k]] += p as u64;
        }
        Some(out)
    }
}

/// Outcome of a no-backward-signaling check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SignalingVerdict {
    /// The candidate precedes the target, so the condition does not apply.
    Vacuous,
    /// Every replacement leaves the target's marginal unchanged.
    Independent { marginal: Vec<u64> },
    /// Marginals of the target, one per candidate test (original first).
    Dependent { marginals: Vec<Vec<u64>> },
}

impl SignalingVerdict {
    /// `true` unless the target's marginal depends on the candidate's choice.
    pub fn holds(&self) -> bool {
        !matches!(self, SignalingVerdict::Dependent { .. })
    }
}

/// Result of replacing a set of nodes by their contracted normal form.
#[derive(Clone, Debug)]
pub struct Contracted {
    pub circuit: Circuit,
    pub node: NodeId,
    /// Old id to new id for every node outside the contracted set.
    pub id_map: BTreeMap<NodeId, NodeId>,
}

impl Circuit {
    fn event_for(&self, id: NodeId, outcomes: &Outcomes) -> Result<&EventKind> {
        let node = self.node(id).map_err(|_| EvalError::UnknownNode(id))?;
        match &node.payload {
            Payload::Event(e) => Ok(e),
            Payload::Test(t) => {
                let outcome = *outcomes.get(&id).ok_or(EvalError::MissingOutcome(id))?;
                t.event(outcome).ok_or(EvalError::OutcomeOutOfRange {
                    node: id,
                    outcome,
                    count: t.len(),
                })
            }
        }
    }

    fn feeding(&self) -> BTreeMap<PortRef, PortRef> {
        self.wires().iter().map(|w| (w.to, w.from)).collect()
    }

    fn sweep(
        &self,
        order: &[NodeId],
        outcomes: &Outcomes,
        mut frontier: Frontier,
    ) -> Result<Frontier> {
        let feeding = self.feeding();
        for &id in order {
            let node = self.node(id).map_err(|_| EvalError::UnknownNode(id))?;
            let event = self.event_for(id, outcomes)?;
            let mut positions = Vec::with_capacity(node.inputs.len());
            for port in 0..node.inputs.len() {
                let here = PortRef::new(id, port);
                let slot = match feeding.get(&here) {
                    Some(&from) => Slot::Out(from),
                    None => Slot::In(here),
                };
                let pos = frontier
                    .slots
                    .iter()
                    .position(|&s| s == slot)
                    .ok_or_else(|| {
                        EvalError::BadOrder(format!("input {here} is not available when {id} runs"))
                    })?;
                positions.push(pos);
            }
            let consumed: BTreeSet<usize> = positions.iter().copied().collect();
            let mut perm = positions.clone();
            perm.extend((0..frontier.slots.len()).filter(|k| !consumed.contains(k)));
            let state = frontier.state.permute_factors(&perm)?;
            let applied = apply_leading(&event.to_transformation(), &state, positions.len())?;

            let rest_slots: Vec<Slot> = perm[positions.len()..]
                .iter()
                .map(|&k| frontier.slots[k])
                .collect();
            let mut factors: Vec<Factor> = node.outputs.iter().map(wire_factor).collect();
            factors.extend_from_slice(&state.system().factors()[positions.len()..]);
            let mut slots: Vec<Slot> = (0..node.outputs.len())
                .map(|p| Slot::Out(PortRef::new(id, p)))
                .collect();
            slots.extend(rest_slots);
            frontier = Frontier {
                slots,
                state: applied.reshape(SystemType::from_factors(factors))?,
            };
        }
        Ok(frontier)
    }

    fn checked_order(&self) -> Result<Vec<NodeId>> {
        self.typecheck().map_err(EvalError::Wiring)?;
        Ok(self
            .topological_order()
            .expect("typecheck ensures acyclicity"))
    }

    fn ensure_closed(&self) -> Result<()> {
        let (inputs, outputs) = (self.dangling_inputs().len(), self.dangling_outputs().len());
        if inputs == 0 && outputs == 0 {
            Ok(())
        } else {
            Err(EvalError::Open { inputs, outputs })
        }
    }

    /// Probability of the given outcomes in a closed circuit: exactly 0 or 1.
    pub fn evaluate_closed(&self, outcomes: &Outcomes) -> Result<u8> {
        let order = self.checked_order()?;
        self.ensure_closed()?;
        self.closed_value(&order, outcomes)
    }

    /// As [`Circuit::evaluate_closed`] with a caller-chosen topological order.
    pub fn evaluate_closed_in_order(&self, outcomes: &Outcomes, order: &[NodeId]) -> Result<u8> {
        self.checked_order()?;
        self.ensure_closed()?;
        let ids: BTreeSet<NodeId> = order.iter().copied().collect();
        if ids.len() != order.len() || ids.len() != self.nodes().len() {
            return Err(EvalError::BadOrder("not a permutation of the nodes".into()));
        }
        let rank: BTreeMap<NodeId, usize> =
            order.iter().enumerate().map(|(k, &id)| (id, k)).collect();
        for w in self.wires() {
            match (rank.get(&w.from.node), rank.get(&w.to.node)) {
                (Some(a), Some(b)) if a < b => {}
                _ => return Err(EvalError::BadOrder(format!("wire {w} runs backwards"))),
            }
        }
        self.closed_value(order, outcomes)
    }

    fn closed_value(&self, order: &[NodeId], outcomes: &Outcomes) -> Result<u8> {
        let start = Frontier {
            slots: Vec::new(),
            state: StateEvent::unit(),
        };
        let end = self.sweep(order, outcomes, start)?;
        debug_assert!(end.slots.is_empty());
        Ok(end.state.value(0).is_some() as u8)
    }

    /// Contracts the circuit into a single event. `inputs` and `outputs` must list
    /// every dangling input and output port exactly once; their order fixes the
    /// factor order of the result.
    pub fn evaluate_open(
        &self,
        outcomes: &Outcomes,
        inputs: &[PortRef],
        outputs: &[PortRef],
    ) -> Result<EventKind> {
        let order = self.checked_order()?;
        same_set("inputs", inputs, &self.dangling_inputs())?;
        same_set("outputs", outputs, &self.dangling_outputs())?;

        let in_ports: Vec<SystemType> = inputs
            .iter()
            .map(|&p| self.input_type(p).expect("dangling port exists").clone())
            .collect();
        let out_ports: Vec<SystemType> = outputs
            .iter()
            .map(|&p| self.output_type(p).expect("dangling port exists").clone())
            .collect();
        let in_wires = SystemType::from_factors(in_ports.iter().map(wire_factor).collect());
        let input_system = in_ports
            .iter()
            .fold(SystemType::trivial(), |a, p| a.compose(p));
        let output_system = out_ports
            .iter()
            .fold(SystemType::trivial(), |a, p| a.compose(p));
        let out_slots: Vec<Slot> = outputs.iter().map(|&p| Slot::Out(p)).collect();

        let (m, q) = (in_wires.m(), output_system.m());
        let mut matrix = BoolMatrix::zeros(in_wires.dim(), output_system.dim());
        for s in 0..in_wires.n() {
            for s_prime in 0..m {
                let start = Frontier {
                    slots: inputs.iter().map(|&p| Slot::In(p)).collect(),
                    state: StateEvent::atomic(in_wires.clone(), s, s_prime)?,
                };
                let end = self.sweep(&order, outcomes, start)?;
                let perm: Vec<usize> = out_slots
                    .iter()
                    .map(|slot| {
                        end.slots
                            .iter()
                            .position(|s| s == slot)
                            .expect("output reached")
                    })
                    .collect();
                let state = end.state.permute_factors(&perm)?;
                for (t, t_prime) in state.atoms() {
                    matrix.set(s * m + s_prime, t * q + t_prime, true);
                }
            }
        }
        let t = TransformationEvent::from_matrix(input_system, output_system, &matrix)
            .map_err(KernelError::from)?;
        Ok(EventKind::from_transformation(t))
    }

    /// [`Circuit::evaluate_open`] with dangling ports in increasing `(node, port)` order.
    pub fn evaluate_open_default(&self, outcomes: &Outcomes) -> Result<EventKind> {
        self.evaluate_open(outcomes, &self.dangling_inputs(), &self.dangling_outputs())
    }

    /// Open normal form with the outcomes of unlisted tests summed over.
    pub fn evaluate_open_marginal(&self, fixed: &Outcomes) -> Result<EventKind> {
        let free: Vec<NodeId> = self
            .test_nodes()
            .into_iter()
            .filter(|id| !fixed.contains_key(id))
            .collect();
        let mut events = Vec::new();
        for tuple in self.tuples(&free)? {
            let mut outcomes = fixed.clone();
            outcomes.extend(free.iter().copied().zip(tuple));
            events.push(self.evaluate_open_default(&outcomes)?);
        }
        Ok(sum_events(&events)?)
    }

    fn tuples(&self, tests: &[NodeId]) -> Result<Vec<Vec<usize>>> {
        let mut sizes = Vec::with_capacity(tests.len());
        for &id in tests {
            let node = self.node(id).map_err(|_| EvalError::UnknownNode(id))?;
            sizes.push(
                node.payload
                    .outcome_count()
                    .ok_or(EvalError::NotATest(id))?,
            );
        }
        let mut out = vec![Vec::new()];
        for size in sizes {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..size).map(move |o| {
                        let mut t = prefix.clone();
                        t.push(o);
                        t
                    })
                })
                .collect();
        }
        Ok(out)
    }

    /// Probability of every outcome tuple of the test nodes.
    pub fn joint_distribution(&self) -> Result<Distribution> {
        let order = self.checked_order()?;
        self.ensure_closed()?;
        let tests = self.test_nodes();
        let mut entries = BTreeMap::new();
        for tuple in self.tuples(&tests)? {
            let outcomes: Outcomes = tests.iter().copied().zip(tuple.iter().copied()).collect();
            entries.insert(tuple, self.closed_value(&order, &outcomes)?);
        }
        Ok(Distribution { tests, entries })
    }

    /// Sum of the joint distribution over every tuple consistent with `fixed`.
    pub fn marginal_probability(&self, fixed: &Outcomes) -> Result<u64> {
        for (&id, &o) in fixed {
            let count = self
                .node(id)
                .map_err(|_| EvalError::UnknownNode(id))?
                .payload
                .outcome_count()
                .ok_or(EvalError::NotATest(id))?;
            if o >= count {
                return Err(EvalError::OutcomeOutOfRange {
                    node: id,
                    outcome: o,
                    count,
                });
            }
        }
        Ok(self.joint_distribution()?.marginal(fixed))
    }

    /// Marginal outcome distribution of one test node.
    pub fn marginal_distribution(&self, target: NodeId) -> Result<Vec<u64>> {
        self.joint_distribution()?
            .marginal_of(target)
            .ok_or(EvalError::NotATest(target))
    }

    /// Checks whether `target`'s marginal is unchanged when `candidate` is
    /// replaced by each test in `family`. Skipped when `candidate ≺ target`.
    pub fn no_backward_signaling_check(
        &self,
        target: NodeId,
        candidate: NodeId,
        family: &[Test],
    ) -> Result<SignalingVerdict> {
        let node = self
            .node(candidate)
            .map_err(|_| EvalError::UnknownNode(candidate))?;
        node.payload
            .as_test()
            .ok_or(EvalError::NotATest(candidate))?;
        if self
            .precedes(candidate, target)
            .map_err(|_| EvalError::UnknownNode(target))?
        {
            return Ok(SignalingVerdict::Vacuous);
        }
        let mut marginals = vec![self.marginal_distribution(target)?];
        for test in family {
            let mut variant = self.clone();
            variant
                .replace_payload(candidate, Payload::Test(test.clone()))
                .map_err(|e| EvalError::BadReplacement {
                    node: candidate,
                    detail: e.to_string(),
                })?;
            marginals.push(variant.marginal_distribution(target)?);
        }
        if marginals.windows(2).all(|w| w[0] == w[1]) {
            Ok(SignalingVerdict::Independent {
                marginal: marginals.swap_remove(0),
            })
        } else {
            Ok(SignalingVerdict::Dependent { marginals })
        }
    }

    /// The sub-diagram induced by `nodes`, with its boundary ports in
    /// increasing `(node, port)` order.
    fn induced(
        &self,
        nodes: &BTreeSet<NodeId>,
    ) -> (
        Circuit,
        BTreeMap<NodeId, NodeId>,
        Vec<PortRef>,
        Vec<PortRef>,
    ) {
        let mut sub = Circuit::new();
        let mut map = BTreeMap::new();
        for &id in nodes {
            let n = &self.nodes()[id.0];
            let new = sub
                .add_node_with_ports(
                    n.label.clone(),
                    n.payload.clone(),
                    n.inputs.clone(),
                    n.outputs.clone(),
                )
                .expect("ports already validated");
            map.insert(id, new);
        }
        let mut boundary_in = Vec::new();
        let mut boundary_out = Vec::new();
        let fed: BTreeMap<PortRef, PortRef> = self.feeding();
        for &id in nodes {
            let n = &self.nodes()[id.0];
            for port in 0..n.inputs.len() {
                let here = PortRef::new(id, port);
                match fed.get(&here) {
                    Some(from) if nodes.contains(&from.node) => sub.connect(
                        PortRef::new(map[&from.node], from.port),
                        PortRef::new(map[&id], port),
                    ),
                    _ => boundary_in.push(here),
                }
            }
            for port in 0..n.outputs.len() {
                let here = PortRef::new(id, port);
                let internal = self
                    .wires()
                    .iter()
                    .any(|w| w.from == here && nodes.contains(&w.to.node));
                if !internal {
                    boundary_out.push(here);
                }
            }
        }
        (sub, map, boundary_in, boundary_out)
    }

    /// Replaces `nodes` by one event node holding their open normal form
    /// (with the tests inside fixed to `outcomes`). Fails if the result is cyclic.
    pub fn contract(&self, nodes: &BTreeSet<NodeId>, outcomes: &Outcomes) -> Result<Contracted> {
        self.checked_order()?;
        for &id in nodes {
            self.node(id).map_err(|_| EvalError::UnknownNode(id))?;
        }
        let (sub, map, boundary_in, boundary_out) = self.induced(nodes);
        let sub_outcomes: Outcomes = outcomes
            .iter()
            .filter_map(|(id, &o)| map.get(id).map(|&new| (new, o)))
            .collect();
        let remap = |p: &PortRef| PortRef::new(map[&p.node], p.port);
        let sub_in: Vec<PortRef> = boundary_in.iter().map(remap).collect();
        let sub_out: Vec<PortRef> = boundary_out.iter().map(remap).collect();
        let event = sub.evaluate_open(&sub_outcomes, &sub_in, &sub_out)?;

        let mut out = Circuit::new();
        let mut id_map = BTreeMap::new();
        for n in self.nodes().iter().filter(|n| !nodes.contains(&n.id)) {
            let new = out
                .add_node_with_ports(
                    n.label.clone(),
                    n.payload.clone(),
                    n.inputs.clone(),
                    n.outputs.clone(),
                )
                .expect("ports already validated");
            id_map.insert(n.id, new);
        }
        let in_types: Vec<SystemType> = boundary_in
            .iter()
            .map(|&p| self.input_type(p).expect("port exists").clone())
            .collect();
        let out_types: Vec<SystemType> = boundary_out
            .iter()
            .map(|&p| self.output_type(p).expect("port exists").clone())
            .collect();
        let merged = out
            .add_node_with_ports("contracted", Payload::Event(event), in_types, out_types)
            .map_err(|e| EvalError::BadBoundary(e.to_string()))?;
        let place = |p: PortRef, is_input: bool| -> PortRef {
            if nodes.contains(&p.node) {
                let list = if is_input {
                    &boundary_in
                } else {
                    &boundary_out
                };
                let k = list.iter().position(|&b| b == p).expect("boundary port");
                PortRef::new(merged, k)
            } else {
                PortRef::new(id_map[&p.node], p.port)
            }
        };
        for &Wire { from, to } in self.wires() {
            if nodes.contains(&from.node) && nodes.contains(&to.node) {
                continue;
            }
            out.connect(place(from, false), place(to, true));
        }
        out.topological_order()
            .map_err(|e| EvalError::BadBoundary(format!("contracted set is not convex: {e}")))?;
        Ok(Contracted {
            circuit: out,
            node: merged,
            id_map,
        })
    }
}

fn same_set(what: &str, given: &[PortRef], expected: &[PortRef]) -> Result<()> {
    let a: BTreeSet<PortRef> = given.iter().copied().collect();
    let b: BTreeSet<PortRef> = expected.iter().copied().collect();
    if a.len() != given.len() || a != b {
        return Err(EvalError::BadBoundary(format!(
            "{what} must list each dangling port once: expected {expected:?}, got {given:?}"
        )));
    }
    Ok(())
}
