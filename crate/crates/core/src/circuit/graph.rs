use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::Test;
use crate::kernel::EventKind;
use crate::system::SystemType;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PortRef {
    pub node: NodeId,
    pub port: usize,
}

impl PortRef {
    pub fn new(node: NodeId, port: usize) -> Self {
        PortRef { node, port }
    }
}

impl fmt::Display for PortRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.node, self.port)
    }
}

/// A wire from an output port of one node to an input port of another.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Wire {
    pub from: PortRef,
    pub to: PortRef,
}

impl fmt::Display for Wire {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.from, self.to)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Payload {
    Test(Test),
    Event(EventKind),
}

impl Payload {
    pub fn input(&self) -> SystemType {
        match self {
            Payload::Test(t) => t.input().clone(),
            Payload::Event(e) => e.input(),
        }
    }

    pub fn output(&self) -> SystemType {
        match self {
            Payload::Test(t) => t.output().clone(),
            Payload::Event(e) => e.output(),
        }
    }

    /// Number of outcomes for tests, `None` for bare events.
    pub fn outcome_count(&self) -> Option<usize> {
        match self {
            Payload::Test(t) => Some(t.len()),
            Payload::Event(_) => None,
        }
    }

    pub fn as_test(&self) -> Option<&Test> {
        match self {
            Payload::Test(t) => Some(t),
            Payload::Event(_) => None,
        }
    }
}

/// A box in a circuit diagram with typed input and output ports.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CircuitNode {
    pub id: NodeId,
    pub label: String,
    pub payload: Payload,
    pub inputs: Vec<SystemType>,
    pub outputs: Vec<SystemType>,
}

fn ports_of(system: &SystemType) -> Vec<SystemType> {
    system
        .factors()
        .iter()
        .map(|f| SystemType::from_factors(vec![*f]))
        .collect()
}

fn product(ports: &[SystemType]) -> SystemType {
    ports
        .iter()
        .fold(SystemType::trivial(), |acc, p| acc.compose(p))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WiringError {
    #[error("wire {wire} references unknown node {node}")]
    UnknownNode { wire: Wire, node: NodeId },
    #[error("wire {wire} uses port {port} which does not exist")]
    NoSuchPort { wire: Wire, port: PortRef },
    #[error("wire {wire} connects {from} to {to}")]
    TypeMismatch {
        wire: Wire,
        from: SystemType,
        to: SystemType,
    },
    #[error("port {port} is used by more than one wire")]
    PortReused { port: PortRef },
    #[error("node {node} ports do not match its payload ({detail})")]
    PortPayloadMismatch { node: NodeId, detail: String },
    #[error("wiring contains a cycle through nodes {nodes:?}")]
    Cycle { nodes: Vec<NodeId> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("ports of node {node} do not match the payload: {detail}")]
    PortMismatch { node: NodeId, detail: String },
}

/// A typed DAG of tests and events.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Circuit {
    nodes: Vec<CircuitNode>,
    wires: Vec<Wire>,
}

impl Circuit {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a node with one port per factor of the payload's systems.
    pub fn add_node(&mut self, label: impl Into<String>, payload: Payload) -> NodeId {
        let inputs = ports_of(&payload.input());
        let outputs = ports_of(&payload.output());
        self.push(label.into(), payload, inputs, outputs)
    }

    /// Adds a node with explicit port types whose products match the payload.
    pub fn add_node_with_ports(
        &mut self,
        label: impl Into<String>,
        payload: Payload,
        inputs: Vec<SystemType>,
        outputs: Vec<SystemType>,
    ) -> Result<NodeId, CircuitError> {
        let id = NodeId(self.nodes.len());
        check_ports(id, &payload, &inputs, &outputs)?;
        Ok(self.push(label.into(), payload, inputs, outputs))
    }

    pub fn add_test(&mut self, test: Test) -> NodeId {
        let label = test.label().to_string();
        self.add_node(label, Payload::Test(test))
    }

    pub fn add_event(&mut self, label: impl Into<String>, event: EventKind) -> NodeId {
        self.add_node(label, Payload::Event(event))
    }

    fn push(
        &mut self,
        label: String,
        payload: Payload,
        inputs: Vec<SystemType>,
        outputs: Vec<SystemType>,
    ) -> NodeId {
        let id = NodeId(self.nodes.len());
        self.nodes.push(CircuitNode {
            id,
            label,
            payload,
            inputs,
            outputs,
        });
        id
    }

    /// Records a wire; validity is reported by [`Circuit::typecheck`].
    pub fn connect(&mut self, from: PortRef, to: PortRef) {
        self.wires.push(Wire { from, to });
    }

    pub fn wire(&mut self, from: NodeId, from_port: usize, to: NodeId, to_port: usize) {
        self.connect(PortRef::new(from, from_port), PortRef::new(to, to_port));
    }

    /// Swaps the payload of a node, keeping its ports and wires.
    pub fn replace_payload(&mut self, node: NodeId, payload: Payload) -> Result<(), CircuitError> {
        let n = self
            .nodes
            .get_mut(node.0)
            .ok_or(CircuitError::UnknownNode(node))?;
        check_ports(node, &payload, &n.inputs, &n.outputs)?;
        n.payload = payload;
        Ok(())
    }

    pub fn nodes(&self) -> &[CircuitNode] {
        &self.nodes
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    pub fn node(&self, id: NodeId) -> Result<&CircuitNode, CircuitError> {
        self.nodes.get(id.0).ok_or(CircuitError::UnknownNode(id))
    }

    /// Ids of nodes carrying tests, in increasing order.
    pub fn test_nodes(&self) -> Vec<NodeId> {
        self.nodes
            .iter()
            .filter(|n| matches!(n.payload, Payload::Test(_)))
            .map(|n| n.id)
            .collect()
    }

    pub fn dangling_inputs(&self) -> Vec<PortRef> {
        let fed: BTreeSet<PortRef> = self.wires.iter().map(|w| w.to).collect();
        self.nodes
            .iter()
            .flat_map(|n| (0..n.inputs.len()).map(move |p| PortRef::new(n.id, p)))
            .filter(|p| !fed.contains(p))
            .collect()
    }

    pub fn dangling_outputs(&self) -> Vec<PortRef> {
        let used: BTreeSet<PortRef> = self.wires.iter().map(|w| w.from).collect();
        self.nodes
            .iter()
            .flat_map(|n| (0..n.outputs.len()).map(move |p| PortRef::new(n.id, p)))
            .filter(|p| !used.contains(p))
            .collect()
    }

    pub fn is_closed(&self) -> bool {
        self.dangling_inputs().is_empty() && self.dangling_outputs().is_empty()
    }

    pub(crate) fn input_type(&self, port: PortRef) -> Option<&SystemType> {
        self.nodes.get(port.node.0)?.inputs.get(port.port)
    }

    pub(crate) fn output_type(&self, port: PortRef) -> Option<&SystemType> {
        self.nodes.get(port.node.0)?.outputs.get(port.port)
    }

    /// Checks port/payload agreement, wire endpoints and types, port reuse and acyclicity.
    pub fn typecheck(&self) -> Result<(), Vec<WiringError>> {
        let mut errors = Vec::new();
        for n in &self.nodes {
            if let Err(CircuitError::PortMismatch { node, detail }) =
                check_ports(n.id, &n.payload, &n.inputs, &n.outputs)
            {
                errors.push(WiringError::PortPayloadMismatch { node, detail });
            }
        }
        let mut used_out = BTreeSet::new();
        let mut used_in = BTreeSet::new();
        for &wire in &self.wires {
            let mut endpoints_ok = true;
            for node in [wire.from.node, wire.to.node] {
                if node.0 >= self.nodes.len() {
                    errors.push(WiringError::UnknownNode { wire, node });
                    endpoints_ok = false;
                }
            }
            if !endpoints_ok {
                continue;
            }
            let from = self.output_type(wire.from);
            let to = self.input_type(wire.to);
            if from.is_none() {
                errors.push(WiringError::NoSuchPort {
                    wire,
                    port: wire.from,
                });
            }
            if to.is_none() {
                errors.push(WiringError::NoSuchPort {
                    wire,
                    port: wire.to,
                });
            }
            if let (Some(from), Some(to)) = (from, to) {
                if !from.matches(to) {
                    errors.push(WiringError::TypeMismatch {
                        wire,
                        from: from.clone(),
                        to: to.clone(),
                    });
                }
            }
            if !used_out.insert(wire.from) {
                errors.push(WiringError::PortReused { port: wire.from });
            }
            if !used_in.insert(wire.to) {
                errors.push(WiringError::PortReused { port: wire.to });
            }
        }
        if errors.is_empty() {
            if let Err(e) = self.topological_order() {
                errors.push(e);
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }

    fn successors(&self) -> BTreeMap<NodeId, BTreeSet<NodeId>> {
        let mut succ: BTreeMap<NodeId, BTreeSet<NodeId>> =
            self.nodes.iter().map(|n| (n.id, BTreeSet::new())).collect();
        for w in &self.wires {
            if let Some(s) = succ.get_mut(&w.from.node) {
                s.insert(w.to.node);
            }
        }
        succ
    }

    /// Kahn's algorithm, always taking the smallest ready id.
    pub fn topological_order(&self) -> Result<Vec<NodeId>, WiringError> {
        let succ = self.successors();
        let mut indegree: BTreeMap<NodeId, usize> = self.nodes.iter().map(|n| (n.id, 0)).collect();
        for targets in succ.values() {
            for t in targets {
                if let Some(d) = indegree.get_mut(t) {
                    *d += 1;
                }
            }
        }
        let mut ready: BTreeSet<NodeId> = indegree
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(&id, _)| id)
            .collect();
        let mut order = Vec::with_capacity(self.nodes.len());
        while let Some(id) = ready.pop_first() {
            order.push(id);
            for t in &succ[&id] {
                let d = indegree.get_mut(t).expect("known node");
                *d -= 1;
                if *d == 0 {
                    ready.insert(*t);
                }
            }
        }
        if order.len() == self.nodes.len() {
            Ok(order)
        } else {
            let placed: BTreeSet<NodeId> = order.into_iter().collect();
            Err(WiringError::Cycle {
                nodes: self
                    .nodes
                    .iter()
                    .map(|n| n.id)
                    .filter(|id| !placed.contains(id))
                    .collect(),
            })
        }
    }

    /// `a ≺₁ b`: some output port of `a` is wired into `b`.
    pub fn precedes_immediately(&self, a: NodeId, b: NodeId) -> Result<bool, CircuitError> {
        self.node(a)?;
        self.node(b)?;
        Ok(self
            .wires
            .iter()
            .any(|w| w.from.node == a && w.to.node == b))
    }

    /// `a ≺ b`: the transitive closure of `≺₁`.
    pub fn precedes(&self, a: NodeId, b: NodeId) -> Result<bool, CircuitError> {
        self.node(a)?;
        self.node(b)?;
        let succ = self.successors();
        let mut seen = BTreeSet::new();
        let mut stack: Vec<NodeId> = succ[&a].iter().copied().collect();
        while let Some(n) = stack.pop() {
            if n == b {
                return Ok(true);
            }
            if seen.insert(n) {
                stack.extend(succ[&n].iter().copied());
            }
        }
        Ok(false)
    }
}

fn check_ports(
    node: NodeId,
    payload: &Payload,
    inputs: &[SystemType],
    outputs: &[SystemType],
) -> Result<(), CircuitError> {
    let (inp, out) = (product(inputs), product(outputs));
    if !inp.matches(&payload.input()) {
        return Err(CircuitError::PortMismatch {
            node,
            detail: format!(
                "input ports multiply to {inp}, payload expects {}",
                payload.input()
            ),
        });
    }
    if !out.matches(&payload.output()) {
        return Err(CircuitError::PortMismatch {
            node,
            detail: format!(
                "output ports multiply to {out}, payload expects {}",
                payload.output()
            ),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{EffectEvent, StateEvent, TransformationEvent};

    fn s(n: usize, m: usize) -> SystemType {
        SystemType::new(n, m)
    }

    fn prep(sys: SystemType) -> Payload {
        let f = vec![0; sys.n()];
        Payload::Event(StateEvent::deterministic(sys, &f).unwrap().into())
    }

    fn obs(sys: SystemType) -> Payload {
        Payload::Event(EffectEvent::deterministic(sys, 0).unwrap().into())
    }

    #[test]
    fn typecheck_reports_mismatch() {
        let mut c = Circuit::new();
        let p = c.add_node("p", prep(s(2, 2)));
        let o = c.add_node("o", obs(s(2, 2)));
        c.wire(p, 0, o, 0);
        assert!(c.typecheck().is_ok());
        assert!(c.is_closed());

        let mut c = Circuit::new();
        let p = c.add_node("p", prep(s(2, 2)));
        let o = c.add_node("o", obs(s(3, 2)));
        c.wire(p, 0, o, 0);
        let errs = c.typecheck().unwrap_err();
        assert!(matches!(errs[0], WiringError::TypeMismatch { .. }));
        assert!(errs[0].to_string().contains("#0.0 -> #1.0"));
    }

    #[test]
    fn cycle_detected() {
        let id = Payload::Event(TransformationEvent::identity(s(2, 2)).into());
        let mut c = Circuit::new();
        let a = c.add_node("a", id.clone());
        let b = c.add_node("b", id);
        c.wire(a, 0, b, 0);
        c.wire(b, 0, a, 0);
        let errs = c.typecheck().unwrap_err();
        assert!(matches!(errs.as_slice(), [WiringError::Cycle { .. }]));
    }

    #[test]
    fn reuse_and_bad_ports() {
        let mut c = Circuit::new();
        let p = c.add_node("p", prep(s(2, 2)));
        let o1 = c.add_node("o1", obs(s(2, 2)));
        let o2 = c.add_node("o2", obs(s(2, 2)));
        c.wire(p, 0, o1, 0);
        c.wire(p, 0, o2, 0);
        c.wire(p, 3, o2, 0);
        c.wire(NodeId(9), 0, o2, 0);
        let errs = c.typecheck().unwrap_err();
        assert!(errs
            .iter()
            .any(|e| matches!(e, WiringError::PortReused { .. })));
        assert!(errs
            .iter()
            .any(|e| matches!(e, WiringError::NoSuchPort { .. })));
        assert!(errs
            .iter()
            .any(|e| matches!(e, WiringError::UnknownNode { .. })));
    }

    #[test]
    fn explicit_ports_must_multiply_out() {
        let mut c = Circuit::new();
        let ok = c.add_node_with_ports("p", prep(s(4, 4)), vec![], vec![s(2, 2), s(2, 2)]);
        assert!(ok.is_ok());
        let bad = c.add_node_with_ports("p", prep(s(4, 4)), vec![], vec![s(2, 2)]);
        assert!(matches!(bad, Err(CircuitError::PortMismatch { .. })));
    }

    #[test]
    fn self_precedence_is_false() {
        let mut c = Circuit::new();
        let p = c.add_node("p", prep(s(2, 2)));
        let o = c.add_node("o", obs(s(2, 2)));
        c.wire(p, 0, o, 0);
        assert!(!c.precedes(p, p).unwrap());
        assert!(c.precedes(p, o).unwrap());
        assert!(!c.precedes(o, p).unwrap());
        assert!(c.precedes(p, NodeId(7)).is_err());
    }
}
