//! An integer-valued circuit contractor that shares nothing with the kernel's
//! evaluation path except the coordinate vectors of the events.
//!
//! Each live wire carries an atomic basis index `(s, s')` of its own system;
//! outcomes of test nodes ride along in the key, so one contraction yields the
//! whole joint distribution as integers. In a deterministic theory every entry
//! must come out as 0 or 1.

use std::collections::{BTreeMap, HashMap};

use crate::circuit::{Circuit, NodeId, Payload, PortRef};
use crate::kernel::EventKind;
use crate::system::{flatten, unflatten};

use super::{OracleError, Result};

/// Sparse rows of an event's matrix: `rows[s·m + s']` lists `(t·q + t')`.
fn sparse_rows(event: &EventKind) -> Vec<Vec<usize>> {
    let (input, output) = (event.input(), event.output());
    let cols = output.dim();
    let v = event.as_vector();
    (0..input.dim())
        .map(|r| (0..cols).filter(|&c| v[r * cols + c] == 1).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Key {
    legs: Vec<(u32, u32)>,
    outcomes: Vec<u32>,
}

/// Integer joint distribution over the test nodes (in increasing id order).
/// Event nodes contribute without an outcome index.
pub fn dense_joint(circuit: &Circuit) -> Result<BTreeMap<Vec<usize>, i64>> {
    circuit
        .typecheck()
        .map_err(|e| OracleError::Invalid(format!("{} wiring errors", e.len())))?;
    if !circuit.is_closed() {
        return Err(OracleError::Invalid(
            "dense contraction needs a closed circuit".into(),
        ));
    }
    let order = circuit
        .topological_order()
        .map_err(|e| OracleError::Invalid(e.to_string()))?;
    let tests: Vec<NodeId> = circuit.test_nodes();
    let feeding: HashMap<PortRef, PortRef> =
        circuit.wires().iter().map(|w| (w.to, w.from)).collect();

    let mut slots: Vec<PortRef> = Vec::new();
    let mut tensor: HashMap<Key, i64> = HashMap::from([(
        Key {
            legs: Vec::new(),
            outcomes: Vec::new(),
        },
        1,
    )]);
    for id in order {
        let node = &circuit.nodes()[id.0];
        let events: Vec<&EventKind> = match &node.payload {
            Payload::Test(t) => t.events().iter().collect(),
            Payload::Event(e) => vec![e],
        };
        let rows: Vec<Vec<Vec<usize>>> = events.iter().map(|e| sparse_rows(e)).collect();
        let in_n: Vec<usize> = node.inputs.iter().map(|s| s.n()).collect();
        let in_m: Vec<usize> = node.inputs.iter().map(|s| s.m()).collect();
        let out_n: Vec<usize> = node.outputs.iter().map(|s| s.n()).collect();
        let out_q: Vec<usize> = node.outputs.iter().map(|s| s.m()).collect();
        let m: usize = in_m.iter().product();
        let q: usize = out_q.iter().product();

        let positions: Vec<usize> = (0..node.inputs.len())
            .map(|port| {
                let from = feeding[&PortRef::new(id, port)];
                slots
                    .iter()
                    .position(|&s| s == from)
                    .expect("producer already swept")
            })
            .collect();
        let keep: Vec<usize> = (0..slots.len())
            .filter(|k| !positions.contains(k))
            .collect();
        let is_test = matches!(node.payload, Payload::Test(_));

        let mut next: HashMap<Key, i64> = HashMap::new();
        for (key, &coef) in &tensor {
            let s_digits: Vec<usize> = positions.iter().map(|&k| key.legs[k].0 as usize).collect();
            let v_digits: Vec<usize> = positions.iter().map(|&k| key.legs[k].1 as usize).collect();
            let row = flatten(&s_digits, &in_n) * m + flatten(&v_digits, &in_m);
            for (outcome, event_rows) in rows.iter().enumerate() {
                for &col in &event_rows[row] {
                    let (t, t_prime) = (col / q, col % q);
                    let t_digits = unflatten(t, &out_n);
                    let v_digits = unflatten(t_prime, &out_q);
                    let mut legs: Vec<(u32, u32)> = t_digits
                        .iter()
                        .zip(&v_digits)
                        .map(|(&a, &b)| (a as u32, b as u32))
                        .collect();
                    legs.extend(keep.iter().map(|&k| key.legs[k]));
                    let mut outcomes = key.outcomes.clone();
                    if is_test {
                        outcomes.push(outcome as u32);
                    }
                    *next.entry(Key { legs, outcomes }).or_insert(0) += coef;
                }
            }
        }
        next.retain(|_, c| *c != 0);
        tensor = next;
        let mut new_slots: Vec<PortRef> = (0..node.outputs.len())
            .map(|p| PortRef::new(id, p))
            .collect();
        new_slots.extend(keep.iter().map(|&k| slots[k]));
        slots = new_slots;
    }

    // Outcomes were appended in sweep order; reorder to increasing node id.
    let swept: Vec<NodeId> = circuit
        .topological_order()
        .expect("checked above")
        .into_iter()
        .filter(|id| tests.contains(id))
        .collect();
    let mut out = BTreeMap::new();
    for (key, coef) in tensor {
        let mut tuple = vec![0usize; tests.len()];
        for (k, id) in swept.iter().enumerate() {
            let pos = tests.iter().position(|t| t == id).expect("test node");
            tuple[pos] = key.outcomes[k] as usize;
        }
        *out.entry(tuple).or_insert(0) += coef;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::alice_tests;
    use crate::system::SystemType;

    #[test]
    fn alice_dense() {
        let (prep, obs) = alice_tests(&SystemType::new(2, 2));
        let (c, _, _) = crate::oracles::alice_circuit(&prep, &obs[0]);
        let joint = dense_joint(&c).unwrap();
        // prep outcome 0 with D0 outcome f(0) = 1
        assert_eq!(joint, BTreeMap::from([(vec![0, 1], 1)]));
        let kernel = c.joint_distribution().unwrap();
        for (tuple, p) in kernel.entries {
            assert_eq!(joint.get(&tuple).copied().unwrap_or(0), p as i64);
        }
    }
}
