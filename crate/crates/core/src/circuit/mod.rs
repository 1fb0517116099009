//! Tests, typed circuit diagrams, precedence and exact evaluation.

mod eval;
mod graph;
mod test;

pub use eval::{Contracted, Distribution, EvalError, Outcomes, SignalingVerdict};
pub use graph::{Circuit, CircuitError, CircuitNode, NodeId, Payload, PortRef, Wire, WiringError};
pub use test::{Test, TestError, TestKind};
