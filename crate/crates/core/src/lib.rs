//! `optlab` is an exact engine for a toy operational theory that is
//! deterministic (every closed circuit has probability 0 or 1) but not causal
//! (every system `n ▷ m` has `n` deterministic effects).
//!
//! The crate is organized in layers:
//!
//! * [`kernel`]: states, effects and transformations in canonical form, with
//!   pairing, application, sequential/parallel composition, coarse-graining and
//!   marginalization.
//! * [`circuit`]: typed DAGs of tests and events, precedence relations and
//!   exact evaluation of closed and open diagrams.
//! * [`oracles`]: finite enumeration and brute-force checks of admissibility,
//!   atomicity, local discriminability, causality, determinism and signaling.
//! * [`dsl`]: the `.opt` text format (parser, analyzer, canonical printer).
//! * [`cli`]: the `optlab` command-line front end.

pub mod circuit;
pub mod cli;
pub mod demo;
pub mod dsl;
pub mod kernel;
pub mod oracles;
pub mod system;

pub use kernel::{EffectEvent, EventKind, KernelError, StateEvent, TransformationEvent};
pub use system::{Factor, SystemType};
