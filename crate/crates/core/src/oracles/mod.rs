//! Finite enumeration and brute-force property checks.
//!
//! Every check here works by exhaustive search over small instances. The
//! predicates that decide validity of raw 0/1 data are written against the
//! definitions directly and do not reuse the kernel's canonical forms, so they
//! can serve as independent referees for it.

mod admissibility;
mod atomicity;
mod causality;
pub mod dense;
mod determinism;
mod discriminability;
mod enumerate;
mod linalg;
pub mod random;
mod report;
mod signaling;

use thiserror::Error;

use crate::circuit::{EvalError, TestError};
use crate::kernel::KernelError;

pub use admissibility::{
    admissibility_equivalence, ancilla_admissible, brute_force_admissible, structural_recover,
    AdmissibilityEquivalence,
};
pub use atomicity::{
    check_atomicity, composite_atoms_are_products, valid_vector, AtomicityVerdict,
};
pub use causality::{
    alice_circuit, alice_tests, check_causality, is_causal, search_causality_witness,
    CausalityVerdict, CausalityWitness,
};
pub use determinism::{
    chain_circuit, check_determinism, side_by_side, DeterminismConfig, DeterminismOutcome,
};
pub use discriminability::{check_local_discriminability, LocalDiscriminability};
pub use enumerate::{
    bell_number, count_channel_tests, count_channels, count_deterministic_states, count_effects,
    count_observation_tests, count_preparation_tests, count_states, count_transformations,
    enumerate_atomic_states, enumerate_atomic_transformations, enumerate_channel_tests,
    enumerate_channels, enumerate_deterministic_effects, enumerate_deterministic_states,
    enumerate_effects, enumerate_observation_tests, enumerate_preparation_tests, enumerate_states,
    enumerate_transformations, partition_event, set_partitions,
};
pub use linalg::integer_rank;
pub use report::{TheoryReport, Verdict};
pub use signaling::{
    pointer_tests, signaling_demo, signaling_scan, signaling_witness, swap_shared_state,
    SignalingAnalysis, SignalingScan, SignalingTranscript,
};

/// Name of the environment variable that overrides the default cap.
pub const CAP_ENV: &str = "OPTLAB_ENUM_CAP";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{what} would need {count} items, above the cap of {cap} (raise it with {CAP_ENV})")]
    CapExceeded {
        what: String,
        count: u128,
        cap: u128,
    },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Test(#[from] TestError),
}

pub type Result<T> = std::result::Result<T, OracleError>;

/// Upper bound on the size of any single enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumCap(pub u128);

impl EnumCap {
    pub const DEFAULT: u128 = 1_000_000;

    /// The cap from `OPTLAB_ENUM_CAP`, or the default when unset or unparsable.
    pub fn from_env() -> Self {
        std::env::var(CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(EnumCap)
            .unwrap_or_default()
    }

    pub fn check(self, what: impl FnOnce() -> String, count: u128) -> Result<()> {
        if count > self.0 {
            Err(OracleError::CapExceeded {
                what: what(),
                count,
                cap: self.0,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for EnumCap {
    fn default() -> Self {
        EnumCap(Self::DEFAULT)
    }
}

/// `base^exp`, saturating at `u128::MAX`.
pub(crate) fn sat_pow(base: u128, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
        if acc == u128::MAX || acc == 0 {
            break;
        }
    }
    acc
}
