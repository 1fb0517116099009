use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::kernel::{sum_events, EventKind, KernelError, KindTag};
use crate::system::SystemType;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TestKind {
    Preparation,
    Observation,
    Transformation,
}

impl TestKind {
    fn tag(self) -> KindTag {
        match self {
            TestKind::Preparation => KindTag::State,
            TestKind::Observation => KindTag::Effect,
            TestKind::Transformation => KindTag::Transformation,
        }
    }

    fn from_tag(tag: KindTag) -> Self {
        match tag {
            KindTag::State => TestKind::Preparation,
            KindTag::Effect => TestKind::Observation,
            KindTag::Transformation => TestKind::Transformation,
        }
    }
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestKind::Preparation => "prep",
            TestKind::Observation => "obs",
            TestKind::Transformation => "chan",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TestError {
    #[error("a test needs at least one event")]
    Empty,
    #[error("event {index} is a {found}, expected a {expected}")]
    KindMismatch {
        index: usize,
        expected: KindTag,
        found: KindTag,
    },
    #[error("event {index} acts on {found}, expected {expected}")]
    SystemMismatch {
        index: usize,
        expected: String,
        found: String,
    },
    #[error("overlap in test events: {0}")]
    Overlap(KernelError),
    #[error("events do not sum to deterministic")]
    NotDeterministic,
}

/// A test `{A_i}`: events indexed by outcome whose coarse-graining is deterministic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Test {
    label: String,
    kind: TestKind,
    events: Vec<EventKind>,
    input: SystemType,
    output: SystemType,
}

impl Test {
    /// Builds a test whose kind follows its first event.
    pub fn new(label: impl Into<String>, events: Vec<EventKind>) -> Result<Test, TestError> {
        let first = events.first().ok_or(TestError::Empty)?;
        let kind = TestKind::from_tag(first.tag());
        Self::with_kind(label, kind, events)
    }

    pub fn with_kind(
        label: impl Into<String>,
        kind: TestKind,
        events: Vec<EventKind>,
    ) -> Result<Test, TestError> {
        let first = events.first().ok_or(TestError::Empty)?;
        let (input, output) = (first.input(), first.output());
        for (index, e) in events.iter().enumerate() {
            if e.tag() != kind.tag() {
                return Err(TestError::KindMismatch {
                    index,
                    expected: kind.tag(),
                    found: e.tag(),
                });
            }
            if e.input() != input || e.output() != output {
                return Err(TestError::SystemMismatch {
                    index,
                    expected: format!("{input} -> {output}"),
                    found: format!("{} -> {}", e.input(), e.output()),
                });
            }
        }
        let sum = sum_events(&events).map_err(TestError::Overlap)?;
        if !sum.is_deterministic() {
            return Err(TestError::NotDeterministic);
        }
        Ok(Test {
            label: label.into(),
            kind,
            events,
            input,
            output,
        })
    }

    /// The singleton test `{A}`; `A` must be deterministic.
    pub fn singleton(label: impl Into<String>, event: EventKind) -> Result<Test, TestError> {
        Self::new(label, vec![event])
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> TestKind {
        self.kind
    }

    pub fn events(&self) -> &[EventKind] {
        &self.events
    }

    pub fn event(&self, outcome: usize) -> Option<&EventKind> {
        self.events.get(outcome)
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn input(&self) -> &SystemType {
        &self.input
    }

    pub fn output(&self) -> &SystemType {
        &self.output
    }

    /// The deterministic event obtained by forgetting the outcome.
    pub fn coarse_grained(&self) -> EventKind {
        sum_events(&self.events).expect("validated at construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{EffectEvent, StateEvent};

    fn s22() -> SystemType {
        SystemType::new(2, 2)
    }

    #[test]
    fn alice_tests_are_valid() {
        let prep = Test::new(
            "P",
            vec![
                StateEvent::new(s22(), [(0, 1)]).unwrap().into(),
                StateEvent::new(s22(), [(1, 1)]).unwrap().into(),
            ],
        )
        .unwrap();
        assert_eq!(prep.kind(), TestKind::Preparation);
        assert!(prep.coarse_grained().is_deterministic());
        let d1 = Test::new(
            "D1",
            vec![
                EffectEvent::new(s22(), 1, [0]).unwrap().into(),
                EffectEvent::new(s22(), 1, [1]).unwrap().into(),
            ],
        )
        .unwrap();
        assert_eq!(d1.kind(), TestKind::Observation);
        assert_eq!(d1.input(), &s22());
    }

    #[test]
    fn invalid_tests() {
        let half = StateEvent::new(s22(), [(0, 1)]).unwrap();
        assert_eq!(
            Test::singleton("P", half.clone().into()).unwrap_err(),
            TestError::NotDeterministic
        );
        assert!(matches!(
            Test::new("P", vec![half.clone().into(), half.clone().into()]),
            Err(TestError::Overlap(_))
        ));
        assert!(matches!(
            Test::new("P", vec![half.into(), EffectEvent::zero(s22()).into()]),
            Err(TestError::KindMismatch { index: 1, .. })
        ));
        assert_eq!(Test::new("P", vec![]).unwrap_err(), TestError::Empty);
    }
}
