use std::fmt;

use serde::Serialize;

use super::{Branch, EffectEvent, StateEvent, TransformationEvent};
use crate::system::SystemType;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum KindTag {
    State,
    Effect,
    Transformation,
}

impl fmt::Display for KindTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KindTag::State => "state",
            KindTag::Effect => "effect",
            KindTag::Transformation => "transformation",
        })
    }
}

/// Any event of the theory. States are transformations from `I`, effects are
/// transformations to `I`; [`EventKind::normalized`] picks the most specific variant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EventKind {
    State(StateEvent),
    Effect(EffectEvent),
    Transformation(TransformationEvent),
}

impl EventKind {
    pub fn tag(&self) -> KindTag {
        match self {
            EventKind::State(_) => KindTag::State,
            EventKind::Effect(_) => KindTag::Effect,
            EventKind::Transformation(_) => KindTag::Transformation,
        }
    }

    pub fn input(&self) -> SystemType {
        match self {
            EventKind::State(_) => SystemType::trivial(),
            EventKind::Effect(e) => e.system().clone(),
            EventKind::Transformation(t) => t.input().clone(),
        }
    }

    pub fn output(&self) -> SystemType {
        match self {
            EventKind::State(s) => s.system().clone(),
            EventKind::Effect(_) => SystemType::trivial(),
            EventKind::Transformation(t) => t.output().clone(),
        }
    }

    /// The faithful embedding into transformations.
    pub fn to_transformation(&self) -> TransformationEvent {
        match self {
            EventKind::Transformation(t) => t.clone(),
            EventKind::State(s) => {
                let branches = s
                    .values()
                    .iter()
                    .map(|v| {
                        v.map(|v| Branch {
                            anchor: 0,
                            targets: vec![Some(v)],
                        })
                    })
                    .collect();
                TransformationEvent::from_branches(
                    SystemType::trivial(),
                    s.system().clone(),
                    branches,
                )
                .expect("state embedding is always valid")
            }
            EventKind::Effect(e) => {
                let branch = (!e.is_zero()).then(|| Branch {
                    anchor: e.pointer(),
                    targets: (0..e.system().m())
                        .map(|v| e.values().contains(&v).then_some(0))
                        .collect(),
                });
                TransformationEvent::from_branches(
                    e.system().clone(),
                    SystemType::trivial(),
                    vec![branch],
                )
                .expect("effect embedding is always valid")
            }
        }
    }

    /// Inverse of [`EventKind::to_transformation`]: trivial input gives a state,
    /// otherwise trivial output gives an effect.
    pub fn from_transformation(t: TransformationEvent) -> EventKind {
        if t.input().is_trivial() {
            let values = t
                .branches()
                .iter()
                .map(|b| b.as_ref().and_then(|b| b.targets[0]))
                .collect();
            EventKind::State(
                StateEvent::from_values(t.output().clone(), values)
                    .expect("transformation from I is a valid state"),
            )
        } else if t.output().is_trivial() {
            let effect = match &t.branches()[0] {
                None => EffectEvent::zero(t.input().clone()),
                Some(b) => EffectEvent::new(
                    t.input().clone(),
                    b.anchor,
                    b.targets
                        .iter()
                        .enumerate()
                        .filter_map(|(v, target)| target.map(|_| v)),
                )
                .expect("transformation to I is a valid effect"),
            };
            EventKind::Effect(effect)
        } else {
            EventKind::Transformation(t)
        }
    }

    pub fn normalized(self) -> EventKind {
        match self {
            EventKind::State(_) => self,
            EventKind::Effect(ref e) if !e.system().is_trivial() => self,
            other => EventKind::from_transformation(other.to_transformation()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            EventKind::State(s) => s.is_zero(),
            EventKind::Effect(e) => e.is_zero(),
            EventKind::Transformation(t) => t.is_zero(),
        }
    }

    /// Full support: `Ξ = Γ_n`, `E = Γ_m`, or `Ω = Γ_m × Γ_p`.
    pub fn is_deterministic(&self) -> bool {
        match self {
            EventKind::State(s) => s.is_deterministic(),
            EventKind::Effect(e) => e.is_deterministic(),
            EventKind::Transformation(t) => t.is_channel(),
        }
    }

    pub fn is_atomic(&self) -> bool {
        match self {
            EventKind::State(s) => s.is_atomic(),
            EventKind::Effect(e) => e.is_atomic(),
            EventKind::Transformation(t) => t.is_atomic(),
        }
    }

    pub fn as_vector(&self) -> Vec<u8> {
        match self {
            EventKind::State(s) => s.as_vector(),
            EventKind::Effect(e) => e.as_vector(),
            EventKind::Transformation(t) => t.as_vector(),
        }
    }

    pub fn as_state(&self) -> Option<&StateEvent> {
        match self {
            EventKind::State(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_effect(&self) -> Option<&EffectEvent> {
        match self {
            EventKind::Effect(e) => Some(e),
            _ => None,
        }
    }

    pub fn as_transformation(&self) -> Option<&TransformationEvent> {
        match self {
            EventKind::Transformation(t) => Some(t),
            _ => None,
        }
    }
}

impl From<StateEvent> for EventKind {
    fn from(s: StateEvent) -> Self {
        EventKind::State(s)
    }
}

impl From<EffectEvent> for EventKind {
    fn from(e: EffectEvent) -> Self {
        EventKind::Effect(e)
    }
}

impl From<TransformationEvent> for EventKind {
    fn from(t: TransformationEvent) -> Self {
        EventKind::Transformation(t)
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EventKind::State(s) => write!(f, "state on {}: {s}", s.system()),
            EventKind::Effect(e) => write!(f, "effect on {}: {e}", e.system()),
            EventKind::Transformation(t) => {
                write!(f, "transform {} -> {}: {t}", t.input(), t.output())
            }
        }
    }
}
