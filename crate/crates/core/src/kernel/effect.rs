use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::{check_range, Result};
use crate::system::SystemType;

/// An observation event `a_{v,E}`: pointer `v` together with a set `E` of accepted values.
///
/// The zero effect is stored with `v = 0` so that equality is well defined.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EffectEvent {
    system: SystemType,
    pointer: usize,
    values: BTreeSet<usize>,
}

impl EffectEvent {
    pub fn new(
        system: SystemType,
        pointer: usize,
        values: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let values: BTreeSet<usize> = values.into_iter().collect();
        check_range("pointer", pointer, system.n())?;
        for &v in &values {
            check_range("value", v, system.m())?;
        }
        let pointer = if values.is_empty() { 0 } else { pointer };
        Ok(EffectEvent {
            system,
            pointer,
            values,
        })
    }

    pub fn zero(system: SystemType) -> Self {
        EffectEvent {
            system,
            pointer: 0,
            values: BTreeSet::new(),
        }
    }

    /// The atomic effect `a_{s,s'}`.
    pub fn atomic(system: SystemType, pointer: usize, value: usize) -> Result<Self> {
        Self::new(system, pointer, [value])
    }

    /// The deterministic effect `e_v = a_{v,Γ_m}`.
    pub fn deterministic(system: SystemType, pointer: usize) -> Result<Self> {
        let m = system.m();
        Self::new(system, pointer, 0..m)
    }

    pub fn system(&self) -> &SystemType {
        &self.system
    }

    pub fn pointer(&self) -> usize {
        self.pointer
    }

    pub fn values(&self) -> &BTreeSet<usize> {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_deterministic(&self) -> bool {
        self.values.len() == self.system.m()
    }

    pub fn is_atomic(&self) -> bool {
        self.values.len() == 1
    }

    pub fn as_vector(&self) -> Vec<u8> {
        let m = self.system.m();
        let mut out = vec![0; self.system.dim()];
        for &v in &self.values {
            out[self.pointer * m + v] = 1;
        }
        out
    }
}

impl fmt::Display for EffectEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[v = {}; E = {{", self.pointer)?;
        for (k, v) in self.values.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_is_canonical() {
        let s = SystemType::new(3, 2);
        let z = EffectEvent::new(s.clone(), 2, []).unwrap();
        assert_eq!(z, EffectEvent::zero(s.clone()));
        assert_eq!(z.pointer(), 0);
        assert!(EffectEvent::new(s.clone(), 3, [0]).is_err());
        assert!(EffectEvent::new(s, 0, [2]).is_err());
    }

    #[test]
    fn classification_and_vector() {
        let s = SystemType::new(2, 2);
        let e1 = EffectEvent::deterministic(s.clone(), 1).unwrap();
        assert!(e1.is_deterministic() && !e1.is_atomic());
        assert_eq!(e1.as_vector(), vec![0, 0, 1, 1]);
        assert_eq!(e1.to_string(), "[v = 1; E = {0, 1}]");
        let a = EffectEvent::atomic(s, 0, 1).unwrap();
        assert!(a.is_atomic());
    }
}
