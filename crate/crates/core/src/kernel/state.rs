use std::fmt;

use serde::Serialize;

use super::{check_range, KernelError, Result};
use crate::system::{flatten, unflatten, SystemType};

/// A preparation event `α_{f,Ξ}`: a partial function from pointers `Γ_n` to values `Γ_m`.
///
/// `values[i]` is `Some(f(i))` exactly when `i ∈ Ξ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StateEvent {
    system: SystemType,
    values: Vec<Option<usize>>,
}

impl StateEvent {
    /// Builds `α_{f,Ξ}` from `(i, f(i))` pairs. A repeated pointer is rejected.
    pub fn new(
        system: SystemType,
        assignment: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut values = vec![None; system.n()];
        for (pointer, value) in assignment {
            check_range("pointer", pointer, system.n())?;
            check_range("value", value, system.m())?;
            if let Some(previous) = values[pointer] {
                return Err(KernelError::Overlap {
                    what: "state",
                    detail: format!("pointer {pointer} assigned both {previous} and {value}"),
                });
            }
            values[pointer] = Some(value);
        }
        Ok(StateEvent { system, values })
    }

    pub fn from_values(system: SystemType, values: Vec<Option<usize>>) -> Result<Self> {
        if values.len() != system.n() {
            return Err(KernelError::OutOfRange {
                what: "assignment length",
                index: values.len(),
                bound: system.n() + 1,
            });
        }
        for value in values.iter().flatten() {
            check_range("value", *value, system.m())?;
        }
        Ok(StateEvent { system, values })
    }

    pub fn zero(system: SystemType) -> Self {
        let values = vec![None; system.n()];
        StateEvent { system, values }
    }

    /// The atomic state `α_{s,t}`.
    pub fn atomic(system: SystemType, pointer: usize, value: usize) -> Result<Self> {
        Self::new(system, [(pointer, value)])
    }

    /// The deterministic state `ε_f` with `f(i) = f[i]`.
    pub fn deterministic(system: SystemType, f: &[usize]) -> Result<Self> {
        if f.len() != system.n() {
            return Err(KernelError::OutOfRange {
                what: "function length",
                index: f.len(),
                bound: system.n() + 1,
            });
        }
        Self::new(system, f.iter().copied().enumerate())
    }

    /// The deterministic state of the trivial system, i.e. probability one.
    pub fn unit() -> Self {
        StateEvent {
            system: SystemType::trivial(),
            values: vec![Some(0)],
        }
    }

    pub fn system(&self) -> &SystemType {
        &self.system
    }

    pub fn values(&self) -> &[Option<usize>] {
        &self.values
    }

    pub fn value(&self, pointer: usize) -> Option<usize> {
        self.values.get(pointer).copied().flatten()
    }

    /// `(i, f(i))` for every `i ∈ Ξ`, in pointer order.
    pub fn atoms(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (i, v)))
    }

    pub fn support_len(&self) -> usize {
        self.values.iter().flatten().count()
    }

    pub fn is_zero(&self) -> bool {
        self.support_len() == 0
    }

    pub fn is_deterministic(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    pub fn is_atomic(&self) -> bool {
        self.support_len() == 1
    }

    /// 0/1 coordinates over the atomic basis; `α_{s,t}` sits at `s·m + t`.
    pub fn as_vector(&self) -> Vec<u8> {
        let m = self.system.m();
        let mut out = vec![0; self.system.dim()];
        for (i, v) in self.atoms() {
            out[i * m + v] = 1;
        }
        out
    }

    /// Relabels the factor shape; the flattened sizes must agree.
    pub fn reshape(&self, system: SystemType) -> Result<Self> {
        if !system.matches(&self.system) {
            return Err(KernelError::SystemMismatch {
                context: "reshape",
                expected: self.system.clone(),
                found: system,
            });
        }
        Ok(StateEvent {
            system,
            values: self.values.clone(),
        })
    }

    /// Reorders the factors: factor `k` of the result is factor `order[k]` of `self`.
    pub fn permute_factors(&self, order: &[usize]) -> Result<Self> {
        let factors = self.system.factors();
        let mut seen = vec![false; factors.len()];
        if order.len() != factors.len() {
            return Err(KernelError::BadPermutation(order.to_vec()));
        }
        for &k in order {
            if k >= factors.len() || seen[k] {
                return Err(KernelError::BadPermutation(order.to_vec()));
            }
            seen[k] = true;
        }
        if order.iter().enumerate().all(|(i, &k)| i == k) {
            return Ok(self.clone());
        }
        let old_n: Vec<usize> = factors.iter().map(|f| f.n).collect();
        let old_m: Vec<usize> = factors.iter().map(|f| f.m).collect();
        let new_n: Vec<usize> = order.iter().map(|&k| old_n[k]).collect();
        let new_m: Vec<usize> = order.iter().map(|&k| old_m[k]).collect();
        let system = SystemType::from_factors(order.iter().map(|&k| factors[k]).collect());
        let mut values = vec![None; system.n()];
        for (pointer, value) in self.atoms() {
            let p = unflatten(pointer, &old_n);
            let v = unflatten(value, &old_m);
            let p: Vec<usize> = order.iter().map(|&k| p[k]).collect();
            let v: Vec<usize> = order.iter().map(|&k| v[k]).collect();
            values[flatten(&p, &new_n)] = Some(flatten(&v, &new_m));
        }
        Ok(StateEvent { system, values })
    }
}

impl fmt::Display for StateEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (i, v)) in self.atoms().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i} -> {v}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
#[allow(clippy::identity_op, clippy::erasing_op)]
mod tests {
    use super::*;

    fn sys22() -> SystemType {
        SystemType::new(2, 2)
    }

    #[test]
    fn validation() {
        assert!(StateEvent::new(sys22(), [(2, 0)]).is_err());
        assert!(StateEvent::new(sys22(), [(0, 2)]).is_err());
        let err = StateEvent::new(sys22(), [(0, 0), (0, 1)]).unwrap_err();
        assert!(matches!(err, KernelError::Overlap { .. }));
    }

    #[test]
    fn classification() {
        let eps = StateEvent::deterministic(sys22(), &[1, 0]).unwrap();
        assert!(eps.is_deterministic());
        assert!(!eps.is_atomic());
        let atom = StateEvent::atomic(sys22(), 1, 1).unwrap();
        assert!(atom.is_atomic() && !atom.is_deterministic());
        let atom1 = StateEvent::atomic(SystemType::new(1, 3), 0, 2).unwrap();
        assert!(atom1.is_atomic() && atom1.is_deterministic());
        assert!(StateEvent::zero(sys22()).is_zero());
        assert_eq!(eps.as_vector(), vec![0, 1, 1, 0]);
        assert_eq!(eps.to_string(), "{0 -> 1, 1 -> 0}");
    }

    #[test]
    fn permute_swaps_digits() {
        let ab = SystemType::new(2, 2).compose(&SystemType::new(3, 2));
        // pointer (1, 2) -> value (0, 1)
        let rho = StateEvent::atomic(ab, 1 * 3 + 2, 0 * 2 + 1).unwrap();
        let swapped = rho.permute_factors(&[1, 0]).unwrap();
        assert_eq!(swapped.system().factors()[0].n, 3);
        // pointer (2, 1) -> value (1, 0)
        assert_eq!(swapped.value(2 * 2 + 1), Some(1 * 2 + 0));
        assert_eq!(swapped.permute_factors(&[1, 0]).unwrap(), rho);
        assert!(rho.permute_factors(&[0, 0]).is_err());
    }
}
