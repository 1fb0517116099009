//! System types `n ▷ m` and the row-major index arithmetic used for composites.

use std::fmt;

use serde::{Deserialize, Serialize};

/// One factor `n ▷ m` of a (possibly composite) system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Factor {
    pub n: usize,
    pub m: usize,
}

impl Factor {
    pub fn new(n: usize, m: usize) -> Self {
        assert!(
            n >= 1 && m >= 1,
            "factor sizes must be positive (got {n}|>{m})"
        );
        Factor { n, m }
    }

    pub fn dim(&self) -> usize {
        self.n * self.m
    }
}

/// A system label `n ▷ m`, carrying the ordered factor list it was built from.
///
/// Pointers and values of a composite are flattened row-major over the
/// factors: the first factor is the most significant digit. Two systems can be
/// wired together when their flattened `(n, m)` agree (see [`SystemType::matches`]);
/// derived equality additionally compares the factor shape.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SystemType {
    factors: Vec<Factor>,
}

impl SystemType {
    /// A single-factor system. `1 ▷ 1` is normalized to the trivial system.
    pub fn new(n: usize, m: usize) -> Self {
        let f = Factor::new(n, m);
        if n == 1 && m == 1 {
            Self::trivial()
        } else {
            SystemType { factors: vec![f] }
        }
    }

    /// The trivial system `I`.
    pub fn trivial() -> Self {
        SystemType {
            factors: Vec::new(),
        }
    }

    /// Builds a system from an explicit factor list, keeping `1 ▷ 1` factors.
    pub fn from_factors(factors: Vec<Factor>) -> Self {
        SystemType { factors }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Pointer range size `n = Π nᵢ`.
    pub fn n(&self) -> usize {
        self.factors.iter().map(|f| f.n).product()
    }

    /// Value range size `m = Π mᵢ`.
    pub fn m(&self) -> usize {
        self.factors.iter().map(|f| f.m).product()
    }

    pub fn dim(&self) -> usize {
        self.n() * self.m()
    }

    pub fn is_trivial(&self) -> bool {
        self.n() == 1 && self.m() == 1
    }

    /// Wiring compatibility: equal flattened `(n, m)`.
    pub fn matches(&self, other: &SystemType) -> bool {
        self.n() == other.n() && self.m() == other.m()
    }

    /// Parallel composition: concatenation of factor lists.
    pub fn compose(&self, other: &SystemType) -> SystemType {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        SystemType { factors }
    }

    /// The system collapsed to a single factor with the same flattened sizes.
    pub fn flattened(&self) -> SystemType {
        SystemType::new(self.n(), self.m())
    }

    /// The factors with index `which` removed.
    pub fn without_factor(&self, which: usize) -> SystemType {
        let mut factors = self.factors.clone();
        factors.remove(which);
        SystemType { factors }
    }
}

impl fmt::Display for SystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.factors.as_slice() {
            [] => write!(f, "I"),
            [single] => write!(f, "{}|>{}", single.n, single.m),
            many => {
                for factor in many {
                    write!(f, "({}|>{})", factor.n, factor.m)?;
                }
                Ok(())
            }
        }
    }
}

/// Splits a row-major flattened index into its digits for the given radices.
pub fn unflatten(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    for (slot, &radix) in digits.iter_mut().zip(radices).rev() {
        *slot = index % radix;
        index /= radix;
    }
    digits
}

/// Inverse of [`unflatten`].
pub fn flatten(digits: &[usize], radices: &[usize]) -> usize {
    debug_assert_eq!(digits.len(), radices.len());
    digits
        .iter()
        .zip(radices)
        .fold(0, |acc, (&d, &r)| acc * r + d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_and_dims() {
        let i = SystemType::trivial();
        assert_eq!((i.n(), i.m(), i.dim()), (1, 1, 1));
        assert!(i.is_trivial());
        assert_eq!(SystemType::new(1, 1), i);

        let a = SystemType::new(2, 3);
        let b = SystemType::new(3, 2);
        let ab = a.compose(&b);
        assert_eq!((ab.n(), ab.m(), ab.dim()), (6, 6, 36));
        assert_eq!(ab.factors().len(), 2);
        assert!(ab.matches(&SystemType::new(6, 6)));
        assert_ne!(ab, SystemType::new(6, 6));
        assert_eq!(a.compose(&i), a);
    }

    #[test]
    fn flatten_round_trip() {
        let radices = [2, 3, 4];
        for index in 0..24 {
            let digits = unflatten(index, &radices);
            assert_eq!(flatten(&digits, &radices), index);
        }
        assert_eq!(unflatten(5, &[2, 3]), vec![1, 2]);
    }

    #[test]
    fn display() {
        assert_eq!(SystemType::new(2, 2).to_string(), "2|>2");
        assert_eq!(SystemType::trivial().to_string(), "I");
        let ab = SystemType::new(2, 2).compose(&SystemType::new(3, 1));
        assert_eq!(ab.to_string(), "(2|>2)(3|>1)");
    }
}
