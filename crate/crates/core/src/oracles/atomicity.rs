//! Atomicity by exhaustive decomposition search over 0/1 vectors.

use std::collections::BTreeSet;

use super::{brute_force_admissible, enumerate_atomic_states, sat_pow, EnumCap, Result};
use crate::kernel::{
    compose_par, BoolMatrix, EffectEvent, EventKind, KindTag, StateEvent, TransformationEvent,
};
use crate::system::SystemType;

/// Whether a 0/1 coordinate vector is a valid event of the given kind, decided
/// from the definitions: a partial function for states, a single pointer for
/// effects, local admissibility for transformations.
pub fn valid_vector(kind: KindTag, input: &SystemType, output: &SystemType, v: &[u8]) -> bool {
    if v.iter().any(|&x| x > 1) {
        return false;
    }
    match kind {
        KindTag::State => v
            .chunks(output.m())
            .all(|row| row.iter().filter(|&&x| x == 1).count() <= 1),
        KindTag::Effect => v.chunks(input.m()).filter(|row| row.contains(&1)).count() <= 1,
        KindTag::Transformation => {
            let entries: Vec<i64> = v.iter().map(|&x| x as i64).collect();
            let matrix = BoolMatrix::from_entries(input.dim(), output.dim(), &entries)
                .expect("entries are 0/1 with the right length");
            brute_force_admissible(&matrix, input, output).expect("shape matches")
        }
    }
}

fn event_from_vector(
    kind: KindTag,
    input: &SystemType,
    output: &SystemType,
    v: &[u8],
) -> EventKind {
    match kind {
        KindTag::State => {
            let m = output.m();
            let values = v
                .chunks(m)
                .map(|row| row.iter().position(|&x| x == 1))
                .collect();
            StateEvent::from_values(output.clone(), values)
                .expect("valid")
                .into()
        }
        KindTag::Effect => {
            let m = input.m();
            let pointer = v.iter().position(|&x| x == 1).map_or(0, |i| i / m);
            let values = (0..m).filter(|&j| v[pointer * m + j] == 1);
            EffectEvent::new(input.clone(), pointer, values)
                .expect("valid")
                .into()
        }
        KindTag::Transformation => {
            let entries: Vec<i64> = v.iter().map(|&x| x as i64).collect();
            let matrix =
                BoolMatrix::from_entries(input.dim(), output.dim(), &entries).expect("0/1");
            TransformationEvent::from_matrix(input.clone(), output.clone(), &matrix)
                .expect("valid")
                .into()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomicityVerdict {
    pub atomic: bool,
    /// Two nonzero valid events summing to the input, when it is not atomic.
    pub witness: Option<(EventKind, EventKind)>,
    /// Number of candidate splits examined.
    pub splits_checked: u128,
}

/// An event is atomic when it is nonzero and no two nonzero valid events of
/// the same kind and systems sum to it. Since all coordinates are 0/1, every
/// such decomposition splits the support in two, so the search is over the
/// proper nonempty subsets of the support.
pub fn check_atomicity(event: &EventKind, cap: EnumCap) -> Result<AtomicityVerdict> {
    let vector = event.as_vector();
    let support: Vec<usize> = (0..vector.len()).filter(|&i| vector[i] == 1).collect();
    if support.is_empty() {
        return Ok(AtomicityVerdict {
            atomic: false,
            witness: None,
            splits_checked: 0,
        });
    }
    let k = support.len();
    let splits = sat_pow(2, k - 1) - 1;
    cap.check(
        || format!("support splits of a {k}-element support"),
        splits,
    )?;
    let (kind, input, output) = (event.tag(), event.input(), event.output());
    let mut checked = 0u128;
    // The first support element always goes to the left part; `mask` picks the
    // other elements joining it, and the right part must stay nonempty.
    for mask in 0..splits as u64 {
        checked += 1;
        let mut left = vec![0u8; vector.len()];
        let mut right = vec![0u8; vector.len()];
        left[support[0]] = 1;
        for (bit, &idx) in support[1..].iter().enumerate() {
            if mask >> bit & 1 == 1 {
                left[idx] = 1;
            } else {
                right[idx] = 1;
            }
        }
        if valid_vector(kind, &input, &output, &left) && valid_vector(kind, &input, &output, &right)
        {
            return Ok(AtomicityVerdict {
                atomic: false,
                witness: Some((
                    event_from_vector(kind, &input, &output, &left),
                    event_from_vector(kind, &input, &output, &right),
                )),
                splits_checked: checked,
            });
        }
    }
    Ok(AtomicityVerdict {
        atomic: true,
        witness: None,
        splits_checked: checked,
    })
}

/// The atomic states of `a ⊗ b` are exactly the products of atomic states of
/// the factors.
pub fn composite_atoms_are_products(a: &SystemType, b: &SystemType) -> bool {
    let composite = a.compose(b);
    let direct: BTreeSet<Vec<u8>> = enumerate_atomic_states(&composite)
        .iter()
        .map(StateEvent::as_vector)
        .collect();
    let products: BTreeSet<Vec<u8>> = enumerate_atomic_states(a)
        .into_iter()
        .flat_map(|x| {
            enumerate_atomic_states(b)
                .into_iter()
                .map(move |y| compose_par(&x.clone().into(), &y.into()).as_vector())
        })
        .collect();
    direct.len() == a.dim() * b.dim() && direct == products
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s22() -> SystemType {
        SystemType::new(2, 2)
    }

    #[test]
    fn deterministic_state_splits() {
        let eps = StateEvent::deterministic(s22(), &[1, 0]).unwrap();
        let v = check_atomicity(&eps.into(), EnumCap::default()).unwrap();
        assert!(!v.atomic);
        let (l, r) = v.witness.unwrap();
        assert_eq!(l, StateEvent::new(s22(), [(0, 1)]).unwrap().into());
        assert_eq!(r, StateEvent::new(s22(), [(1, 0)]).unwrap().into());
    }

    #[test]
    fn atoms_are_atomic_and_zero_is_not() {
        for t in super::super::enumerate_atomic_transformations(&s22(), &s22()) {
            assert!(
                check_atomicity(&t.into(), EnumCap::default())
                    .unwrap()
                    .atomic
            );
        }
        let zero: EventKind = StateEvent::zero(s22()).into();
        assert!(!check_atomicity(&zero, EnumCap::default()).unwrap().atomic);
        let e = EffectEvent::deterministic(s22(), 1).unwrap();
        let v = check_atomicity(&e.into(), EnumCap::default()).unwrap();
        assert!(!v.atomic);
    }

    #[test]
    fn channel_decomposes() {
        let id = TransformationEvent::identity(s22());
        let v = check_atomicity(&id.into(), EnumCap::default()).unwrap();
        assert!(!v.atomic);
        let (l, r) = v.witness.unwrap();
        assert_eq!(l.as_vector().iter().map(|&x| x as u32).sum::<u32>(), 1);
        assert_eq!(r.as_vector().iter().map(|&x| x as u32).sum::<u32>(), 3);
    }

    #[test]
    fn vector_validity() {
        let a = s22();
        let i = SystemType::trivial();
        assert!(valid_vector(KindTag::State, &i, &a, &[1, 0, 0, 1]));
        assert!(!valid_vector(KindTag::State, &i, &a, &[1, 1, 0, 0]));
        assert!(valid_vector(KindTag::Effect, &a, &i, &[1, 1, 0, 0]));
        assert!(!valid_vector(KindTag::Effect, &a, &i, &[1, 0, 0, 1]));
        assert!(!valid_vector(KindTag::State, &i, &a, &[2, 0, 0, 0]));
    }

    #[test]
    fn composite_atoms() {
        assert!(composite_atoms_are_products(&s22(), &s22()));
        assert!(composite_atoms_are_products(
            &SystemType::new(2, 3),
            &SystemType::new(3, 1)
        ));
    }
}
