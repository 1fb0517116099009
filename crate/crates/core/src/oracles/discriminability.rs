use std::collections::HashMap;

use super::{
    composite_atoms_are_products, enumerate_effects, enumerate_states, EnumCap, Result,
    TheoryReport, Verdict,
};
use crate::kernel::{EffectEvent, StateEvent};
use crate::system::SystemType;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalDiscriminability {
    pub a: SystemType,
    pub b: SystemType,
    pub states: usize,
    pub local_effects: (usize, usize),
    /// Two distinct states no product of local effects tells apart.
    pub indistinguishable: Option<(StateEvent, StateEvent)>,
    pub atoms_are_products: bool,
}

impl LocalDiscriminability {
    pub fn holds(&self) -> bool {
        self.indistinguishable.is_none()
    }

    pub fn report(&self) -> TheoryReport {
        let work = (self.states * self.local_effects.0 * self.local_effects.1) as u128;
        let witness = match &self.indistinguishable {
            Some((x, y)) => vec![
                "states with identical local statistics:".to_string(),
                format!("  {x}"),
                format!("  {y}"),
            ],
            None => Vec::new(),
        };
        TheoryReport::new(
            "local-discriminability",
            vec![self.a.to_string(), self.b.to_string()],
            Verdict::from_bool(self.holds()),
            work,
        )
        .fact("composite_states", self.states)
        .fact("local_effects_a", self.local_effects.0)
        .fact("local_effects_b", self.local_effects.1)
        .fact("atomic_states_are_products", self.atoms_are_products)
        .with_witness(witness)
        .note("every state of the composite is compared, not only products of local states")
    }
}

/// `⟨a ⊗ b | ρ⟩` computed from the coordinates of `ρ` on the composite.
fn product_pairing(
    a: &EffectEvent,
    b: &EffectEvent,
    nb: usize,
    mb: usize,
    rho: &StateEvent,
) -> bool {
    if a.is_zero() || b.is_zero() {
        return false;
    }
    match rho.value(a.pointer() * nb + b.pointer()) {
        Some(v) => a.values().contains(&(v / mb)) && b.values().contains(&(v % mb)),
        None => false,
    }
}

/// Exhaustive check that distinct states of `a ⊗ b` differ on some product of
/// local effects. Each state is fingerprinted by its pairings with all
/// product effects; the property holds iff fingerprints are unique.
pub fn check_local_discriminability(
    a: &SystemType,
    b: &SystemType,
    cap: EnumCap,
) -> Result<LocalDiscriminability> {
    let composite = a.compose(b);
    let states = enumerate_states(&composite, cap)?;
    let ea = enumerate_effects(a, cap)?;
    let eb = enumerate_effects(b, cap)?;
    let (nb, mb) = (b.n(), b.m());
    let mut seen: HashMap<Vec<bool>, usize> = HashMap::with_capacity(states.len());
    let mut clash = None;
    for (i, rho) in states.iter().enumerate() {
        let fingerprint: Vec<bool> = ea
            .iter()
            .flat_map(|x| eb.iter().map(move |y| (x, y)))
            .map(|(x, y)| product_pairing(x, y, nb, mb, rho))
            .collect();
        if let Some(&j) = seen.get(&fingerprint) {
            clash = Some((states[j].clone(), rho.clone()));
            break;
        }
        seen.insert(fingerprint, i);
    }
    Ok(LocalDiscriminability {
        a: a.clone(),
        b: b.clone(),
        states: states.len(),
        local_effects: (ea.len(), eb.len()),
        indistinguishable: clash,
        atoms_are_products: composite_atoms_are_products(a, b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{compose_par, pair};

    #[test]
    fn product_pairing_matches_kernel() {
        let a = SystemType::new(2, 2);
        let b = SystemType::new(2, 3);
        let cap = EnumCap::default();
        let states = enumerate_states(&a.compose(&b), cap).unwrap();
        for x in enumerate_effects(&a, cap).unwrap() {
            for y in enumerate_effects(&b, cap).unwrap() {
                let joint = compose_par(&x.clone().into(), &y.clone().into());
                let joint = joint.as_effect().unwrap();
                for rho in states.iter().step_by(7) {
                    assert_eq!(
                        pair(joint, rho).unwrap() == 1,
                        product_pairing(&x, &y, 2, 3, rho)
                    );
                }
            }
        }
    }

    #[test]
    fn small_composites_are_discriminable() {
        let r = check_local_discriminability(
            &SystemType::new(2, 1),
            &SystemType::new(1, 2),
            EnumCap::default(),
        )
        .unwrap();
        assert!(r.holds());
        assert_eq!(r.states, 9);
    }
}
