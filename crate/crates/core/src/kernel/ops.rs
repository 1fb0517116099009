use super::{Branch, EffectEvent, EventKind, KernelError, Result, StateEvent, TransformationEvent};
use crate::system::SystemType;

fn ensure_matches(context: &'static str, expected: &SystemType, found: &SystemType) -> Result<()> {
    if expected.matches(found) {
        Ok(())
    } else {
        Err(KernelError::SystemMismatch {
            context,
            expected: expected.clone(),
            found: found.clone(),
        })
    }
}

/// `⟨a_{v,E} | α_{f,Ξ}⟩ = χ_Ξ(v) · χ_E(f(v))`.
pub fn pair(effect: &EffectEvent, state: &StateEvent) -> Result<u8> {
    ensure_matches("pair", effect.system(), state.system())?;
    if effect.is_zero() {
        return Ok(0);
    }
    Ok(match state.value(effect.pointer()) {
        Some(v) if effect.values().contains(&v) => 1,
        _ => 0,
    })
}

/// Applies `T: n▷m → p▷q` to a state of `n▷m`.
pub fn apply(t: &TransformationEvent, state: &StateEvent) -> Result<StateEvent> {
    ensure_matches("apply", t.input(), state.system())?;
    let values = t
        .branches()
        .iter()
        .map(|b| {
            let b = b.as_ref()?;
            let s_prime = state.value(b.anchor)?;
            b.targets[s_prime]
        })
        .collect();
    StateEvent::from_values(t.output().clone(), values)
}

/// Applies `T ⊗ I` where `T` acts on the first `lead` factors of `state`.
///
/// The result carries `T`'s output factors followed by the untouched factors.
pub fn apply_leading(
    t: &TransformationEvent,
    state: &StateEvent,
    lead: usize,
) -> Result<StateEvent> {
    let factors = state.system().factors();
    if lead > factors.len() {
        return Err(KernelError::FactorOutOfRange {
            index: lead,
            count: factors.len(),
        });
    }
    let leading = SystemType::from_factors(factors[..lead].to_vec());
    let rest = SystemType::from_factors(factors[lead..].to_vec());
    ensure_matches("apply", t.input(), &leading)?;
    let (rest_n, rest_m) = (rest.n(), rest.m());
    let system = t.output().compose(&rest);
    let mut values = vec![None; system.n()];
    for (t_ptr, branch) in t.branches().iter().enumerate() {
        let Some(branch) = branch else { continue };
        for r in 0..rest_n {
            let Some(value) = state.value(branch.anchor * rest_n + r) else {
                continue;
            };
            let (s_prime, rest_value) = (value / rest_m, value % rest_m);
            if let Some(t_prime) = branch.targets[s_prime] {
                values[t_ptr * rest_n + r] = Some(t_prime * rest_m + rest_value);
            }
        }
    }
    StateEvent::from_values(system, values)
}

/// Sequential composition: `first` then `second`, computed as the Boolean
/// product of their matrices and recovered into canonical form.
pub fn compose_seq(
    first: &TransformationEvent,
    second: &TransformationEvent,
) -> Result<TransformationEvent> {
    ensure_matches("sequential composition", first.output(), second.input())?;
    let product = first
        .to_matrix()
        .boolean_product(&second.to_matrix())
        .expect("shapes agree once systems match");
    Ok(TransformationEvent::from_matrix(
        first.input().clone(),
        second.output().clone(),
        &product,
    )?)
}

fn compose_par_transformations(
    x: &TransformationEvent,
    y: &TransformationEvent,
) -> TransformationEvent {
    let (n2, m2) = (y.input().n(), y.input().m());
    let (p2, q2) = (y.output().n(), y.output().m());
    let m1 = x.input().m();
    let mut branches = Vec::with_capacity(x.output().n() * p2);
    for bx in x.branches() {
        for by in y.branches() {
            let branch = match (bx, by) {
                (Some(bx), Some(by)) => {
                    let mut targets = vec![None; m1 * m2];
                    for (s1, tx) in bx.targets.iter().enumerate() {
                        for (s2, ty) in by.targets.iter().enumerate() {
                            if let (Some(tx), Some(ty)) = (tx, ty) {
                                targets[s1 * m2 + s2] = Some(tx * q2 + ty);
                            }
                        }
                    }
                    Some(Branch {
                        anchor: bx.anchor * n2 + by.anchor,
                        targets,
                    })
                }
                _ => None,
            };
            branches.push(branch);
        }
    }
    TransformationEvent::from_branches(
        x.input().compose(y.input()),
        x.output().compose(y.output()),
        branches,
    )
    .expect("parallel composition of valid transformations is valid")
}

/// Parallel composition `x ⊗ y`. Factor lists concatenate; atomic indices
/// flatten row-major with `x` as the most significant digit.
pub fn compose_par(x: &EventKind, y: &EventKind) -> EventKind {
    let t = compose_par_transformations(&x.to_transformation(), &y.to_transformation());
    EventKind::from_transformation(t)
}

/// Coarse-graining: the sum of events with pairwise disjoint supports.
pub fn sum_events(events: &[EventKind]) -> Result<EventKind> {
    let (first, rest) = events.split_first().ok_or(KernelError::EmptySum)?;
    for e in rest {
        if e.tag() != first.tag() {
            return Err(KernelError::KindMismatch {
                first: first.tag(),
                second: e.tag(),
            });
        }
        if e.input() != first.input() || e.output() != first.output() {
            let (expected, found) = if e.input() != first.input() {
                (first.input(), e.input())
            } else {
                (first.output(), e.output())
            };
            return Err(KernelError::SystemMismatch {
                context: "sum",
                expected,
                found,
            });
        }
    }
    match first {
        EventKind::State(_) => {
            let states: Vec<&StateEvent> = events.iter().filter_map(EventKind::as_state).collect();
            sum_states(&states).map(EventKind::State)
        }
        EventKind::Effect(_) => {
            let effects: Vec<&EffectEvent> =
                events.iter().filter_map(EventKind::as_effect).collect();
            sum_effects(&effects).map(EventKind::Effect)
        }
        EventKind::Transformation(_) => {
            let ts: Vec<&TransformationEvent> = events
                .iter()
                .filter_map(EventKind::as_transformation)
                .collect();
            sum_transformations(&ts).map(EventKind::Transformation)
        }
    }
}

fn sum_states(states: &[&StateEvent]) -> Result<StateEvent> {
    let system = states[0].system().clone();
    let mut values = vec![None; system.n()];
    for s in states {
        for (i, v) in s.atoms() {
            if values[i].is_some() {
                return Err(KernelError::Overlap {
                    what: "state",
                    detail: format!("pointer {i} appears in more than one summand"),
                });
            }
            values[i] = Some(v);
        }
    }
    StateEvent::from_values(system, values)
}

fn sum_effects(effects: &[&EffectEvent]) -> Result<EffectEvent> {
    let system = effects[0].system().clone();
    let mut pointer = None;
    let mut values = std::collections::BTreeSet::new();
    for e in effects.iter().filter(|e| !e.is_zero()) {
        match pointer {
            None => pointer = Some(e.pointer()),
            Some(p) if p != e.pointer() => {
                return Err(KernelError::CrossPointer {
                    first: p,
                    second: e.pointer(),
                })
            }
            _ => {}
        }
        for &v in e.values() {
            if !values.insert(v) {
                return Err(KernelError::Overlap {
                    what: "effect",
                    detail: format!("value {v} appears in more than one summand"),
                });
            }
        }
    }
    EffectEvent::new(system, pointer.unwrap_or(0), values)
}

fn sum_transformations(ts: &[&TransformationEvent]) -> Result<TransformationEvent> {
    let mut acc = TransformationEvent::zero(ts[0].input().clone(), ts[0].output().clone());
    for t in ts {
        for cell in t.cells() {
            acc.insert_cell(cell)?;
        }
    }
    Ok(acc)
}

/// Applies `effect` to factor `which` of a composite state and returns the
/// surviving state on the remaining factors.
pub fn marginalize(state: &StateEvent, which: usize, effect: &EffectEvent) -> Result<StateEvent> {
    let factors = state.system().factors();
    if factors.len() < 2 {
        return Err(KernelError::NotComposite(state.system().clone()));
    }
    if which >= factors.len() {
        return Err(KernelError::FactorOutOfRange {
            index: which,
            count: factors.len(),
        });
    }
    let addressed = SystemType::from_factors(vec![factors[which]]);
    ensure_matches("marginalize", &addressed, effect.system())?;
    let mut order = vec![which];
    order.extend((0..factors.len()).filter(|&k| k != which));
    let permuted = state.permute_factors(&order)?;
    let t = EventKind::Effect(effect.clone()).to_transformation();
    let t = TransformationEvent::from_branches(
        addressed,
        SystemType::trivial(),
        t.branches().to_vec(),
    )?;
    apply_leading(&t, &permuted, 1)
}

impl EventKind {
    /// Sequential composition in diagram order: `self` first, then `next`.
    pub fn then(&self, next: &EventKind) -> Result<EventKind> {
        let t = compose_seq(&self.to_transformation(), &next.to_transformation())?;
        Ok(EventKind::from_transformation(t))
    }
}
