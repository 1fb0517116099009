//! Complete, duplicate-free listings of events and tests in canonical order.

use super::{sat_pow, EnumCap, Result};
use crate::circuit::{Test, TestKind};
use crate::kernel::{Branch, Cell, EffectEvent, EventKind, StateEvent, TransformationEvent};
use crate::system::{unflatten, SystemType};

fn u(x: usize) -> u128 {
    x as u128
}

/// All states including zero: `(m+1)^n`.
pub fn count_states(sys: &SystemType) -> u128 {
    sat_pow(u(sys.m()) + 1, sys.n())
}

/// All effects including zero: `n(2^m - 1) + 1`.
pub fn count_effects(sys: &SystemType) -> u128 {
    u(sys.n())
        .saturating_mul(sat_pow(2, sys.m()) - 1)
        .saturating_add(1)
}

pub fn count_deterministic_states(sys: &SystemType) -> u128 {
    sat_pow(u(sys.m()), sys.n())
}

/// All transformations `n▷m → p▷q` including zero: `(1 + n((q+1)^m - 1))^p`.
pub fn count_transformations(input: &SystemType, output: &SystemType) -> u128 {
    let per_pointer = u(input.n())
        .saturating_mul(sat_pow(u(output.m()) + 1, input.m()) - 1)
        .saturating_add(1);
    sat_pow(per_pointer, output.n())
}

/// Channels `n▷m → p▷q`: `(n q^m)^p`.
pub fn count_channels(input: &SystemType, output: &SystemType) -> u128 {
    sat_pow(
        u(input.n()).saturating_mul(sat_pow(u(output.m()), input.m())),
        output.n(),
    )
}

/// Number of set partitions of a `k`-element set.
pub fn bell_number(k: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..k {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().expect("nonempty"));
        for x in &row {
            let prev = *next.last().expect("nonempty");
            next.push(prev.saturating_add(*x));
        }
        row = next;
    }
    row[0]
}

pub fn count_preparation_tests(sys: &SystemType) -> u128 {
    count_deterministic_states(sys).saturating_mul(bell_number(sys.n()))
}

pub fn count_observation_tests(sys: &SystemType) -> u128 {
    u(sys.n()).saturating_mul(bell_number(sys.m()))
}

pub fn count_channel_tests(input: &SystemType, output: &SystemType) -> u128 {
    count_channels(input, output).saturating_mul(bell_number(input.m() * output.n()))
}

fn mixed_radix(count: u128, radices: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..count).map(move |index| unflatten(index as usize, radices))
}

/// Every state of `sys`, ordered lexicographically by value vector with
/// "undefined" before any value.
pub fn enumerate_states(sys: &SystemType, cap: EnumCap) -> Result<Vec<StateEvent>> {
    let count = count_states(sys);
    cap.check(|| format!("states of {sys}"), count)?;
    let radices = vec![sys.m() + 1; sys.n()];
    Ok(mixed_radix(count, &radices)
        .map(|digits| {
            let values = digits.iter().map(|&d| d.checked_sub(1)).collect();
            StateEvent::from_values(sys.clone(), values).expect("digits are in range")
        })
        .collect())
}

pub fn enumerate_atomic_states(sys: &SystemType) -> Vec<StateEvent> {
    (0..sys.n())
        .flat_map(|s| (0..sys.m()).map(move |v| (s, v)))
        .map(|(s, v)| StateEvent::atomic(sys.clone(), s, v).expect("in range"))
        .collect()
}

pub fn enumerate_deterministic_states(sys: &SystemType, cap: EnumCap) -> Result<Vec<StateEvent>> {
    let count = count_deterministic_states(sys);
    cap.check(|| format!("deterministic states of {sys}"), count)?;
    let radices = vec![sys.m(); sys.n()];
    Ok(mixed_radix(count, &radices)
        .map(|f| StateEvent::deterministic(sys.clone(), &f).expect("in range"))
        .collect())
}

/// Every effect of `sys`: zero first, then by pointer and value-set bitmask.
pub fn enumerate_effects(sys: &SystemType, cap: EnumCap) -> Result<Vec<EffectEvent>> {
    let count = count_effects(sys);
    cap.check(|| format!("effects of {sys}"), count)?;
    let mut out = vec![EffectEvent::zero(sys.clone())];
    for v in 0..sys.n() {
        for mask in 1u64..(1u64 << sys.m()) {
            let values = (0..sys.m()).filter(|&j| mask >> j & 1 == 1);
            out.push(EffectEvent::new(sys.clone(), v, values).expect("in range"));
        }
    }
    Ok(out)
}

/// The deterministic effects `e_v`, one per pointer value.
pub fn enumerate_deterministic_effects(sys: &SystemType) -> Vec<EffectEvent> {
    (0..sys.n())
        .map(|v| EffectEvent::deterministic(sys.clone(), v).expect("in range"))
        .collect()
}

/// Every transformation `input → output`, zero first, built pointer by pointer
/// from the per-pointer choice "no branch" or "(anchor, partial target map)".
pub fn enumerate_transformations(
    input: &SystemType,
    output: &SystemType,
    cap: EnumCap,
) -> Result<Vec<TransformationEvent>> {
    let count = count_transformations(input, output);
    cap.check(|| format!("transformations {input} -> {output}"), count)?;
    let target_maps = sat_pow(u(output.m()) + 1, input.m());
    let target_radices = vec![output.m() + 1; input.m()];
    let mut options: Vec<Option<Branch>> = vec![None];
    for anchor in 0..input.n() {
        for code in 1..target_maps {
            let targets = unflatten(code as usize, &target_radices)
                .into_iter()
                .map(|d| d.checked_sub(1))
                .collect();
            options.push(Some(Branch { anchor, targets }));
        }
    }
    let radices = vec![options.len(); output.n()];
    Ok(mixed_radix(count, &radices)
        .map(|choice| {
            let branches = choice.iter().map(|&k| options[k].clone()).collect();
            TransformationEvent::from_branches(input.clone(), output.clone(), branches)
                .expect("options are in range")
        })
        .collect())
}

pub fn enumerate_channels(
    input: &SystemType,
    output: &SystemType,
    cap: EnumCap,
) -> Result<Vec<TransformationEvent>> {
    let count = count_channels(input, output);
    cap.check(|| format!("channels {input} -> {output}"), count)?;
    let per_pointer = input.n() * output.m().pow(input.m() as u32);
    let radices = vec![per_pointer; output.n()];
    let g_radices = vec![output.m(); input.m()];
    Ok(mixed_radix(count, &radices)
        .map(|choice| {
            let branches = choice
                .iter()
                .map(|&k| {
                    let (anchor, code) =
                        (k / (per_pointer / input.n()), k % (per_pointer / input.n()));
                    Some(Branch {
                        anchor,
                        targets: unflatten(code, &g_radices).into_iter().map(Some).collect(),
                    })
                })
                .collect();
            TransformationEvent::from_branches(input.clone(), output.clone(), branches)
                .expect("in range")
        })
        .collect())
}

/// The `n·m·p·q` atomic transformations `A[s,s' → t,t']` in index order.
pub fn enumerate_atomic_transformations(
    input: &SystemType,
    output: &SystemType,
) -> Vec<TransformationEvent> {
    let mut out = Vec::new();
    for s in 0..input.n() {
        for s_prime in 0..input.m() {
            for t in 0..output.n() {
                for t_prime in 0..output.m() {
                    out.push(
                        TransformationEvent::atomic(
                            input.clone(),
                            output.clone(),
                            s,
                            s_prime,
                            t,
                            t_prime,
                        )
                        .expect("in range"),
                    );
                }
            }
        }
    }
    out
}

/// All set partitions of `{0..k}` as restricted growth strings (`block[i]` is
/// the block of element `i`, blocks numbered in order of first appearance).
pub fn set_partitions(k: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, prefix: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        let limit = if prefix.is_empty() { 0 } else { max + 1 };
        for b in 0..=limit {
            prefix.push(b);
            go(k, prefix, max.max(b), out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        out.push(Vec::new());
    } else {
        go(k, &mut Vec::with_capacity(k), 0, &mut out);
    }
    out
}

/// Splits the support of an event into blocks. `blocks[i]` assigns the i-th
/// support element (atoms, values or cells in canonical order) to a block;
/// the result has one event per block, in block order.
pub fn partition_event(event: &EventKind, blocks: &[usize]) -> Vec<EventKind> {
    let count = blocks.iter().map(|b| b + 1).max().unwrap_or(0);
    match event {
        EventKind::State(s) => {
            let atoms: Vec<(usize, usize)> = s.atoms().collect();
            assert_eq!(atoms.len(), blocks.len(), "one block per atom");
            (0..count)
                .map(|b| {
                    let part = atoms
                        .iter()
                        .zip(blocks)
                        .filter(|(_, &k)| k == b)
                        .map(|(a, _)| *a);
                    StateEvent::new(s.system().clone(), part)
                        .expect("sub-state")
                        .into()
                })
                .collect()
        }
        EventKind::Effect(e) => {
            let values: Vec<usize> = e.values().iter().copied().collect();
            assert_eq!(values.len(), blocks.len(), "one block per value");
            (0..count)
                .map(|b| {
                    let part = values
                        .iter()
                        .zip(blocks)
                        .filter(|(_, &k)| k == b)
                        .map(|(v, _)| *v);
                    EffectEvent::new(e.system().clone(), e.pointer(), part)
                        .expect("sub-effect")
                        .into()
                })
                .collect()
        }
        EventKind::Transformation(t) => {
            let cells: Vec<Cell> = t.cells();
            assert_eq!(cells.len(), blocks.len(), "one block per cell");
            (0..count)
                .map(|b| {
                    let part = cells
                        .iter()
                        .zip(blocks)
                        .filter(|(_, &k)| k == b)
                        .map(|(c, _)| *c);
                    TransformationEvent::from_cells(t.input().clone(), t.output().clone(), part)
                        .expect("sub-transformation")
                        .into()
                })
                .collect()
        }
    }
}

fn tests_from(
    prefix: &str,
    kind: TestKind,
    deterministic: Vec<EventKind>,
    support: usize,
) -> Vec<Test> {
    let partitions = set_partitions(support);
    let mut out = Vec::with_capacity(deterministic.len() * partitions.len());
    for (i, event) in deterministic.iter().enumerate() {
        for (j, blocks) in partitions.iter().enumerate() {
            let events = partition_event(event, blocks);
            out.push(
                Test::with_kind(format!("{prefix}{i}_{j}"), kind, events)
                    .expect("a partition of a deterministic event is a test"),
            );
        }
    }
    out
}

/// Preparation tests whose events are nonzero: every deterministic state with
/// every partition of its domain.
pub fn enumerate_preparation_tests(sys: &SystemType, cap: EnumCap) -> Result<Vec<Test>> {
    cap.check(
        || format!("preparation tests on {sys}"),
        count_preparation_tests(sys),
    )?;
    let det = enumerate_deterministic_states(sys, cap)?
        .into_iter()
        .map(EventKind::from)
        .collect();
    Ok(tests_from("P", TestKind::Preparation, det, sys.n()))
}

/// Observation tests whose events are nonzero: every `e_v` with every partition of `Γ_m`.
pub fn enumerate_observation_tests(sys: &SystemType, cap: EnumCap) -> Result<Vec<Test>> {
    cap.check(
        || format!("observation tests on {sys}"),
        count_observation_tests(sys),
    )?;
    let det = enumerate_deterministic_effects(sys)
        .into_iter()
        .map(EventKind::from)
        .collect();
    Ok(tests_from("O", TestKind::Observation, det, sys.m()))
}

/// Transformation tests whose events are nonzero: every channel with every
/// partition of its `m·p` cells.
pub fn enumerate_channel_tests(
    input: &SystemType,
    output: &SystemType,
    cap: EnumCap,
) -> Result<Vec<Test>> {
    cap.check(
        || format!("channel tests {input} -> {output}"),
        count_channel_tests(input, output),
    )?;
    let det = enumerate_channels(input, output, cap)?
        .into_iter()
        .map(EventKind::from)
        .collect();
    Ok(tests_from(
        "C",
        TestKind::Transformation,
        det,
        input.m() * output.n(),
    ))
}
