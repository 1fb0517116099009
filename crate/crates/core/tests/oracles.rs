use std::collections::BTreeMap;

use optlab::circuit::Circuit;
use optlab::kernel::BoolMatrix;
use optlab::oracles::dense::dense_joint;
use optlab::oracles::random::{random_circuit, RandomCircuitConfig};
use optlab::oracles::*;
use optlab::SystemType;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn s(n: usize, m: usize) -> SystemType {
    SystemType::new(n, m)
}

fn cap() -> EnumCap {
    EnumCap::default()
}

fn nonzero(c: &Circuit) -> (BTreeMap<Vec<usize>, i64>, BTreeMap<Vec<usize>, i64>) {
    let kernel = c
        .joint_distribution()
        .unwrap()
        .entries
        .into_iter()
        .filter(|&(_, p)| p != 0)
        .map(|(k, p)| (k, p as i64))
        .collect();
    let dense = dense_joint(c)
        .unwrap()
        .into_iter()
        .filter(|&(_, p)| p != 0)
        .collect();
    (kernel, dense)
}

#[test]
fn transformation_and_channel_counts() {
    let small = [s(1, 1), s(1, 2), s(2, 1), s(2, 2), s(1, 3), s(3, 1)];
    for a in &small {
        for b in &small {
            let (n, m, p, q) = (a.n() as u128, a.m() as u32, b.n() as u32, b.m() as u128);
            let ts = enumerate_transformations(a, b, cap()).unwrap();
            assert_eq!(
                ts.len() as u128,
                (1 + n * ((q + 1).pow(m) - 1)).pow(p),
                "{a} -> {b}"
            );
            let chans = enumerate_channels(a, b, cap()).unwrap();
            assert_eq!(chans.len() as u128, (n * q.pow(m)).pow(p), "{a} -> {b}");
            assert!(chans.iter().all(|c| c.is_channel()));
            assert_eq!(count_transformations(a, b), ts.len() as u128);
            assert_eq!(count_channels(a, b), chans.len() as u128);
            let tests = enumerate_channel_tests(a, b, cap()).unwrap();
            assert_eq!(count_channel_tests(a, b), tests.len() as u128, "{a} -> {b}");
        }
    }
}

#[test]
fn test_counts_on_the_reference_system() {
    let a = s(2, 2);
    assert_eq!(enumerate_preparation_tests(&a, cap()).unwrap().len(), 8);
    assert_eq!(enumerate_observation_tests(&a, cap()).unwrap().len(), 4);
    assert_eq!(enumerate_channel_tests(&a, &a, cap()).unwrap().len(), 960);
    assert_eq!(count_channels(&a, &a), 64);
}

#[test]
fn partitions_match_bell_numbers() {
    let bell = [1u128, 1, 2, 5, 15, 52, 203];
    for (k, &b) in bell.iter().enumerate() {
        assert_eq!(bell_number(k), b);
        assert_eq!(set_partitions(k).len() as u128, b, "k = {k}");
    }
}

#[test]
fn ancilla_admissibility_matches_structure() {
    // every 0/1 matrix of 2|>2 -> 1|>2 with a 2|>2 ancilla
    let (a, b) = (s(2, 2), s(1, 2));
    for mask in 0u64..1 << 8 {
        let mat = BoolMatrix::from_mask(4, 2, mask);
        let structural = structural_recover(&mat, &a, &b).is_ok();
        let ancilla = ancilla_admissible(&mat, &a, &b, &s(2, 2), cap()).unwrap();
        assert_eq!(structural, ancilla, "mask {mask:#x}");
        if structural {
            assert!(brute_force_admissible(&mat, &a, &b).unwrap());
        }
    }
    let eq = admissibility_equivalence(&s(1, 2), &s(2, 1), &[s(1, 1), s(2, 2)], cap()).unwrap();
    assert!(eq.holds());
}

#[test]
fn local_admissibility_agrees_without_ancilla() {
    // on these shapes single states already expose every structural defect
    for (a, b, accepted) in [
        (s(2, 2), s(2, 2), 289),
        (s(2, 2), s(1, 2), 17),
        (s(1, 2), s(1, 2), 9),
    ] {
        let (rows, cols) = (a.dim(), b.dim());
        let mut count = 0;
        for mask in 0u64..1 << (rows * cols) {
            let mat = BoolMatrix::from_mask(rows, cols, mask);
            let local = brute_force_admissible(&mat, &a, &b).unwrap();
            assert_eq!(
                local,
                structural_recover(&mat, &a, &b).is_ok(),
                "{a} -> {b} mask {mask:#x}"
            );
            count += local as u32;
        }
        assert_eq!(count, accepted, "{a} -> {b}");
    }
    // two anchors for one output pointer fire together on some state
    let mut mat = BoolMatrix::zeros(4, 1);
    mat.set(0, 0, true);
    mat.set(3, 0, true);
    assert!(!brute_force_admissible(&mat, &s(2, 2), &s(1, 1)).unwrap());
}

#[test]
fn signaling_scan_counts() {
    let scan = signaling_scan(&s(2, 2), &s(2, 2), cap()).unwrap();
    assert_eq!(scan.states, 256);
    assert_eq!(scan.signaling.len(), 192);
    assert!(scan.contains(&swap_shared_state()));
    // product states never signal
    for x in enumerate_deterministic_states(&s(2, 2), cap()).unwrap() {
        for y in enumerate_deterministic_states(&s(2, 2), cap()).unwrap() {
            let p = optlab::kernel::compose_par(&x.clone().into(), &y.into());
            assert!(!scan.contains(p.as_state().unwrap()));
        }
    }
}

#[test]
fn dense_contraction_agrees_on_chains() {
    let a = s(2, 2);
    let preps = enumerate_preparation_tests(&a, cap()).unwrap();
    let chans = enumerate_channel_tests(&a, &a, cap()).unwrap();
    let obs = enumerate_observation_tests(&a, cap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let depth = rng.gen_range(0..=2);
        let mut chain = vec![&preps[rng.gen_range(0..preps.len())]];
        for _ in 0..depth {
            chain.push(&chans[rng.gen_range(0..chans.len())]);
        }
        chain.push(&obs[rng.gen_range(0..obs.len())]);
        let c = chain_circuit(&chain);
        let (kernel, dense) = nonzero(&c);
        assert_eq!(kernel, dense);
        assert_eq!(dense.values().sum::<i64>(), 1);
    }
}

#[test]
fn dense_contraction_agrees_on_random_circuits() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cfg = RandomCircuitConfig::default();
    for _ in 0..300 {
        let c = random_circuit(&mut rng, &cfg);
        let (kernel, dense) = nonzero(&c);
        assert_eq!(kernel, dense);
    }
}

#[test]
fn independent_circuits_multiply() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cfg = RandomCircuitConfig {
        max_nodes: 4,
        ..Default::default()
    };
    for _ in 0..50 {
        let (x, y) = (
            random_circuit(&mut rng, &cfg),
            random_circuit(&mut rng, &cfg),
        );
        let both = side_by_side(&x, &y);
        let (jx, jy, jb) = (
            x.joint_distribution().unwrap(),
            y.joint_distribution().unwrap(),
            both.joint_distribution().unwrap(),
        );
        for (kx, &px) in &jx.entries {
            for (ky, &py) in &jy.entries {
                let key: Vec<usize> = kx.iter().chain(ky).copied().collect();
                assert_eq!(jb.entries.get(&key).copied().unwrap_or(0), px * py);
            }
        }
    }
}

#[test]
fn atomicity_on_small_systems() {
    for (a, b) in [(s(1, 2), s(2, 1)), (s(2, 1), s(1, 2)), (s(2, 2), s(1, 2))] {
        let atoms = enumerate_atomic_transformations(&a, &b);
        assert_eq!(atoms.len(), a.dim() * b.dim());
        for t in &atoms {
            let v =
                check_atomicity(&optlab::EventKind::from_transformation(t.clone()), cap()).unwrap();
            assert!(v.atomic, "{t}");
        }
        for t in enumerate_transformations(&a, &b, cap()).unwrap() {
            if t.support_len() > 1 {
                let v = check_atomicity(&optlab::EventKind::from_transformation(t.clone()), cap())
                    .unwrap();
                assert!(!v.atomic, "{t}");
            }
        }
        assert!(composite_atoms_are_products(&a, &b));
    }
}

#[test]
fn determinism_on_other_systems() {
    for sys in [s(1, 2), s(2, 1), s(1, 3)] {
        let cfg = DeterminismConfig {
            depth: 2,
            random_circuits: 200,
            ..DeterminismConfig::default()
        };
        let out = check_determinism(&sys, &cfg, cap()).unwrap();
        assert!(out.holds(), "{sys}: {:?}", out.failures);
    }
}

#[test]
fn cap_is_enforced() {
    let tiny = EnumCap(5);
    assert!(matches!(
        enumerate_states(&s(3, 3), tiny),
        Err(OracleError::CapExceeded { .. })
    ));
    assert!(enumerate_states(&s(2, 2), tiny)
        .unwrap_err()
        .to_string()
        .contains(CAP_ENV));
}
