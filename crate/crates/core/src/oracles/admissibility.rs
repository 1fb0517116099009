//! Three independent characterizations of valid transformations on raw 0/1 matrices.

use rayon::prelude::*;

use super::{sat_pow, EnumCap, OracleError, Result, TheoryReport, Verdict};
use crate::kernel::{BoolMatrix, RecoveryError, TransformationEvent};
use crate::system::SystemType;

fn check_shape(matrix: &BoolMatrix, input: &SystemType, output: &SystemType) -> Result<()> {
    let (rows, cols) = (input.dim(), output.dim());
    if matrix.rows() != rows || matrix.cols() != cols {
        return Err(OracleError::Invalid(format!(
            "matrix is {}x{}, expected {rows}x{cols} for {input} -> {output}",
            matrix.rows(),
            matrix.cols()
        )));
    }
    Ok(())
}

/// Calls `visit` with every partial function `Γ_n → Γ_m`, as a value vector.
fn for_each_assignment(
    n: usize,
    m: usize,
    mut visit: impl FnMut(&[Option<usize>]) -> bool,
) -> bool {
    let mut values = vec![None; n];
    loop {
        if !visit(&values) {
            return false;
        }
        let mut k = 0;
        loop {
            if k == n {
                return true;
            }
            values[k] = match values[k] {
                None => Some(0),
                Some(v) if v + 1 < m => Some(v + 1),
                Some(_) => None,
            };
            if values[k].is_some() {
                break;
            }
            k += 1;
        }
    }
}

/// Local admissibility: the linear map given by `matrix` sends every state of
/// `input` (zero included) to an integer vector that is a valid state of `output`.
pub fn brute_force_admissible(
    matrix: &BoolMatrix,
    input: &SystemType,
    output: &SystemType,
) -> Result<bool> {
    check_shape(matrix, input, output)?;
    let (m, p, q) = (input.m(), output.n(), output.m());
    let mut image = vec![0u32; p * q];
    Ok(for_each_assignment(input.n(), m, |values| {
        image.iter_mut().for_each(|x| *x = 0);
        for (s, v) in values.iter().enumerate() {
            if let Some(v) = v {
                for (col, &bit) in matrix.row(s * m + v).iter().enumerate() {
                    image[col] += bit as u32;
                }
            }
        }
        image.chunks(q).all(|row| row.iter().sum::<u32>() <= 1)
    }))
}

/// Admissibility with an ancilla: `matrix ⊗ I_ancilla` must send every state
/// of `input ⊗ ancilla` to a valid state of `output ⊗ ancilla`.
pub fn ancilla_admissible(
    matrix: &BoolMatrix,
    input: &SystemType,
    output: &SystemType,
    ancilla: &SystemType,
    cap: EnumCap,
) -> Result<bool> {
    check_shape(matrix, input, output)?;
    let (n, m, p, q) = (input.n(), input.m(), output.n(), output.m());
    let (na, ma) = (ancilla.n(), ancilla.m());
    cap.check(
        || format!("states of {input} ⊗ {ancilla}"),
        sat_pow((m * ma) as u128 + 1, n * na),
    )?;
    let hits: Vec<Vec<(usize, usize)>> = (0..n * m)
        .map(|row| {
            (0..p * q)
                .filter(|&col| matrix.get(row, col))
                .map(|col| (col / q, col % q))
                .collect()
        })
        .collect();
    // Output pointer (t, a) of the composite gets at most one contribution.
    let mut taken = vec![false; p * na];
    Ok(for_each_assignment(n * na, m * ma, |values| {
        taken.iter_mut().for_each(|x| *x = false);
        for (pointer, value) in values.iter().enumerate() {
            let Some(value) = value else { continue };
            let (s, a) = (pointer / na, pointer % na);
            let s_prime = value / ma;
            for &(t, _) in &hits[s * m + s_prime] {
                let slot = &mut taken[t * na + a];
                if *slot {
                    return false;
                }
                *slot = true;
            }
        }
        true
    }))
}

/// The canonical form of `matrix`, or the structural constraint it violates.
pub fn structural_recover(
    matrix: &BoolMatrix,
    input: &SystemType,
    output: &SystemType,
) -> std::result::Result<TransformationEvent, RecoveryError> {
    TransformationEvent::from_matrix(input.clone(), output.clone(), matrix)
}

/// Outcome of running all three predicates over every 0/1 matrix of a shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityEquivalence {
    pub input: SystemType,
    pub output: SystemType,
    pub ancillas: Vec<SystemType>,
    pub matrices: u128,
    /// Matrices accepted by the structural predicate.
    pub accepted: u128,
    /// Masks on which the predicates disagree, in increasing order (at most 16 kept).
    pub disagreements: Vec<u64>,
    pub disagreement_count: u128,
}

impl AdmissibilityEquivalence {
    pub fn holds(&self) -> bool {
        self.disagreement_count == 0
    }

    pub fn report(&self) -> TheoryReport {
        let mut systems = vec![self.input.to_string(), self.output.to_string()];
        systems.extend(self.ancillas.iter().map(|a| format!("ancilla {a}")));
        let rows = self.input.dim();
        let cols = self.output.dim();
        let witness = self
            .disagreements
            .first()
            .map(|&mask| {
                let m = BoolMatrix::from_mask(rows, cols, mask);
                let mut lines = vec![format!("predicates disagree on matrix mask {mask:#x}:")];
                lines.extend(m.to_string().lines().map(str::to_string));
                lines
            })
            .unwrap_or_default();
        TheoryReport::new(
            "admissibility-equivalence",
            systems,
            Verdict::from_bool(self.holds()),
            self.matrices * (2 + self.ancillas.len() as u128),
        )
        .fact("matrices", self.matrices)
        .fact("accepted", self.accepted)
        .fact("disagreements", self.disagreement_count)
        .with_witness(witness)
    }
}

/// Runs structural recovery, local brute force and every ancilla check over all
/// `2^(nm·pq)` Boolean matrices.
pub fn admissibility_equivalence(
    input: &SystemType,
    output: &SystemType,
    ancillas: &[SystemType],
    cap: EnumCap,
) -> Result<AdmissibilityEquivalence> {
    let bits = input.dim() * output.dim();
    if bits > 40 {
        return Err(OracleError::CapExceeded {
            what: format!("0/1 matrices {input} -> {output}"),
            count: sat_pow(2, bits),
            cap: cap.0,
        });
    }
    let matrices = 1u128 << bits;
    cap.check(|| format!("0/1 matrices {input} -> {output}"), matrices)?;
    for a in ancillas {
        // Surface cap errors once, up front.
        ancilla_admissible(
            &BoolMatrix::zeros(input.dim(), output.dim()),
            input,
            output,
            a,
            cap,
        )?;
    }
    let (rows, cols) = (input.dim(), output.dim());
    let verdicts: Vec<(bool, bool)> = (0..matrices as u64)
        .into_par_iter()
        .map(|mask| {
            let matrix = BoolMatrix::from_mask(rows, cols, mask);
            let structural = structural_recover(&matrix, input, output).is_ok();
            let local = brute_force_admissible(&matrix, input, output).expect("shape checked");
            let agree = ancillas.iter().all(|a| {
                ancilla_admissible(&matrix, input, output, a, cap).expect("cap checked") == local
            });
            (structural, agree && structural == local)
        })
        .collect();
    let accepted = verdicts.iter().filter(|v| v.0).count() as u128;
    let bad: Vec<u64> = verdicts
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.1)
        .map(|(mask, _)| mask as u64)
        .collect();
    Ok(AdmissibilityEquivalence {
        input: input.clone(),
        output: output.clone(),
        ancillas: ancillas.to_vec(),
        matrices,
        accepted,
        disagreement_count: bad.len() as u128,
        disagreements: bad.into_iter().take(16).collect(),
    })
}
