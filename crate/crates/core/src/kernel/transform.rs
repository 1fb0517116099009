use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::{check_range, BoolMatrix, KernelError, Result};
use crate::system::SystemType;

/// What a transformation does at one output pointer `t`: read the input at
/// pointer `anchor = f(t)` and, if its value is `s'`, emit `targets[s'] = g(t, s')`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Branch {
    pub anchor: usize,
    pub targets: Vec<Option<usize>>,
}

/// One support cell `(s', t) ∈ Ω` with its anchor `f(t)` and output value `g(t, s')`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cell {
    pub input_value: usize,
    pub output_pointer: usize,
    pub anchor: usize,
    pub output_value: usize,
}

/// Reasons a 0/1 matrix is not of the form `T^{f,g}_Ω`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecoveryError {
    #[error("matrix is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    Shape {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("cell (s'={input_value}, t={output_pointer}) has {count} nonzero entries")]
    MultipleEntries {
        input_value: usize,
        output_pointer: usize,
        count: usize,
    },
    #[error("output pointer {output_pointer} reads from input pointers {first} and {second}")]
    AnchorConflict {
        output_pointer: usize,
        first: usize,
        second: usize,
    },
}

/// A transformation event `T^{f,g}_Ω` from `n ▷ m` to `p ▷ q` in canonical form.
///
/// `branches[t]` is `None` when no cell `(·, t)` lies in `Ω`; otherwise it holds
/// the shared anchor and at least one target. `f` and `g` are kept only on the
/// support, so derived equality coincides with equality of the Boolean matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TransformationEvent {
    input: SystemType,
    output: SystemType,
    branches: Vec<Option<Branch>>,
}

impl TransformationEvent {
    pub fn zero(input: SystemType, output: SystemType) -> Self {
        let branches = vec![None; output.n()];
        TransformationEvent {
            input,
            output,
            branches,
        }
    }

    /// Builds from support cells, rejecting duplicate cells and anchor conflicts.
    pub fn from_cells(
        input: SystemType,
        output: SystemType,
        cells: impl IntoIterator<Item = Cell>,
    ) -> Result<Self> {
        let mut event = Self::zero(input, output);
        for cell in cells {
            event.insert_cell(cell)?;
        }
        Ok(event)
    }

    pub(crate) fn insert_cell(&mut self, cell: Cell) -> Result<()> {
        let (n, m, p, q) = self.sizes();
        check_range("input value", cell.input_value, m)?;
        check_range("output pointer", cell.output_pointer, p)?;
        check_range("anchor", cell.anchor, n)?;
        check_range("output value", cell.output_value, q)?;
        let slot = &mut self.branches[cell.output_pointer];
        let branch = slot.get_or_insert_with(|| Branch {
            anchor: cell.anchor,
            targets: vec![None; m],
        });
        if branch.anchor != cell.anchor {
            return Err(KernelError::AnchorConflict {
                t: cell.output_pointer,
                first: branch.anchor,
                second: cell.anchor,
            });
        }
        if branch.targets[cell.input_value].is_some() {
            return Err(KernelError::Overlap {
                what: "transformation",
                detail: format!(
                    "cell ({}, {}) given twice",
                    cell.input_value, cell.output_pointer
                ),
            });
        }
        branch.targets[cell.input_value] = Some(cell.output_value);
        Ok(())
    }

    /// Builds directly from per-pointer branches. Branches with no target are dropped.
    pub fn from_branches(
        input: SystemType,
        output: SystemType,
        branches: Vec<Option<Branch>>,
    ) -> Result<Self> {
        check_len("branch count", branches.len(), output.n())?;
        let mut canonical = Vec::with_capacity(branches.len());
        for branch in branches {
            match branch {
                Some(b) if b.targets.iter().any(Option::is_some) => {
                    check_range("anchor", b.anchor, input.n())?;
                    check_len("target count", b.targets.len(), input.m())?;
                    for t in b.targets.iter().flatten() {
                        check_range("output value", *t, output.m())?;
                    }
                    canonical.push(Some(b));
                }
                _ => canonical.push(None),
            }
        }
        Ok(TransformationEvent {
            input,
            output,
            branches: canonical,
        })
    }

    /// The atomic transformation `A[s,s' → t,t']`.
    pub fn atomic(
        input: SystemType,
        output: SystemType,
        s: usize,
        s_prime: usize,
        t: usize,
        t_prime: usize,
    ) -> Result<Self> {
        Self::from_cells(
            input,
            output,
            [Cell {
                input_value: s_prime,
                output_pointer: t,
                anchor: s,
                output_value: t_prime,
            }],
        )
    }

    /// The channel `T^{f,g}` with full support `Ω = Γ_m × Γ_p`.
    pub fn channel(
        input: SystemType,
        output: SystemType,
        f: &[usize],
        g: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        check_len("anchor function length", f.len(), output.n())?;
        let m = input.m();
        let cells: Vec<Cell> = (0..output.n())
            .flat_map(|t| {
                let g = &g;
                (0..m).map(move |s_prime| Cell {
                    input_value: s_prime,
                    output_pointer: t,
                    anchor: f[t],
                    output_value: g(t, s_prime),
                })
            })
            .collect();
        Self::from_cells(input, output, cells)
    }

    pub fn identity(system: SystemType) -> Self {
        let branches = (0..system.n())
            .map(|t| {
                Some(Branch {
                    anchor: t,
                    targets: (0..system.m()).map(Some).collect(),
                })
            })
            .collect();
        TransformationEvent {
            input: system.clone(),
            output: system,
            branches,
        }
    }

    /// Recovers the canonical `(Ω, f, g)` form of a 0/1 matrix, or reports which
    /// structural constraint fails.
    pub fn from_matrix(
        input: SystemType,
        output: SystemType,
        matrix: &BoolMatrix,
    ) -> std::result::Result<Self, RecoveryError> {
        let (n, m, p, q) = (input.n(), input.m(), output.n(), output.m());
        if matrix.rows() != n * m || matrix.cols() != p * q {
            return Err(RecoveryError::Shape {
                rows: matrix.rows(),
                cols: matrix.cols(),
                expected_rows: n * m,
                expected_cols: p * q,
            });
        }
        let mut branches: Vec<Option<Branch>> = vec![None; p];
        for (t, slot) in branches.iter_mut().enumerate() {
            for s_prime in 0..m {
                let mut hits = Vec::new();
                for s in 0..n {
                    for t_prime in 0..q {
                        if matrix.get(s * m + s_prime, t * q + t_prime) {
                            hits.push((s, t_prime));
                        }
                    }
                }
                let (s, t_prime) = match hits.as_slice() {
                    [] => continue,
                    [single] => *single,
                    _ => {
                        return Err(RecoveryError::MultipleEntries {
                            input_value: s_prime,
                            output_pointer: t,
                            count: hits.len(),
                        })
                    }
                };
                let branch = slot.get_or_insert_with(|| Branch {
                    anchor: s,
                    targets: vec![None; m],
                });
                if branch.anchor != s {
                    return Err(RecoveryError::AnchorConflict {
                        output_pointer: t,
                        first: branch.anchor,
                        second: s,
                    });
                }
                branch.targets[s_prime] = Some(t_prime);
            }
        }
        Ok(TransformationEvent {
            input,
            output,
            branches,
        })
    }

    pub fn to_matrix(&self) -> BoolMatrix {
        let (_, m, p, q) = self.sizes();
        let mut matrix = BoolMatrix::zeros(self.input.dim(), p * q);
        for cell in self.cells() {
            matrix.set(
                cell.anchor * m + cell.input_value,
                cell.output_pointer * q + cell.output_value,
                true,
            );
        }
        matrix
    }

    /// Coordinates over the atomic transformations `A[s,s'→t,t']`, index
    /// `(s·m + s')·(p·q) + t·q + t'`.
    pub fn as_vector(&self) -> Vec<u8> {
        self.to_matrix().entries()
    }

    pub fn input(&self) -> &SystemType {
        &self.input
    }

    pub fn output(&self) -> &SystemType {
        &self.output
    }

    pub fn branches(&self) -> &[Option<Branch>] {
        &self.branches
    }

    pub fn anchor(&self, t: usize) -> Option<usize> {
        self.branches.get(t)?.as_ref().map(|b| b.anchor)
    }

    pub fn target(&self, t: usize, s_prime: usize) -> Option<usize> {
        self.branches
            .get(t)?
            .as_ref()?
            .targets
            .get(s_prime)
            .copied()
            .flatten()
    }

    /// Support cells ordered by `(s', t)`.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells: Vec<Cell> = self
            .branches
            .iter()
            .enumerate()
            .filter_map(|(t, b)| b.as_ref().map(|b| (t, b)))
            .flat_map(|(t, b)| {
                b.targets
                    .iter()
                    .enumerate()
                    .filter_map(move |(s_prime, target)| {
                        target.map(|out| Cell {
                            input_value: s_prime,
                            output_pointer: t,
                            anchor: b.anchor,
                            output_value: out,
                        })
                    })
            })
            .collect();
        cells.sort_by_key(|c| (c.input_value, c.output_pointer));
        cells
    }

    pub fn support_len(&self) -> usize {
        self.branches
            .iter()
            .flatten()
            .map(|b| b.targets.iter().flatten().count())
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.branches.iter().all(Option::is_none)
    }

    /// Full support `Ω = Γ_m × Γ_p`.
    pub fn is_channel(&self) -> bool {
        self.branches.iter().all(|b| {
            b.as_ref()
                .is_some_and(|b| b.targets.iter().all(Option::is_some))
        })
    }

    pub fn is_atomic(&self) -> bool {
        self.support_len() == 1
    }

    fn sizes(&self) -> (usize, usize, usize, usize) {
        (
            self.input.n(),
            self.input.m(),
            self.output.n(),
            self.output.m(),
        )
    }
}

fn check_len(what: &'static str, found: usize, expected: usize) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(KernelError::OutOfRange {
            what,
            index: found,
            bound: expected,
        })
    }
}

impl fmt::Display for TransformationEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, c) in self.cells().iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(
                f,
                "({},{}) -> ({},{})",
                c.input_value, c.output_pointer, c.anchor, c.output_value
            )?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s22() -> SystemType {
        SystemType::new(2, 2)
    }

    #[test]
    fn identity_cells_and_display() {
        let id = TransformationEvent::identity(s22());
        assert!(id.is_channel());
        assert_eq!(
            id.to_string(),
            "{(0,0) -> (0,0), (0,1) -> (1,0), (1,0) -> (0,1), (1,1) -> (1,1)}"
        );
        let rebuilt = TransformationEvent::from_cells(s22(), s22(), id.cells()).unwrap();
        assert_eq!(rebuilt, id);
    }

    #[test]
    fn anchor_conflict_and_duplicates() {
        let cell = |s_prime, t, anchor, out| Cell {
            input_value: s_prime,
            output_pointer: t,
            anchor,
            output_value: out,
        };
        let err =
            TransformationEvent::from_cells(s22(), s22(), [cell(0, 0, 0, 0), cell(1, 0, 1, 0)])
                .unwrap_err();
        assert!(matches!(err, KernelError::AnchorConflict { t: 0, .. }));
        let err =
            TransformationEvent::from_cells(s22(), s22(), [cell(0, 0, 0, 0), cell(0, 0, 0, 1)])
                .unwrap_err();
        assert!(matches!(err, KernelError::Overlap { .. }));
    }

    #[test]
    fn matrix_round_trip_and_failures() {
        let t = TransformationEvent::channel(s22(), SystemType::new(3, 2), &[1, 0, 1], |t, s| {
            (t + s) % 2
        })
        .unwrap();
        let m = t.to_matrix();
        assert_eq!(m.count_ones(), 6);
        assert_eq!(
            TransformationEvent::from_matrix(s22(), SystemType::new(3, 2), &m).unwrap(),
            t
        );

        // c[0,0][0,0] = c[1,0][0,1] = 1: same (s', t), two rows.
        let mut bad = BoolMatrix::zeros(4, 4);
        bad.set(0, 0, true);
        bad.set(2, 1, true);
        assert!(matches!(
            TransformationEvent::from_matrix(s22(), s22(), &bad),
            Err(RecoveryError::MultipleEntries { .. })
        ));
        // Same t, different s' read from different anchors.
        let mut bad = BoolMatrix::zeros(4, 4);
        bad.set(0, 0, true);
        bad.set(3, 1, true);
        assert!(matches!(
            TransformationEvent::from_matrix(s22(), s22(), &bad),
            Err(RecoveryError::AnchorConflict { .. })
        ));
        let zero =
            TransformationEvent::from_matrix(s22(), s22(), &BoolMatrix::zeros(4, 4)).unwrap();
        assert!(zero.is_zero());
    }
}
