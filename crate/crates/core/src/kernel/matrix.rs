use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("entry {value} at ({row}, {col}) is not 0 or 1")]
    NotBoolean { row: usize, col: usize, value: i64 },
    #[error("expected {expected} entries, got {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("cannot multiply {0}x{1} by {2}x{3}")]
    Shape(usize, usize, usize, usize),
}

/// A dense 0/1 matrix over atomic bases. Row `s·m + s'` is the image of the
/// atomic input `α_{s,s'}`; column `t·q + t'` is the atomic output `α_{t,t'}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl BoolMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BoolMatrix {
            rows,
            cols,
            bits: vec![false; rows * cols],
        }
    }

    /// Builds from row-major integer entries, rejecting anything outside `{0, 1}`.
    pub fn from_entries(rows: usize, cols: usize, entries: &[i64]) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::WrongLength {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        let mut bits = Vec::with_capacity(entries.len());
        for (k, &value) in entries.iter().enumerate() {
            match value {
                0 => bits.push(false),
                1 => bits.push(true),
                _ => {
                    return Err(MatrixError::NotBoolean {
                        row: k / cols,
                        col: k % cols,
                        value,
                    })
                }
            }
        }
        Ok(BoolMatrix { rows, cols, bits })
    }

    /// Bit `k` of `mask` is entry `k` in row-major order. Needs `rows·cols ≤ 64`.
    pub fn from_mask(rows: usize, cols: usize, mask: u64) -> Self {
        assert!(rows * cols <= 64, "mask matrices are limited to 64 entries");
        let bits = (0..rows * cols).map(|k| mask >> k & 1 == 1).collect();
        BoolMatrix { rows, cols, bits }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.bits[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[bool] {
        &self.bits[row * self.cols..(row + 1) * self.cols]
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Row-major 0/1 entries.
    pub fn entries(&self) -> Vec<u8> {
        self.bits.iter().map(|&b| b as u8).collect()
    }

    /// Product in the Boolean semiring (OR of ANDs).
    pub fn boolean_product(&self, other: &BoolMatrix) -> Result<BoolMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::Shape(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut out = BoolMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if !self.get(i, k) {
                    continue;
                }
                for j in 0..other.cols {
                    if other.get(k, j) {
                        out.set(i, j, true);
                    }
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                writeln!(f)?;
            }
            for c in 0..self.cols {
                write!(f, "{}", self.get(r, c) as u8)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_entries_rejected() {
        let err = BoolMatrix::from_entries(2, 2, &[1, 0, -1, 0]).unwrap_err();
        assert_eq!(
            err,
            MatrixError::NotBoolean {
                row: 1,
                col: 0,
                value: -1
            }
        );
        assert!(BoolMatrix::from_entries(2, 2, &[1, 0, 2, 0]).is_err());
        assert!(BoolMatrix::from_entries(2, 2, &[1]).is_err());
    }

    #[test]
    fn product_matches_hand_computation() {
        let a = BoolMatrix::from_entries(2, 2, &[0, 1, 1, 0]).unwrap();
        let b = BoolMatrix::from_entries(2, 3, &[1, 0, 0, 0, 1, 1]).unwrap();
        let p = a.boolean_product(&b).unwrap();
        assert_eq!(p.entries(), vec![0, 1, 1, 1, 0, 0]);
        assert!(b.boolean_product(&a).is_err());
        assert_eq!(
            BoolMatrix::from_mask(2, 2, 0b1001).entries(),
            vec![1, 0, 0, 1]
        );
    }
}
