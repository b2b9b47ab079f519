//! Dense bit-packed matrices over the two-element field.
//!
//! Rows are stored as runs of `u64` words. Every public index on
//! [`F2Matrix`] is 1-based (row 1 is the first row); the distinguished
//! columns `n` and `n + 1` of a bordered adjacency matrix are then cited
//! exactly as they are written in reports.

use std::fmt;

use thiserror::Error;

const WORD_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum F2Error {
    #[error("matrix must have at least one row and one column (got {rows}x{cols})")]
    EmptyShape { rows: usize, cols: usize },
    #[error("row {row} has {len} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("entry ({row},{col}) is {value}, expected 0 or 1")]
    NotABit { row: usize, col: usize, value: u8 },
    #[error("index ({row},{col}) out of range for a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("column {col} out of range for a matrix with {cols} columns")]
    ColumnOutOfRange { col: usize, cols: usize },
    #[error("dimension mismatch: {left_cols} columns times {right_rows} rows")]
    DimensionMismatch { left_cols: usize, right_rows: usize },
}

/// A matrix over F₂ with row-major bit-packed storage.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

fn words_for(cols: usize) -> usize {
    cols.div_ceil(WORD_BITS)
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self, F2Error> {
        if rows == 0 || cols == 0 {
            return Err(F2Error::EmptyShape { rows, cols });
        }
        let stride = words_for(cols);
        Ok(Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        })
    }

    pub fn identity(size: usize) -> Result<Self, F2Error> {
        let mut m = Self::zeros(size, size)?;
        for i in 0..size {
            m.set_raw(i, i, true);
        }
        Ok(m)
    }

    /// Builds a matrix from rows of 0/1 values.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self, F2Error> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols)?;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(F2Error::RaggedRow {
                    row: i + 1,
                    len: row.len(),
                    expected: cols,
                });
            }
            for (j, &value) in row.iter().enumerate() {
                match value {
                    0 => {}
                    1 => m.set_raw(i, j, true),
                    _ => {
                        return Err(F2Error::NotABit {
                            row: i + 1,
                            col: j + 1,
                            value,
                        })
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    fn get_raw(&self, i: usize, j: usize) -> bool {
        (self.data[i * self.stride + j / WORD_BITS] >> (j % WORD_BITS)) & 1 == 1
    }

    #[inline]
    fn set_raw(&mut self, i: usize, j: usize, value: bool) {
        let word = &mut self.data[i * self.stride + j / WORD_BITS];
        let bit = 1u64 << (j % WORD_BITS);
        if value {
            *word |= bit;
        } else {
            *word &= !bit;
        }
    }

    fn check(&self, row: usize, col: usize) -> Result<(usize, usize), F2Error> {
        if row == 0 || col == 0 || row > self.rows || col > self.cols {
            return Err(F2Error::IndexOutOfRange {
                row,
                col,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok((row - 1, col - 1))
    }

    /// Entry at 1-based position `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> Result<bool, F2Error> {
        let (i, j) = self.check(row, col)?;
        Ok(self.get_raw(i, j))
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) -> Result<(), F2Error> {
        let (i, j) = self.check(row, col)?;
        self.set_raw(i, j, value);
        Ok(())
    }

    /// Row-major 0/1 entries, for fixtures and serialization.
    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get_raw(i, j) as u8).collect())
            .collect()
    }

    /// Column `col` (1-based) as 0/1 values, top to bottom.
    pub fn column(&self, col: usize) -> Result<Vec<u8>, F2Error> {
        let (_, j) = self.check(1, col)?;
        Ok((0..self.rows).map(|i| self.get_raw(i, j) as u8).collect())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows).expect("shape already validated");
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get_raw(i, j) {
                    t.set_raw(j, i, true);
                }
            }
        }
        t
    }

    /// Matrix product over F₂.
    pub fn mul(&self, rhs: &F2Matrix) -> Result<F2Matrix, F2Error> {
        if self.cols != rhs.rows {
            return Err(F2Error::DimensionMismatch {
                left_cols: self.cols,
                right_rows: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols)?;
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get_raw(i, k) {
                    let (src, dst) = (k * rhs.stride, i * out.stride);
                    for w in 0..out.stride {
                        out.data[dst + w] ^= rhs.data[src + w];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Adds row `src` into row `dst` (1-based), i.e. left multiplication by `E + E_{dst,src}`.
    pub fn add_row(&mut self, dst: usize, src: usize) -> Result<(), F2Error> {
        let (d, s) = (self.check(dst, 1)?.0, self.check(src, 1)?.0);
        for w in 0..self.stride {
            let v = self.data[s * self.stride + w];
            self.data[d * self.stride + w] ^= v;
        }
        Ok(())
    }

    /// Adds column `src` into column `dst` (1-based), i.e. right multiplication by `E + E_{src,dst}`.
    pub fn add_col(&mut self, dst: usize, src: usize) -> Result<(), F2Error> {
        let (d, s) = (self.check(1, dst)?.1, self.check(1, src)?.1);
        for i in 0..self.rows {
            if self.get_raw(i, s) {
                let cur = self.get_raw(i, d);
                self.set_raw(i, d, !cur);
            }
        }
        Ok(())
    }

    /// Copy with column `col` (1-based) deleted. Fails on a single-column matrix.
    pub fn without_column(&self, col: usize) -> Result<F2Matrix, F2Error> {
        let (_, skip) = self.check(1, col)?;
        let mut out = Self::zeros(self.rows, self.cols - 1)?;
        for i in 0..self.rows {
            for (dst, j) in (0..self.cols).filter(|&j| j != skip).enumerate() {
                if self.get_raw(i, j) {
                    out.set_raw(i, dst, true);
                }
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<u64>> = (0..self.rows).map(|i| self.row_words(i).to_vec()).collect();
        echelonize(&mut rows, self.cols).len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Decides whether column `target` (1-based) is an F₂-sum of the other
    /// columns. On success the witness lists the 1-based indices of the
    /// columns used, taken from the reduced echelon solution with every free
    /// variable set to zero.
    pub fn column_in_span(&self, target: usize) -> Result<Option<Vec<usize>>, F2Error> {
        if target == 0 || target > self.cols {
            return Err(F2Error::ColumnOutOfRange {
                col: target,
                cols: self.cols,
            });
        }
        let t = target - 1;
        let others: Vec<usize> = (0..self.cols).filter(|&j| j != t).collect();
        let k = others.len();
        // Augmented system [A | b] with A = other columns, b = target column.
        let stride = words_for(k + 1);
        let mut rows: Vec<Vec<u64>> = (0..self.rows)
            .map(|i| {
                let mut w = vec![0u64; stride];
                for (c, &j) in others.iter().enumerate() {
                    if self.get_raw(i, j) {
                        w[c / WORD_BITS] |= 1 << (c % WORD_BITS);
                    }
                }
                if self.get_raw(i, t) {
                    w[k / WORD_BITS] |= 1 << (k % WORD_BITS);
                }
                w
            })
            .collect();
        let pivots = echelonize(&mut rows, k + 1);
        if pivots.last() == Some(&k) {
            return Ok(None);
        }
        // Reduced form: each pivot row has its pivot as the only set bit among
        // pivot columns, so free variables at zero give x_pivot = b_row.
        let mut witness: Vec<usize> = pivots
            .iter()
            .enumerate()
            .filter(|(r, _)| (rows[*r][k / WORD_BITS] >> (k % WORD_BITS)) & 1 == 1)
            .map(|(_, &c)| others[c] + 1)
            .collect();
        witness.sort_unstable();
        Ok(Some(witness))
    }
}

/// Reduced row echelon form in place over the first `cols` bits of each row.
/// Returns the pivot column of each leading row, in order.
fn echelonize(rows: &mut [Vec<u64>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in 0..cols {
        if next == rows.len() {
            break;
        }
        let (w, b) = (c / WORD_BITS, 1u64 << (c % WORD_BITS));
        let Some(p) = (next..rows.len()).find(|&r| rows[r][w] & b != 0) else {
            continue;
        };
        rows.swap(next, p);
        let pivot = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && row[w] & b != 0 {
                row.iter_mut().zip(&pivot).for_each(|(x, y)| *x ^= y);
            }
        }
        pivots.push(c);
        next += 1;
    }
    pivots
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: String = (0..self.cols)
                .map(|j| if self.get_raw(i, j) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        write!(f, "]")
    }
}
