//! Dense exact linear algebra over the rational function field.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::RatFunc;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch in {op}: {lhs:?} vs {rhs:?}")]
    DimensionMismatch {
        op: &'static str,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("entry list of length {len} does not fill a {rows}x{cols} matrix")]
    BadShape { rows: usize, cols: usize, len: usize },
    #[error("a vector function needs at least one component")]
    EmptyVector,
}

/// A dense row-major matrix of rational functions.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    entries: Vec<RatFunc<S>>,
}

impl<S: Scalar> Matrix<S> {
    pub fn new(rows: usize, cols: usize, entries: Vec<RatFunc<S>>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::BadShape { rows, cols, len: entries.len() });
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> RatFunc<S>) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { rows, cols, entries }
    }

    /// Builds a matrix from equal-length rows.
    pub fn from_rows(rows: Vec<Vec<RatFunc<S>>>) -> Result<Self, LinalgError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(LinalgError::DimensionMismatch {
                op: "from_rows",
                lhs: (1, ncols),
                rhs: (1, bad.len()),
            });
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| RatFunc::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { RatFunc::one() } else { RatFunc::zero() })
    }

    /// `c` times the identity.
    pub fn scalar(n: usize, c: RatFunc<S>) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { c.clone() } else { RatFunc::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc<S> {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[RatFunc<S>] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[RatFunc<S>] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j { e.is_one() } else { e.is_zero() }
                })
            })
    }

    /// The `rows x cols` block whose top-left corner is `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "submatrix out of bounds");
        Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn column(&self, j: usize) -> Self {
        self.submatrix(0, j, self.rows, 1)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    fn check_same_shape(&self, other: &Self, op: &'static str) -> Result<(), LinalgError> {
        if self.shape() != other.shape() {
            return Err(LinalgError::DimensionMismatch {
                op,
                lhs: self.shape(),
                rhs: other.shape(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_shape(other, "add")?;
        Ok(self.zip_map(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_shape(other, "sub")?;
        Ok(self.zip_map(other, |a, b| a - b))
    }

    fn zip_map(&self, other: &Self, f: impl Fn(&RatFunc<S>, &RatFunc<S>) -> RatFunc<S>) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "mul",
                lhs: self.shape(),
                rhs: other.shape(),
            });
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = RatFunc::zero();
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        }))
    }

    pub fn neg(&self) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    /// Multiplies every entry by `c`.
    pub fn scale(&self, c: &RatFunc<S>) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    /// Entrywise derivative.
    pub fn diff(&self) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(RatFunc::derivative).collect(),
        }
    }

    /// Determinant by Gaussian elimination: the signed product of the pivots.
    pub fn det(&self) -> Result<RatFunc<S>, LinalgError> {
        self.require_square()?;
        let n = self.rows;
        let mut a: Vec<Vec<RatFunc<S>>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut det = RatFunc::one();
        for k in 0..n {
            let Some(p) = pivot_row(&a, k, k) else {
                return Ok(RatFunc::zero());
            };
            if p != k {
                a.swap(p, k);
                det = -det;
            }
            det = &det * &a[k][k];
            let inv = a[k][k].inv().expect("pivot is nonzero");
            let (top, bottom) = a.split_at_mut(k + 1);
            let pivot_row = &top[k];
            for row in bottom.iter_mut() {
                if row[k].is_zero() {
                    continue;
                }
                let factor = &row[k] * &inv;
                eliminate(row, pivot_row, &factor, k + 1);
            }
        }
        Ok(det)
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self, LinalgError> {
        self.require_square()?;
        let n = self.rows;
        let mut a: Vec<Vec<RatFunc<S>>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| if i == j { RatFunc::one() } else { RatFunc::zero() }));
                row
            })
            .collect();
        for k in 0..n {
            let p = pivot_row(&a, k, k).ok_or(LinalgError::Singular)?;
            a.swap(p, k);
            let inv = a[k][k].inv().expect("pivot is nonzero");
            for e in a[k][k..].iter_mut() {
                if !e.is_zero() {
                    *e = &*e * &inv;
                }
            }
            let pivot = a[k].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == k || row[k].is_zero() {
                    continue;
                }
                let factor = row[k].clone();
                eliminate(row, &pivot, &factor, k);
            }
        }
        let entries = a.into_iter().flat_map(|row| row.into_iter().skip(n)).collect();
        Ok(Matrix { rows: n, cols: n, entries })
    }

    /// Solves `self · Y = rhs` by elimination and back substitution.
    pub fn solve(&self, rhs: &Self) -> Result<Self, LinalgError> {
        self.require_square()?;
        let n = self.rows;
        if rhs.rows != n {
            return Err(LinalgError::DimensionMismatch {
                op: "solve",
                lhs: self.shape(),
                rhs: rhs.shape(),
            });
        }
        let r = rhs.cols;
        let mut a: Vec<Vec<RatFunc<S>>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend_from_slice(rhs.row(i));
                row
            })
            .collect();
        for k in 0..n {
            let p = pivot_row(&a, k, k).ok_or(LinalgError::Singular)?;
            a.swap(p, k);
            let inv = a[k][k].inv().expect("pivot is nonzero");
            let (top, bottom) = a.split_at_mut(k + 1);
            let pivot = &top[k];
            for row in bottom.iter_mut() {
                if row[k].is_zero() {
                    continue;
                }
                let factor = &row[k] * &inv;
                eliminate(row, pivot, &factor, k + 1);
            }
        }
        let mut y = vec![vec![RatFunc::zero(); r]; n];
        for k in (0..n).rev() {
            let inv = a[k][k].inv().expect("pivot is nonzero");
            for c in 0..r {
                let mut acc = a[k][n + c].clone();
                for (j, yj) in y.iter().enumerate().skip(k + 1) {
                    if !a[k][j].is_zero() && !yj[c].is_zero() {
                        acc = &acc - &(&a[k][j] * &yj[c]);
                    }
                }
                y[k][c] = &acc * &inv;
            }
        }
        Ok(Matrix {
            rows: n,
            cols: r,
            entries: y.into_iter().flatten().collect(),
        })
    }

    /// Solves `X · self = rhs`, i.e. computes `rhs · self⁻¹` without forming
    /// the inverse.
    pub fn solve_left(&self, rhs: &Self) -> Result<Self, LinalgError> {
        Ok(self.transpose().solve(&rhs.transpose())?.transpose())
    }

    fn require_square(&self) -> Result<(), LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(())
    }

    /// Concatenates a grid of blocks. Blocks in a grid row share a height and
    /// blocks in a grid column share a width.
    pub fn block_assemble(grid: &[Vec<Self>]) -> Result<Self, LinalgError> {
        let Some(first_row) = grid.first() else {
            return Ok(Self::zeros(0, 0));
        };
        let widths: Vec<usize> = first_row.iter().map(Matrix::cols).collect();
        let total_cols: usize = widths.iter().sum();
        let mut entries = Vec::new();
        let mut total_rows = 0;
        for blocks in grid {
            if blocks.len() != widths.len() {
                return Err(LinalgError::DimensionMismatch {
                    op: "block_assemble",
                    lhs: (1, widths.len()),
                    rhs: (1, blocks.len()),
                });
            }
            let height = blocks.first().map_or(0, Matrix::rows);
            for (b, &w) in blocks.iter().zip(&widths) {
                if b.rows != height || b.cols != w {
                    return Err(LinalgError::DimensionMismatch {
                        op: "block_assemble",
                        lhs: (height, w),
                        rhs: b.shape(),
                    });
                }
            }
            for i in 0..height {
                for b in blocks {
                    entries.extend_from_slice(b.row(i));
                }
            }
            total_rows += height;
        }
        Ok(Matrix { rows: total_rows, cols: total_cols, entries })
    }
}

/// Row at or below `start` with a nonzero entry in column `col`, preferring
/// the entry of least combined numerator and denominator degree.
fn pivot_row<S: Scalar>(a: &[Vec<RatFunc<S>>], start: usize, col: usize) -> Option<usize> {
    let weight = |e: &RatFunc<S>| {
        e.num().degree().unwrap_or(0) + e.den().degree().unwrap_or(0)
    };
    (start..a.len())
        .filter(|&i| !a[i][col].is_zero())
        .min_by_key(|&i| weight(&a[i][col]))
}

/// `row -= factor * pivot` over columns `from..`.
fn eliminate<S: Scalar>(row: &mut [RatFunc<S>], pivot: &[RatFunc<S>], factor: &RatFunc<S>, from: usize) {
    for (e, p) in row[from..].iter_mut().zip(&pivot[from..]) {
        if !p.is_zero() {
            *e = &*e - &(factor * p);
        }
    }
}

/// An `N`-vector of rational functions, stored as an `N x 1` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct VecFunc<S>(Matrix<S>);

impl<S: Scalar> VecFunc<S> {
    pub fn new(components: Vec<RatFunc<S>>) -> Result<Self, LinalgError> {
        if components.is_empty() {
            return Err(LinalgError::EmptyVector);
        }
        let n = components.len();
        Ok(VecFunc(Matrix { rows: n, cols: 1, entries: components }))
    }

    pub fn from_matrix(m: Matrix<S>) -> Result<Self, LinalgError> {
        if m.cols != 1 {
            return Err(LinalgError::DimensionMismatch {
                op: "vector",
                lhs: (m.rows, 1),
                rhs: m.shape(),
            });
        }
        if m.rows == 0 {
            return Err(LinalgError::EmptyVector);
        }
        Ok(VecFunc(m))
    }

    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "vector functions have at least one component");
        VecFunc(Matrix::zeros(n, 1))
    }

    pub fn len(&self) -> usize {
        self.0.rows
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn components(&self) -> &[RatFunc<S>] {
        &self.0.entries
    }

    pub fn get(&self, i: usize) -> &RatFunc<S> {
        &self.0.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn derivative(&self) -> Self {
        VecFunc(self.0.diff())
    }

    /// The `k`-th derivative.
    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |v, _| v.derivative())
    }

    pub fn as_matrix(&self) -> &Matrix<S> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<S> {
        self.0
    }
}
