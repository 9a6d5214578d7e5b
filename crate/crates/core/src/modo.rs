//! Matrix-coefficient ordinary differential operators.
//!
//! An operator `L = Σ αᵢ(x) ∂ⁱ` has `N x N` rational-function coefficients
//! and acts on `N`-vector functions by `L(f) = Σ αᵢ f⁽ⁱ⁾`. Multiplication is
//! composition, so it is not commutative: `∂ ∘ β = β ∂ + β'`.

use num_traits::One;
use thiserror::Error;

use crate::arith::RatFunc;
use crate::linalg::{Matrix, VecFunc};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModoError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coefficient of ∂^{power} is {rows}x{cols}, expected {n}x{n}")]
    BadCoefficient { power: usize, rows: usize, cols: usize, n: usize },
    #[error("operator dimension must be at least 1")]
    ZeroDimension,
}

/// A differential operator with `N x N` matrix coefficients.
///
/// `coeffs[i]` multiplies `∂ⁱ`. The list never ends in a zero matrix, so the
/// zero operator has no coefficients and no order.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixOperator<S> {
    n: usize,
    coeffs: Vec<Matrix<S>>,
}

impl<S: Scalar> MatrixOperator<S> {
    /// Builds an operator from coefficients in ascending powers of `∂`,
    /// dropping trailing zero coefficients.
    pub fn new(n: usize, mut coeffs: Vec<Matrix<S>>) -> Result<Self, ModoError> {
        if n == 0 {
            return Err(ModoError::ZeroDimension);
        }
        for (power, c) in coeffs.iter().enumerate() {
            if c.shape() != (n, n) {
                return Err(ModoError::BadCoefficient {
                    power,
                    rows: c.rows(),
                    cols: c.cols(),
                    n,
                });
            }
        }
        while coeffs.last().is_some_and(Matrix::is_zero) {
            coeffs.pop();
        }
        Ok(MatrixOperator { n, coeffs })
    }

    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "operator dimension must be at least 1");
        MatrixOperator { n, coeffs: Vec::new() }
    }

    /// The identity operator `I ∂⁰`.
    pub fn identity(n: usize) -> Self {
        Self::monomial(Matrix::identity(n), 0).expect("identity is square")
    }

    /// `I ∂`.
    pub fn d(n: usize) -> Self {
        Self::monomial(Matrix::identity(n), 1).expect("identity is square")
    }

    /// `coeff ∂^power`.
    pub fn monomial(coeff: Matrix<S>, power: usize) -> Result<Self, ModoError> {
        let n = coeff.rows();
        let mut coeffs = vec![Matrix::zeros(n, n); power];
        coeffs.push(coeff);
        Self::new(n, coeffs)
    }

    /// A scalar (`N = 1`) operator from rational-function coefficients.
    pub fn scalar(coeffs: Vec<RatFunc<S>>) -> Self {
        let coeffs = coeffs.into_iter().map(|c| Matrix::scalar(1, c)).collect();
        Self::new(1, coeffs).expect("1x1 coefficients")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Matrix<S>] {
        &self.coeffs
    }

    /// Coefficient of `∂^power`, which is the zero matrix beyond the order.
    pub fn coeff(&self, power: usize) -> Matrix<S> {
        self.coeffs
            .get(power)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.n, self.n))
    }

    /// Highest power of `∂` with a nonzero coefficient; `None` for zero.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coeff(&self) -> Option<&Matrix<S>> {
        self.coeffs.last()
    }

    /// Leading coefficient is the identity matrix.
    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(Matrix::is_identity)
    }

    fn check_dim(&self, other: usize) -> Result<(), ModoError> {
        if self.n != other {
            return Err(ModoError::DimensionMismatch { expected: self.n, found: other });
        }
        Ok(())
    }

    fn from_raw(n: usize, coeffs: Vec<Matrix<S>>) -> Self {
        Self::new(n, coeffs).expect("coefficients are n x n")
    }

    pub fn add(&self, other: &Self) -> Result<Self, ModoError> {
        self.check_dim(other.n)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b).expect("same shape"),
                (Some(a), None) | (None, Some(a)) => a.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Ok(Self::from_raw(self.n, coeffs))
    }

    pub fn neg(&self) -> Self {
        MatrixOperator {
            n: self.n,
            coeffs: self.coeffs.iter().map(Matrix::neg).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ModoError> {
        self.add(&other.neg())
    }

    /// `A ∘ self` for a coefficient matrix `A` (an order-zero operator).
    pub fn left_mul_matrix(&self, a: &Matrix<S>) -> Result<Self, ModoError> {
        self.check_dim(a.rows())?;
        self.check_dim(a.cols())?;
        let coeffs = self.coeffs.iter().map(|c| a.mul(c).expect("n x n")).collect();
        Ok(Self::from_raw(self.n, coeffs))
    }

    /// Composition `self ∘ other`, expanding each pair of monomials by
    /// `(A ∂ᵐ)(B ∂ⁿ) = Σᵢ C(m, i) A B⁽ⁱ⁾ ∂^(m+n-i)`.
    pub fn mul(&self, other: &Self) -> Result<Self, ModoError> {
        self.check_dim(other.n)?;
        let (Some(p), Some(q)) = (self.order(), other.order()) else {
            return Ok(Self::zero(self.n));
        };
        let n = self.n;
        // derivs[j][i] = i-th derivative of other's ∂^j coefficient
        let derivs: Vec<Vec<Matrix<S>>> = other
            .coeffs
            .iter()
            .map(|b| {
                let mut ds = Vec::with_capacity(p + 1);
                ds.push(b.clone());
                for i in 1..=p {
                    let next = ds[i - 1].diff();
                    ds.push(next);
                }
                ds
            })
            .collect();
        let mut out = vec![Matrix::zeros(n, n); p + q + 1];
        let mut binom: Vec<RatFunc<S>> = vec![RatFunc::one()];
        for (m, a) in self.coeffs.iter().enumerate() {
            if m > 0 {
                binom = pascal_next(&binom);
            }
            if a.is_zero() {
                continue;
            }
            for (j, ds) in derivs.iter().enumerate() {
                for (i, bi) in ds.iter().enumerate().take(m + 1) {
                    if bi.is_zero() {
                        continue;
                    }
                    let term = a.mul(bi).expect("n x n");
                    let term = if binom[i].is_one() { term } else { term.scale(&binom[i]) };
                    let slot = &mut out[m + j - i];
                    *slot = slot.add(&term).expect("n x n");
                }
            }
        }
        Ok(Self::from_raw(n, out))
    }

    /// Composition `self ∘ other` computed by repeatedly applying
    /// `∂ ∘ (B ∂ʲ) = B' ∂ʲ + B ∂^(j+1)`. Agrees with [`Self::mul`].
    pub fn mul_by_derivation(&self, other: &Self) -> Result<Self, ModoError> {
        self.check_dim(other.n)?;
        let mut acc = Self::zero(self.n);
        let mut shifted = other.clone();
        for (m, a) in self.coeffs.iter().enumerate() {
            if m > 0 {
                shifted = shifted.derivation_left();
            }
            acc = acc.add(&shifted.left_mul_matrix(a)?)?;
        }
        Ok(acc)
    }

    /// `∂ ∘ self`.
    fn derivation_left(&self) -> Self {
        let n = self.n;
        let mut out = vec![Matrix::zeros(n, n); self.coeffs.len() + 1];
        for (j, b) in self.coeffs.iter().enumerate() {
            out[j] = out[j].add(&b.diff()).expect("same shape");
            out[j + 1] = out[j + 1].add(b).expect("same shape");
        }
        Self::from_raw(n, out)
    }

    /// `L(f) = Σ αᵢ f⁽ⁱ⁾`.
    pub fn apply(&self, f: &VecFunc<S>) -> Result<VecFunc<S>, ModoError> {
        self.check_dim(f.len())?;
        let mut acc = Matrix::zeros(self.n, 1);
        let mut deriv = f.as_matrix().clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                deriv = deriv.diff();
            }
            if !a.is_zero() {
                acc = acc.add(&a.mul(&deriv).expect("n x n times n x 1")).expect("n x 1");
            }
        }
        Ok(VecFunc::from_matrix(acc).expect("n x 1 with n >= 1"))
    }
}

fn pascal_next<S: Scalar>(row: &[RatFunc<S>]) -> Vec<RatFunc<S>> {
    let mut next = Vec::with_capacity(row.len() + 1);
    next.push(RatFunc::one());
    for w in row.windows(2) {
        next.push(&w[0] + &w[1]);
    }
    next.push(RatFunc::one());
    next
}
