//! Kernel operators and right factorization.
//!
//! Given `MN` vector functions `φ₁ … φ_MN` of length `N` whose block
//! Wronskian `Φ` is invertible, there is exactly one monic operator `K` of
//! order `M` annihilating all of them, and every operator annihilating them
//! factors as `Q ∘ K`. This module builds `K` and finds `Q` by monic right
//! division.

use num_traits::Zero;
use thiserror::Error;

use crate::arith::RatFunc;
use crate::linalg::{Matrix, VecFunc};
use crate::modo::{MatrixOperator, ModoError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FactorError<S: Scalar> {
    #[error("kernel problem has no functions")]
    EmptyProblem,
    #[error("function {index} has {found} components, expected {expected}")]
    RaggedFunctions { index: usize, expected: usize, found: usize },
    #[error("{count} functions of length {n}: count must be a positive multiple of {n}")]
    NotDivisible { count: usize, n: usize },
    /// `det Φ = 0`; carries `Φ` itself.
    #[error("block Wronskian is singular")]
    SingularWronskian { wronskian: Matrix<S> },
    #[error("divisor is not monic")]
    NonMonicDivisor,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    /// `L(φᵢ) ≠ 0` for the 1-based `index`.
    #[error("operator does not annihilate phi_{index}")]
    KernelViolation { index: usize, residual: VecFunc<S> },
    #[error("scalar Wronskian needs N = 1, got N = {n}")]
    NotScalar { n: usize },
}

impl<S: Scalar> FactorError<S> {
    /// Fixed identifier for scripted callers.
    pub fn code(&self) -> &'static str {
        match self {
            FactorError::SingularWronskian { .. } => "SINGULAR_WRONSKIAN",
            FactorError::NonMonicDivisor => "NON_MONIC_DIVISOR",
            FactorError::KernelViolation { .. } => "KERNEL_VIOLATION",
            FactorError::EmptyProblem
            | FactorError::RaggedFunctions { .. }
            | FactorError::NotDivisible { .. }
            | FactorError::DimensionMismatch { .. }
            | FactorError::NotScalar { .. } => "DIMENSION_MISMATCH",
        }
    }
}

impl<S: Scalar> From<ModoError> for FactorError<S> {
    fn from(e: ModoError) -> Self {
        match e {
            ModoError::DimensionMismatch { expected, found } => {
                FactorError::DimensionMismatch { expected, found }
            }
            ModoError::BadCoefficient { rows, n, .. } => FactorError::DimensionMismatch { expected: n, found: rows },
            ModoError::ZeroDimension => FactorError::DimensionMismatch { expected: 1, found: 0 },
        }
    }
}

/// `MN` vector functions of common length `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelProblem<S> {
    n: usize,
    m: usize,
    functions: Vec<VecFunc<S>>,
}

impl<S: Scalar> KernelProblem<S> {
    /// Infers `N` from the vector length and `M` as `count / N`.
    pub fn new(functions: Vec<VecFunc<S>>) -> Result<Self, FactorError<S>> {
        let n = functions.first().ok_or(FactorError::EmptyProblem)?.len();
        if let Some((index, f)) = functions.iter().enumerate().find(|(_, f)| f.len() != n) {
            return Err(FactorError::RaggedFunctions {
                index: index + 1,
                expected: n,
                found: f.len(),
            });
        }
        if functions.len() % n != 0 {
            return Err(FactorError::NotDivisible { count: functions.len(), n });
        }
        let m = functions.len() / n;
        Ok(KernelProblem { n, m, functions })
    }

    pub fn functions(&self) -> &[VecFunc<S>] {
        &self.functions
    }

    /// Vector length `N`.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Order `M` of the kernel operator.
    pub fn order(&self) -> usize {
        self.m
    }

    /// The `N x MN` matrix `(φ₁⁽ᵏ⁾ ⋯ φ_MN⁽ᵏ⁾)`.
    pub fn derivative_block(&self, k: usize) -> Matrix<S> {
        let cols: Vec<VecFunc<S>> = self.functions.iter().map(|f| f.nth_derivative(k)).collect();
        Matrix::from_fn(self.n, cols.len(), |i, j| cols[j].get(i).clone())
    }

    /// The `MN x MN` block Wronskian: block row `k` holds the `k`-th
    /// derivatives, so each row is the derivative of the row `N` above it.
    pub fn block_wronskian(&self) -> Matrix<S> {
        let mut block = self.derivative_block(0);
        let mut grid = Vec::with_capacity(self.m);
        for _ in 0..self.m {
            let next = block.diff();
            grid.push(vec![block]);
            block = next;
        }
        Matrix::block_assemble(&grid).expect("blocks share width MN")
    }

    /// The unique monic order-`M` operator annihilating every `φᵢ`.
    ///
    /// This is the Schur complement of `Φ` in the block matrix whose last
    /// block column is `(I, ∂I, …, ∂ᴹI)`:
    /// `K = I∂ᴹ − (φ⁽ᴹ⁾ Φ⁻¹)(I, ∂I, …, ∂ᴹ⁻¹I)ᵀ`.
    pub fn kernel_operator(&self) -> Result<MatrixOperator<S>, FactorError<S>> {
        let phi = self.block_wronskian();
        // weights = φ⁽ᴹ⁾ Φ⁻¹, found by solving weights · Φ = φ⁽ᴹ⁾
        let weights = match phi.solve_left(&self.derivative_block(self.m)) {
            Ok(w) => w,
            Err(_) => return Err(FactorError::SingularWronskian { wronskian: phi }),
        };
        let n = self.n;
        let mut coeffs: Vec<Matrix<S>> = (0..self.m)
            .map(|j| weights.submatrix(0, j * n, n, n).neg())
            .collect();
        coeffs.push(Matrix::identity(n));
        Ok(MatrixOperator::new(n, coeffs)?)
    }

    /// Index (1-based) and image of the first function `l` fails to annihilate.
    pub fn first_violation(&self, l: &MatrixOperator<S>) -> Result<Option<(usize, VecFunc<S>)>, FactorError<S>> {
        for (i, f) in self.functions.iter().enumerate() {
            let image = l.apply(f)?;
            if !image.is_zero() {
                return Ok(Some((i + 1, image)));
            }
        }
        Ok(None)
    }

    /// `Q` with `l = Q ∘ K`, where `K` is [`Self::kernel_operator`].
    pub fn factor_through_kernel(&self, l: &MatrixOperator<S>) -> Result<MatrixOperator<S>, FactorError<S>> {
        if l.dim() != self.n {
            return Err(FactorError::DimensionMismatch { expected: self.n, found: l.dim() });
        }
        let k = self.kernel_operator()?;
        if let Some((index, residual)) = self.first_violation(l)? {
            return Err(FactorError::KernelViolation { index, residual });
        }
        let DivisionResult { quotient, remainder } = right_divide(l, &k)?;
        assert!(
            remainder.is_zero(),
            "an operator annihilating every phi must be right-divisible by the kernel operator"
        );
        Ok(quotient)
    }

    /// `Wr(φ₁, …, φ_M, f) / Wr(φ₁, …, φ_M)` for scalar problems.
    pub fn scalar_wronskian_ratio(&self, f: &RatFunc<S>) -> Result<RatFunc<S>, FactorError<S>> {
        if self.n != 1 {
            return Err(FactorError::NotScalar { n: self.n });
        }
        let base = self.block_wronskian();
        let denom = base.det().expect("square");
        if denom.is_zero() {
            return Err(FactorError::SingularWronskian { wronskian: base });
        }
        let m = self.m;
        let mut column = Vec::with_capacity(m + 1);
        let mut g = f.clone();
        for _ in 0..=m {
            let next = g.derivative();
            column.push(g);
            g = next;
        }
        let top = self.derivative_block(m);
        let extended = Matrix::from_fn(m + 1, m + 1, |i, j| match (i < m, j < m) {
            (true, true) => base.get(i, j).clone(),
            (false, true) => top.get(0, j).clone(),
            (_, false) => column[i].clone(),
        });
        let numer = extended.det().expect("square");
        Ok(&numer / &denom)
    }
}

/// Quotient and remainder of `l = quotient ∘ k + remainder`.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisionResult<S> {
    pub quotient: MatrixOperator<S>,
    pub remainder: MatrixOperator<S>,
}

/// Right division by a monic operator.
///
/// The remainder is zero or has order below `order(k)`. Each step cancels the
/// leading term `A ∂ʳ` of the running remainder by subtracting
/// `(A ∂^(r - order k)) ∘ k`, which has the same leading term because `k` is
/// monic.
pub fn right_divide<S: Scalar>(
    l: &MatrixOperator<S>,
    k: &MatrixOperator<S>,
) -> Result<DivisionResult<S>, FactorError<S>> {
    if l.dim() != k.dim() {
        return Err(FactorError::DimensionMismatch { expected: k.dim(), found: l.dim() });
    }
    if !k.is_monic() {
        return Err(FactorError::NonMonicDivisor);
    }
    let n = k.dim();
    let divisor_order = k.order().expect("monic operators are nonzero");
    let mut remainder = l.clone();
    let mut quotient = vec![Matrix::zeros(n, n); l.order().map_or(0, |o| o.saturating_sub(divisor_order) + 1)];
    while let Some(r) = remainder.order().filter(|&r| r >= divisor_order) {
        let gap = r - divisor_order;
        let lead = remainder.leading_coeff().expect("nonzero").clone();
        let step = MatrixOperator::monomial(lead.clone(), gap)?.mul(k)?;
        remainder = remainder.sub(&step)?;
        debug_assert!(remainder.order().map_or(true, |o| o < r));
        quotient[gap] = quotient[gap].add(&lead).expect("n x n");
    }
    Ok(DivisionResult {
        quotient: MatrixOperator::new(n, quotient)?,
        remainder,
    })
}
