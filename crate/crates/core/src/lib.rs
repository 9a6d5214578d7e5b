//! Exact matrix-coefficient ordinary differential operators.
//!
//! Builds the unique monic operator whose kernel contains a given set of
//! vector functions, and factors any other operator with those functions in
//! its kernel through it. All arithmetic is exact: coefficients live in the
//! field of rational functions in `x` over an exact [`Scalar`] field.
//!
//! The building blocks are generic over the scalar; the aliases below fix it
//! to arbitrary-precision rationals.

pub mod arith;
pub mod factor;
pub mod linalg;
pub mod modo;
pub mod scalar;

pub use arith::{ArithError, Poly, RatFunc};
pub use factor::{right_divide, DivisionResult, FactorError, KernelProblem};
pub use linalg::{LinalgError, Matrix, VecFunc};
pub use modo::{MatrixOperator, ModoError};
pub use scalar::Scalar;

/// Arbitrary-precision rational numbers.
pub type Rational = num_rational::BigRational;
pub type Polynomial = Poly<Rational>;
pub type RationalFunction = RatFunc<Rational>;
pub type FieldMatrix = Matrix<Rational>;
pub type VectorFunction = VecFunc<Rational>;
pub type Modo = MatrixOperator<Rational>;
pub type Problem = KernelProblem<Rational>;
pub type Division = DivisionResult<Rational>;
