//! Exact arithmetic: polynomials in `x` and the rational functions built from them.

mod poly;
mod ratfunc;

pub use poly::Poly;
pub use ratfunc::RatFunc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("pole: denominator vanishes at x = {point}")]
    Pole { point: String },
}
