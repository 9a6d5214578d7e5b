//! The field of rational functions `p(x) / q(x)`.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{ArithError, Poly};
use crate::scalar::Scalar;

/// A rational function kept in lowest terms with a monic denominator.
///
/// Zero is `0/1`. Because the form is canonical, the derived `PartialEq`
/// decides equality of the underlying functions.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFunc<S> {
    num: Poly<S>,
    den: Poly<S>,
}

impl<S: Scalar> RatFunc<S> {
    /// `num / den` in canonical form. Fails if `den` is zero.
    pub fn new(num: Poly<S>, den: Poly<S>) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly<S>, den: Poly<S>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        Self::normalize_lc(num.exact_div(&g), den.exact_div(&g))
    }

    /// Scales a coprime pair so the denominator is monic.
    fn normalize_lc(num: Poly<S>, den: Poly<S>) -> Self {
        let lc = den.leading_coeff().expect("nonzero denominator").clone();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = S::one() / lc;
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn from_poly(p: Poly<S>) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: S) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(S::from_i64(n).expect("i64 fits every exact field"))
    }

    /// The function `x`.
    pub fn x() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn num(&self) -> &Poly<S> {
        &self.num
    }

    pub fn den(&self) -> &Poly<S> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Constant value, if the function is constant.
    pub fn as_constant(&self) -> Option<S> {
        match (self.num.degree(), self.den.is_one()) {
            (None, _) => Some(S::zero()),
            (Some(0), true) => Some(self.num.coeff(0)),
            _ => None,
        }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self, ArithError> {
        if self.num.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::normalize_lc(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ArithError> {
        Ok(self * &rhs.inv()?)
    }

    /// Derivative by the quotient rule, `(n' d - n d') / d^2`.
    pub fn derivative(&self) -> Self {
        if self.den.is_one() {
            return Self::from_poly(self.num.derivative());
        }
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::reduce(num, &self.den * &self.den)
    }

    /// Exact value at `point`, or a pole error when the denominator vanishes.
    pub fn eval(&self, point: &S) -> Result<S, ArithError> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(ArithError::Pole {
                point: point.to_string(),
            });
        }
        Ok(self.num.eval(point) / d)
    }

    pub fn pow(&self, exp: u32) -> Self {
        RatFunc {
            num: self.num.pow(exp),
            den: self.den.pow(exp),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }
}

impl<S: Scalar> Zero for RatFunc<S> {
    fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<S: Scalar> One for RatFunc<S> {
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
}

impl<S: Scalar> From<Poly<S>> for RatFunc<S> {
    fn from(p: Poly<S>) -> Self {
        Self::from_poly(p)
    }
}

// Sums use the shared factor of the denominators (Henrici): with
// g = gcd(b, d), a/b + c/d = (a d/g + c b/g) / (b d/g), and any common
// factor of that numerator with the denominator already divides g.
fn add_sub<S: Scalar>(lhs: &RatFunc<S>, rhs: &RatFunc<S>, negate_rhs: bool) -> RatFunc<S> {
    let rnum = if negate_rhs { -&rhs.num } else { rhs.num.clone() };
    if lhs.den.is_one() && rhs.den.is_one() {
        return RatFunc::from_poly(&lhs.num + &rnum);
    }
    if lhs.den == rhs.den {
        return RatFunc::reduce(&lhs.num + &rnum, lhs.den.clone());
    }
    let g = lhs.den.gcd(&rhs.den);
    if g.is_one() {
        let num = &(&lhs.num * &rhs.den) + &(&rnum * &lhs.den);
        if num.is_zero() {
            return RatFunc::zero();
        }
        return RatFunc::normalize_lc(num, &lhs.den * &rhs.den);
    }
    let b_g = lhs.den.exact_div(&g);
    let d_g = rhs.den.exact_div(&g);
    let num = &(&lhs.num * &d_g) + &(&rnum * &b_g);
    if num.is_zero() {
        return RatFunc::zero();
    }
    let h = num.gcd(&g);
    let num = num.exact_div(&h);
    let den = &lhs.den.exact_div(&h) * &d_g;
    RatFunc::normalize_lc(num, den)
}

impl<S: Scalar> Add for &RatFunc<S> {
    type Output = RatFunc<S>;
    fn add(self, rhs: &RatFunc<S>) -> RatFunc<S> {
        add_sub(self, rhs, false)
    }
}

impl<S: Scalar> Sub for &RatFunc<S> {
    type Output = RatFunc<S>;
    fn sub(self, rhs: &RatFunc<S>) -> RatFunc<S> {
        add_sub(self, rhs, true)
    }
}

impl<S: Scalar> Mul for &RatFunc<S> {
    type Output = RatFunc<S>;
    fn mul(self, rhs: &RatFunc<S>) -> RatFunc<S> {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        // cross-cancel before multiplying
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let num = &self.num.exact_div(&g1) * &rhs.num.exact_div(&g2);
        let den = &self.den.exact_div(&g2) * &rhs.den.exact_div(&g1);
        RatFunc::normalize_lc(num, den)
    }
}

/// Panics on division by zero; use [`RatFunc::checked_div`] to recover.
impl<S: Scalar> Div for &RatFunc<S> {
    type Output = RatFunc<S>;
    fn div(self, rhs: &RatFunc<S>) -> RatFunc<S> {
        self.checked_div(rhs).expect("rational function division by zero")
    }
}

impl<S: Scalar> Neg for &RatFunc<S> {
    type Output = RatFunc<S>;
    fn neg(self) -> RatFunc<S> {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<S: Scalar> Neg for RatFunc<S> {
    type Output = RatFunc<S>;
    fn neg(self) -> RatFunc<S> {
        -&self
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl<S: Scalar> $tr for RatFunc<S> {
            type Output = RatFunc<S>;
            fn $method(self, rhs: RatFunc<S>) -> RatFunc<S> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);
