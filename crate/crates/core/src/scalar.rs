//! The exact coefficient field underneath every polynomial.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, One, Signed, Zero};

use crate::arith::Poly;

/// An exact field of characteristic zero.
///
/// Every identity in this crate is decided by structural equality after
/// canonicalization, so only types with exact arithmetic implement this.
/// Floating point types deliberately do not.
pub trait Scalar:
    Num + Neg<Output = Self> + FromPrimitive + Clone + PartialEq + Debug + Display + Send + Sync
{
    /// `self` raised to a non-negative power.
    fn pow_u32(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    /// Monic gcd of two polynomials, `gcd(0, 0) = 0`.
    ///
    /// The default runs Euclid's algorithm in the field. Types with an
    /// integer structure can override it with a fraction-free routine.
    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self> {
        a.euclid_gcd(b)
    }
}

macro_rules! impl_scalar_for_ratio {
    ($($int:ty),*) => {
        $(impl Scalar for Ratio<$int> {})*
    };
}

impl_scalar_for_ratio!(i32, i64, i128);

impl Scalar for Ratio<BigInt> {
    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self> {
        let (Some(_), Some(_)) = (a.degree(), b.degree()) else {
            return a.euclid_gcd(b);
        };
        let mut u = primitive_integer_part(a.coeffs());
        let mut v = primitive_integer_part(b.coeffs());
        if u.len() < v.len() {
            std::mem::swap(&mut u, &mut v);
        }
        while v.len() > 1 {
            let r = pseudo_remainder(u, &v);
            if r.is_empty() {
                return monic_rational(&v);
            }
            u = v;
            v = primitive(r);
        }
        if v.is_empty() {
            monic_rational(&u)
        } else {
            Poly::one()
        }
    }
}

/// Integer coefficients with unit content and positive leading coefficient,
/// proportional to the given nonzero rational coefficients.
fn primitive_integer_part(coeffs: &[Ratio<BigInt>]) -> Vec<BigInt> {
    let lcm = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints = coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    primitive(ints)
}

fn primitive(mut ints: Vec<BigInt>) -> Vec<BigInt> {
    let content = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    let sign_flip = ints.last().is_some_and(|c| c.is_negative());
    if !content.is_one() && !content.is_zero() {
        for c in ints.iter_mut() {
            *c = &*c / &content;
        }
    }
    if sign_flip {
        for c in ints.iter_mut() {
            *c = -&*c;
        }
    }
    ints
}

/// Remainder of `lc(v)^k * u` on division by `v`, trailing zeros trimmed.
fn pseudo_remainder(mut u: Vec<BigInt>, v: &[BigInt]) -> Vec<BigInt> {
    let dv = v.len() - 1;
    let lead = &v[dv];
    while u.len() > dv {
        let du = u.len() - 1;
        let top = u[du].clone();
        let shift = du - dv;
        for c in u.iter_mut() {
            *c *= lead;
        }
        for (j, vc) in v.iter().enumerate() {
            u[shift + j] -= &top * vc;
        }
        u.pop();
        while u.last().is_some_and(|c| c.is_zero()) {
            u.pop();
        }
    }
    u
}

fn monic_rational(ints: &[BigInt]) -> Poly<Ratio<BigInt>> {
    let lead = ints.last().expect("nonzero").clone();
    Poly::from_coeffs(ints.iter().map(|c| Ratio::new(c.clone(), lead.clone())).collect())
}

pub(crate) fn from_usize<S: Scalar>(n: usize) -> S {
    S::from_usize(n).expect("small integer fits every exact field")
}
