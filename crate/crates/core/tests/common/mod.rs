//! Random generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use modo_core::{
    FieldMatrix, Modo, Polynomial, Problem, Rational, RationalFunction, VectorFunction,
};
use num_traits::{One, Zero};
use rand::Rng;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn rf(n: i64) -> RationalFunction {
    RationalFunction::from_int(n)
}

/// Polynomial of degree at most `max_deg` with integer coefficients in [-5, 5].
pub fn random_poly(rng: &mut impl Rng, max_deg: usize) -> Polynomial {
    let deg = rng.gen_range(0..=max_deg);
    Polynomial::from_coeffs((0..=deg).map(|_| q(rng.gen_range(-5..=5))).collect())
}

/// Ratio of random polynomials with a nonzero denominator.
pub fn random_ratfunc(rng: &mut impl Rng, max_deg: usize) -> RationalFunction {
    let num = random_poly(rng, max_deg);
    loop {
        let den = random_poly(rng, max_deg);
        if !den.is_zero() {
            return RationalFunction::new(num, den).unwrap();
        }
    }
}

pub fn random_poly_ratfunc(rng: &mut impl Rng, max_deg: usize) -> RationalFunction {
    RationalFunction::from_poly(random_poly(rng, max_deg))
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, max_deg: usize) -> FieldMatrix {
    FieldMatrix::from_fn(rows, cols, |_, _| random_poly_ratfunc(rng, max_deg))
}

pub fn random_vector(rng: &mut impl Rng, n: usize, max_deg: usize) -> VectorFunction {
    VectorFunction::new((0..n).map(|_| random_poly_ratfunc(rng, max_deg)).collect()).unwrap()
}

/// Random operator of order at most `max_order` (possibly zero).
pub fn random_operator(rng: &mut impl Rng, n: usize, max_order: usize, max_deg: usize) -> Modo {
    let len = rng.gen_range(0..=max_order + 1);
    Modo::new(n, (0..len).map(|_| random_matrix(rng, n, n, max_deg)).collect()).unwrap()
}

/// Random monic operator of exactly `order`.
pub fn random_monic(rng: &mut impl Rng, n: usize, order: usize, max_deg: usize) -> Modo {
    let mut coeffs: Vec<FieldMatrix> = (0..order).map(|_| random_matrix(rng, n, n, max_deg)).collect();
    coeffs.push(FieldMatrix::identity(n));
    Modo::new(n, coeffs).unwrap()
}

/// Random problem with `n * m` polynomial vector functions of degree at most
/// `max_deg`, resampled until the block Wronskian is invertible at x = 7/3.
pub fn random_problem(rng: &mut impl Rng, n: usize, m: usize, max_deg: usize) -> Problem {
    loop {
        let fs = (0..n * m).map(|_| random_vector(rng, n, max_deg)).collect();
        let p = Problem::new(fs).unwrap();
        if !det_at(&p.block_wronskian(), &Rational::new(7.into(), 3.into())).is_zero() {
            return p;
        }
    }
}

/// Determinant of the matrix evaluated at `point`, by rational elimination.
/// Nonzero means the symbolic determinant is nonzero.
pub fn det_at(a: &FieldMatrix, point: &Rational) -> Rational {
    let n = a.rows();
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|i| a.row(i).iter().map(|e| e.eval(point).expect("polynomial entries")).collect())
        .collect();
    let mut det = Rational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= m[k][k].clone();
        for i in k + 1..n {
            let f = m[i][k].clone() / m[k][k].clone();
            for j in k..n {
                let t = f.clone() * m[k][j].clone();
                m[i][j] -= t;
            }
        }
    }
    det
}

/// Determinant by Laplace expansion along the first row.
pub fn cofactor_det(a: &FieldMatrix) -> RationalFunction {
    let n = a.rows();
    assert_eq!(n, a.cols());
    let rows: Vec<Vec<RationalFunction>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    laplace(&rows)
}

fn laplace(rows: &[Vec<RationalFunction>]) -> RationalFunction {
    match rows.len() {
        0 => RationalFunction::one(),
        1 => rows[0][0].clone(),
        n => {
            let mut acc = RationalFunction::zero();
            for j in 0..n {
                if rows[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<RationalFunction>> = rows[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, e)| e.clone()).collect())
                    .collect();
                let term = &rows[0][j] * &laplace(&minor);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Monic order-`M` operator annihilating the problem's functions, found by
/// solving `(α₀ ⋯ α_{M-1}) Φ = −φ⁽ᴹ⁾` row by row with Cramer's rule.
pub fn cramer_kernel_operator(p: &Problem) -> Modo {
    let n = p.dim();
    let m = p.order();
    let size = n * m;
    let phi = p.block_wronskian();
    // Unknown row r of the N x MN block satisfies phiᵀ αᵣᵀ = -(φ⁽ᴹ⁾ row r)ᵀ.
    let phi_t = phi.transpose();
    let det = cofactor_det(&phi_t);
    let rhs = p.derivative_block(m);
    let mut alpha = vec![vec![RationalFunction::zero(); size]; n];
    for (r, alpha_row) in alpha.iter_mut().enumerate() {
        for (col, slot) in alpha_row.iter_mut().enumerate() {
            let replaced = FieldMatrix::from_fn(size, size, |i, j| {
                if j == col { -rhs.get(r, i) } else { phi_t.get(i, j).clone() }
            });
            *slot = &cofactor_det(&replaced) / &det;
        }
    }
    let mut coeffs: Vec<FieldMatrix> = (0..m)
        .map(|blk| FieldMatrix::from_fn(n, n, |i, j| alpha[i][blk * n + j].clone()))
        .collect();
    coeffs.push(FieldMatrix::identity(n));
    Modo::new(n, coeffs).unwrap()
}
