//! Exact 4x4 linear algebra over big rationals: determinant (fraction-free
//! Bareiss over cleared denominators), inverse, and linear solve.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Mat4 = [[BigRational; 4]; 4];
pub type Vec4 = [BigRational; 4];

pub fn zero_vec() -> Vec4 {
    [
        BigRational::zero(),
        BigRational::zero(),
        BigRational::zero(),
        BigRational::zero(),
    ]
}

pub fn zero_mat() -> Mat4 {
    [zero_vec(), zero_vec(), zero_vec(), zero_vec()]
}

pub fn mat_vec(m: &Mat4, v: &Vec4) -> Vec4 {
    let mut out = zero_vec();
    for i in 0..4 {
        for j in 0..4 {
            out[i] += &m[i][j] * &v[j];
        }
    }
    out
}

/// Determinant via Bareiss fraction-free elimination on the integer matrix
/// obtained by clearing denominators row by row.
pub fn det(m: &Mat4) -> BigRational {
    let mut a: [[BigInt; 4]; 4] = Default::default();
    let mut scale = BigRational::one();
    for i in 0..4 {
        let mut lcm = BigInt::one();
        for j in 0..4 {
            lcm = num_integer::lcm(lcm, m[i][j].denom().clone());
        }
        for j in 0..4 {
            a[i][j] = (&m[i][j] * BigRational::from_integer(lcm.clone())).to_integer();
        }
        scale *= BigRational::new(BigInt::one(), lcm);
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..3 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..4).find(|&r| !a[r][k].is_zero()) else {
                return BigRational::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..4 {
            for j in k + 1..4 {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = &t / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    BigRational::from_integer(sign * a[3][3].clone()) * scale
}

/// Exact inverse by Gauss-Jordan elimination; `None` if singular.
pub fn invert(m: &Mat4) -> Option<Mat4> {
    let mut a = m.clone();
    let mut inv = zero_mat();
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = BigRational::one();
    }
    for col in 0..4 {
        let pivot = (col..4).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let pv = a[col][col].clone();
        for j in 0..4 {
            a[col][j] /= &pv;
            inv[col][j] /= &pv;
        }
        for r in 0..4 {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..4 {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[r][j] -= t;
                }
            }
        }
    }
    Some(inv)
}

/// Solve `m x = v` exactly; `None` if singular.
pub fn solve(m: &Mat4, v: &Vec4) -> Option<Vec4> {
    invert(m).map(|inv| mat_vec(&inv, v))
}

/// Solve a square rational system of any dimension by Gaussian
/// elimination with partial pivoting; `None` if singular.
pub fn solve_vec(m: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let pv = a[col][col].clone();
        for j in col..=n {
            a[col][j] /= &pv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..=n {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

/// True when every entry is an integer with absolute determinant one.
pub fn is_unimodular(m: &Mat4) -> bool {
    if m.iter().flatten().any(|x| !x.is_integer()) {
        return false;
    }
    det(m).abs() == BigRational::one()
}
