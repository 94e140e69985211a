//! Small integer utilities: square-free testing by trial division, gcd
//! helpers, and exact floor/ceil of `c ± sqrt(v)` over big rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;

/// Largest admissible field parameter. Keeps `p*q` comfortably inside `i64`.
pub const MAX_FIELD_PARAM: i64 = 1_000_000_000;

/// Square-free test by trial division up to the square root.
pub fn is_square_free(n: i64) -> bool {
    if n <= 0 {
        return false;
    }
    let mut m = n;
    let mut d: i64 = 2;
    while d * d <= m {
        if m % d == 0 {
            m /= d;
            if m % d == 0 {
                return false;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    true
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(big(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(big(n), big(d))
}

/// Exact `floor(c + sqrt(v))` for rational `c` and rational `v >= 0`.
///
/// Uses the integer square root of `numer(v)*denom(v)` as a one-sided
/// approximation and then fixes the result with exact rational comparisons,
/// so no floating point enters the answer.
pub fn floor_plus_sqrt(c: &BigRational, v: &BigRational) -> BigInt {
    assert!(!v.is_negative(), "floor_plus_sqrt requires v >= 0");
    let u = v.numer();
    let w = v.denom();
    // s/w <= sqrt(v) < (s+1)/w
    let s = (u * w).sqrt();
    let mut k = (c + BigRational::new(s, w.clone())).floor().to_integer();
    let ok = |k: &BigInt| {
        let kq = BigRational::from_integer(k.clone());
        if kq <= *c {
            true
        } else {
            let d = &kq - c;
            &d * &d <= *v
        }
    };
    while ok(&(&k + 1)) {
        k += 1;
    }
    while !ok(&k) {
        k -= 1;
    }
    k
}

/// Exact `ceil(c - sqrt(v))` for rational `c` and rational `v >= 0`.
pub fn ceil_minus_sqrt(c: &BigRational, v: &BigRational) -> BigInt {
    -floor_plus_sqrt(&-c, v)
}

/// Floor square root bracket of a positive integer at dyadic precision:
/// returns `(s, bits)` with `s/2^bits <= sqrt(n) < (s+1)/2^bits`.
pub fn sqrt_dyadic(n: i64, bits: u32) -> BigInt {
    let scaled = big(n) << (2 * bits);
    scaled.sqrt()
}

/// Classical four-square rank of a non-negative rational integer
/// (brute force over integer quadruples; independent test oracle).
pub fn classical_square_rank(m: u64) -> u32 {
    if m == 0 {
        return 0;
    }
    let isq = |x: u64| -> u64 { (x as f64).sqrt() as u64 + 1 };
    for a in 1..=isq(m) {
        if a * a == m {
            return 1;
        }
    }
    for a in 1..=isq(m) {
        for b in a..=isq(m) {
            if a * a + b * b == m {
                return 2;
            }
        }
    }
    for a in 1..=isq(m) {
        for b in a..=isq(m) {
            for c in b..=isq(m) {
                if a * a + b * b + c * c == m {
                    return 3;
                }
            }
        }
    }
    4
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_free_basics() {
        assert!(is_square_free(30));
        assert!(is_square_free(35));
        assert!(is_square_free(143));
        assert!(!is_square_free(4));
        assert!(!is_square_free(525)); // 3 * 5^2 * 7
        assert!(!is_square_free(0));
    }

    #[test]
    fn floor_plus_sqrt_exact() {
        // floor(0 + sqrt(2)) = 1, floor(1/2 + sqrt(9/4)) = 2
        assert_eq!(floor_plus_sqrt(&rat(0), &rat(2)), BigInt::from(1));
        assert_eq!(floor_plus_sqrt(&ratio(1, 2), &ratio(9, 4)), BigInt::from(2));
        // exact square: floor(0 + sqrt(4)) = 2; ceil(0 - sqrt(4)) = -2
        assert_eq!(floor_plus_sqrt(&rat(0), &rat(4)), BigInt::from(2));
        assert_eq!(ceil_minus_sqrt(&rat(0), &rat(4)), BigInt::from(-2));
        // tiny radius around a non-integer center
        assert_eq!(
            floor_plus_sqrt(&ratio(7, 2), &ratio(1, 100)),
            BigInt::from(3)
        );
        assert_eq!(
            ceil_minus_sqrt(&ratio(7, 2), &ratio(1, 100)),
            BigInt::from(4)
        );
    }

    #[test]
    fn classical_ranks_small() {
        let expect = [
            (1, 1),
            (2, 2),
            (3, 3),
            (4, 1),
            (7, 4),
            (9, 1),
            (12, 3),
            (15, 4),
            (28, 4),
        ];
        for (m, r) in expect {
            assert_eq!(classical_square_rank(m), r, "m = {m}");
        }
    }
}
