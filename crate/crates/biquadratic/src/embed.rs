//! Rational interval brackets for the four real embeddings.
//!
//! Used as a cross-check of the exact char-poly positivity test and for the
//! naive box-scan oracle in tests; the certification paths themselves never
//! rely on interval output.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith::sqrt_dyadic;
use crate::field::{FieldElement, Radical};

/// A rational bracket lo <= sigma_i(alpha) <= hi.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EmbeddingInterval {
    pub lo: BigRational,
    pub hi: BigRational,
    pub index: u8,
}

impl EmbeddingInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn excludes_zero(&self) -> bool {
        self.lo.is_positive() || self.hi.is_negative()
    }
}

/// Dyadic bracket of sqrt(n): s/2^bits <= sqrt(n) <= (s+1)/2^bits.
fn sqrt_bracket(n: i64, bits: u32) -> (BigRational, BigRational) {
    let s = sqrt_dyadic(n, bits);
    let den = BigInt::from(1) << bits;
    (
        BigRational::new(s.clone(), den.clone()),
        BigRational::new(s + 1, den),
    )
}

fn scaled(coef: &BigRational, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    if coef.is_negative() {
        (coef * hi, coef * lo)
    } else {
        (coef * lo, coef * hi)
    }
}

/// Bracket sigma_i(alpha) at the given dyadic precision for the radicals.
pub fn embedding_at_bits(a: &FieldElement, index: u8, bits: u32) -> EmbeddingInterval {
    let c = a.conjugate(index);
    let k = *c.field();
    let [x, y, z, w] = c.coords().clone();
    let mut lo = x.clone();
    let mut hi = x;
    for (coef, rad) in [(y, Radical::P), (z, Radical::Q), (w, Radical::R)] {
        if coef.is_zero() {
            continue;
        }
        let (slo, shi) = sqrt_bracket(k.radical_value(rad), bits);
        let (tlo, thi) = scaled(&coef, &slo, &shi);
        lo += tlo;
        hi += thi;
    }
    EmbeddingInterval { lo, hi, index }
}

/// Interval of width at most `width` containing sigma_i(alpha).
pub fn refine_embedding(a: &FieldElement, index: u8, width: &BigRational) -> EmbeddingInterval {
    assert!(width.is_positive(), "requested width must be positive");
    let mut bits = 8;
    loop {
        let iv = embedding_at_bits(a, index, bits);
        if iv.width() <= *width {
            return iv;
        }
        bits += 8;
    }
}

/// Sign of sigma_i(alpha), decided by refinement. Zero only for the zero
/// element: embeddings of a field are injective.
pub fn embedding_sign(a: &FieldElement, index: u8) -> i8 {
    if a.is_zero() {
        return 0;
    }
    let mut bits = 8;
    loop {
        let iv = embedding_at_bits(a, index, bits);
        if iv.lo.is_positive() {
            return 1;
        }
        if iv.hi.is_negative() {
            return -1;
        }
        bits += 16;
    }
}
