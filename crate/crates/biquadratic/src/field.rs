//! Exact arithmetic in the real biquadratic field Q(sqrt p, sqrt q).
//!
//! Elements are stored as rational coordinates over {1, sqrt p, sqrt q,
//! sqrt r} with r = pq/gcd(p,q)^2, independent of the integral-basis type.
//! Total positivity is decided from characteristic-polynomial coefficient
//! signs, which keeps every decision in exact rational arithmetic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{gcd_i64, is_square_free, rat, MAX_FIELD_PARAM};
use crate::error::Error;

/// Integral-basis case of the field, after role assignment.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, serde::Serialize)]
pub enum BasisType {
    T1,
    T2,
    T3,
    T4a,
    T4b,
}

impl fmt::Display for BasisType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One of the three square roots generating the field.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, serde::Serialize)]
pub enum Radical {
    P,
    Q,
    R,
}

impl Radical {
    pub const ALL: [Radical; 3] = [Radical::P, Radical::Q, Radical::R];

    fn coord_slot(self) -> usize {
        match self {
            Radical::P => 1,
            Radical::Q => 2,
            Radical::R => 3,
        }
    }
}

/// The field Q(sqrt p, sqrt q) together with its classified integral-basis
/// case. `role_p`/`role_q` record which of (p, q, r) plays the first and
/// second congruence role of the basis case; the remaining radical plays
/// the third.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FieldSpec {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    /// gcd(q, r)
    pub p0: i64,
    /// gcd(p, r)
    pub q0: i64,
    /// gcd(p, q)
    pub r0: i64,
    pub basis_type: BasisType,
    pub role_p: Radical,
    pub role_q: Radical,
}

/// Fixed scan order for role assignments: identity first, then the
/// remaining orderings of (p, q, r).
const ROLE_ORDERINGS: [(Radical, Radical); 6] = [
    (Radical::P, Radical::Q),
    (Radical::P, Radical::R),
    (Radical::Q, Radical::P),
    (Radical::Q, Radical::R),
    (Radical::R, Radical::P),
    (Radical::R, Radical::Q),
];

impl FieldSpec {
    /// Build the field Q(sqrt p, sqrt q), verifying square-freeness by trial
    /// division and classifying the integral-basis case.
    pub fn new(p: i64, q: i64) -> Result<FieldSpec, Error> {
        if p <= 1 || q <= 1 || p > MAX_FIELD_PARAM || q > MAX_FIELD_PARAM {
            return Err(Error::OutOfRange(format!(
                "field parameters must be in 2..={MAX_FIELD_PARAM}, got ({p}, {q})"
            )));
        }
        if p == q {
            return Err(Error::EqualParameters(p));
        }
        if !is_square_free(p) {
            return Err(Error::NotSquareFree(p));
        }
        if !is_square_free(q) {
            return Err(Error::NotSquareFree(q));
        }
        let r0 = gcd_i64(p, q);
        let r = (p / r0) * (q / r0);
        let p0 = gcd_i64(q, r);
        let q0 = gcd_i64(p, r);
        assert_eq!(p, q0 * r0);
        assert_eq!(q, p0 * r0);
        assert_eq!(r, p0 * q0);
        let (basis_type, role_p, role_q) = classify(p, q, r)?;
        Ok(FieldSpec {
            p,
            q,
            r,
            p0,
            q0,
            r0,
            basis_type,
            role_p,
            role_q,
        })
    }

    pub fn radical_value(&self, which: Radical) -> i64 {
        match which {
            Radical::P => self.p,
            Radical::Q => self.q,
            Radical::R => self.r,
        }
    }

    pub fn role_r(&self) -> Radical {
        *Radical::ALL
            .iter()
            .find(|&&s| s != self.role_p && s != self.role_q)
            .expect("three distinct radicals")
    }

    /// Values of (P, Q, R) in role order.
    pub fn role_values(&self) -> (i64, i64, i64) {
        (
            self.radical_value(self.role_p),
            self.radical_value(self.role_q),
            self.radical_value(self.role_r()),
        )
    }

    /// The gcd trio in role order: (gcd(Q,R), gcd(P,R), gcd(P,Q)).
    pub fn role_gcds(&self) -> (i64, i64, i64) {
        let (pp, qq, rr) = self.role_values();
        (gcd_i64(qq, rr), gcd_i64(pp, rr), gcd_i64(pp, qq))
    }

    /// Element with the given rational coordinates over {1, sqrt p, sqrt q, sqrt r}.
    pub fn element(&self, coords: [BigRational; 4]) -> FieldElement {
        FieldElement {
            field: *self,
            coords,
        }
    }

    pub fn from_integers(&self, coords: [i64; 4]) -> FieldElement {
        self.element([
            rat(coords[0]),
            rat(coords[1]),
            rat(coords[2]),
            rat(coords[3]),
        ])
    }

    pub fn zero(&self) -> FieldElement {
        self.from_integers([0, 0, 0, 0])
    }

    pub fn one(&self) -> FieldElement {
        self.from_integers([1, 0, 0, 0])
    }

    pub fn rational(&self, x: BigRational) -> FieldElement {
        self.element([
            x,
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ])
    }

    /// sqrt of the given radical as a field element.
    pub fn sqrt(&self, which: Radical) -> FieldElement {
        let mut coords = [
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ];
        coords[which.coord_slot()] = BigRational::one();
        self.element(coords)
    }
}

fn classify(p: i64, q: i64, r: i64) -> Result<(BasisType, Radical, Radical), Error> {
    let value = |s: Radical| match s {
        Radical::P => p,
        Radical::Q => q,
        Radical::R => r,
    };
    // Case-major scan: each congruence case in order (1), (2), (3), (4a),
    // (4b); within a case the role orderings in fixed order, identity first.
    for case in 0..4 {
        for (rp, rq) in ROLE_ORDERINGS {
            let pv = value(rp);
            let qv = value(rq);
            let matched = match case {
                0 => pv % 4 == 2 && qv % 4 == 3,
                1 => pv % 4 == 2 && qv % 4 == 1,
                2 => pv % 4 == 3 && qv % 4 == 1,
                _ => pv % 4 == 1 && qv % 4 == 1,
            };
            if !matched {
                continue;
            }
            let ty = match case {
                0 => BasisType::T1,
                1 => BasisType::T2,
                2 => BasisType::T3,
                _ => {
                    let g = gcd_i64(pv, qv);
                    if (pv / g) % 4 == 1 {
                        BasisType::T4a
                    } else {
                        BasisType::T4b
                    }
                }
            };
            return Ok((ty, rp, rq));
        }
    }
    Err(Error::OutOfRange(format!(
        "no integral-basis case matches ({p}, {q}, {r})"
    )))
}

/// An element of Q(sqrt p, sqrt q): x + y sqrt p + z sqrt q + w sqrt r.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FieldElement {
    field: FieldSpec,
    coords: [BigRational; 4],
}

/// Coefficients of the characteristic polynomial
/// x^4 - A x^3 + B x^2 - C x + D of the multiplication-by-alpha map.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CharPoly {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
}

impl CharPoly {
    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer() && self.c.is_integer() && self.d.is_integer()
    }

    pub fn coefficients(&self) -> [BigRational; 4] {
        [
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            self.d.clone(),
        ]
    }
}

impl FieldElement {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational; 4] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    fn check_same_field(&self, other: &FieldElement) -> Result<(), Error> {
        if self.field.p == other.field.p && self.field.q == other.field.q {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement, Error> {
        self.check_same_field(other)?;
        let mut coords = self.coords.clone();
        for (a, b) in coords.iter_mut().zip(&other.coords) {
            *a += b;
        }
        Ok(self.field.element(coords))
    }

    pub fn try_sub(&self, other: &FieldElement) -> Result<FieldElement, Error> {
        self.check_same_field(other)?;
        let mut coords = self.coords.clone();
        for (a, b) in coords.iter_mut().zip(&other.coords) {
            *a -= b;
        }
        Ok(self.field.element(coords))
    }

    /// Product using the table sqrt(p)sqrt(q) = r0 sqrt(r),
    /// sqrt(p)sqrt(r) = q0 sqrt(q), sqrt(q)sqrt(r) = p0 sqrt(p).
    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement, Error> {
        self.check_same_field(other)?;
        let k = &self.field;
        let (p, q, r) = (rat(k.p), rat(k.q), rat(k.r));
        let (p0, q0, r0) = (rat(k.p0), rat(k.q0), rat(k.r0));
        let [x1, y1, z1, w1] = &self.coords;
        let [x2, y2, z2, w2] = &other.coords;
        let x = x1 * x2 + y1 * y2 * p + z1 * z2 * q + w1 * w2 * r;
        let y = x1 * y2 + y1 * x2 + (z1 * w2 + w1 * z2) * p0;
        let z = x1 * z2 + z1 * x2 + (y1 * w2 + w1 * y2) * q0;
        let w = x1 * w2 + w1 * x2 + (y1 * z2 + z1 * y2) * r0;
        Ok(k.element([x, y, z, w]))
    }

    pub fn scale(&self, s: &BigRational) -> FieldElement {
        let coords = [
            &self.coords[0] * s,
            &self.coords[1] * s,
            &self.coords[2] * s,
            &self.coords[3] * s,
        ];
        self.field.element(coords)
    }

    /// The i-th real embedding as a field automorphism image, i in 1..=4.
    /// Sign patterns on (y, z, w): sigma1 +++, sigma2 -+-, sigma3 +--,
    /// sigma4 --+.
    pub fn conjugate(&self, i: u8) -> FieldElement {
        let [x, y, z, w] = self.coords.clone();
        let coords = match i {
            1 => [x, y, z, w],
            2 => [x, -y, z, -w],
            3 => [x, y, -z, -w],
            4 => [x, -y, -z, w],
            _ => panic!("embedding index must be 1..=4, got {i}"),
        };
        self.field.element(coords)
    }

    /// Tr(alpha) = 4x: the radical coordinates cancel over the four embeddings.
    pub fn trace(&self) -> BigRational {
        &self.coords[0] * rat(4)
    }

    /// N(alpha) = product of the four embeddings, computed symbolically;
    /// the radical coordinates of the product must vanish.
    pub fn norm(&self) -> BigRational {
        let prod = self
            .try_mul(&self.conjugate(2))
            .and_then(|t| t.try_mul(&self.conjugate(3)))
            .and_then(|t| t.try_mul(&self.conjugate(4)))
            .expect("conjugates share the field");
        assert!(
            prod.coords[1..].iter().all(|c| c.is_zero()),
            "norm has nonzero radical residue"
        );
        prod.coords[0].clone()
    }

    /// Multiplicative inverse; `Err` for zero.
    pub fn inverse(&self) -> Result<FieldElement, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        let adj = self
            .conjugate(2)
            .try_mul(&self.conjugate(3))
            .and_then(|t| t.try_mul(&self.conjugate(4)))
            .expect("conjugates share the field");
        Ok(adj.scale(&n.recip()))
    }

    /// Characteristic polynomial coefficients via Newton's identities on
    /// the power sums Tr(alpha^k), k = 1..4.
    pub fn char_poly(&self) -> CharPoly {
        let a2 = self.try_mul(self).expect("same field");
        let a3 = a2.try_mul(self).expect("same field");
        let a4 = a2.try_mul(&a2).expect("same field");
        let s1 = self.trace();
        let s2 = a2.trace();
        let s3 = a3.trace();
        let s4 = a4.trace();
        let e1 = s1.clone();
        let e2 = (&e1 * &s1 - &s2) / rat(2);
        let e3 = (&e2 * &s1 - &e1 * &s2 + &s3) / rat(3);
        let e4 = (&e3 * &s1 - &e2 * &s2 + &e1 * &s3 - &s4) / rat(4);
        CharPoly {
            a: e1,
            b: e2,
            c: e3,
            d: e4,
        }
    }

    /// True iff all four embeddings are positive. Decided by the coefficient
    /// signs of the characteristic polynomial: when A, B, C, D > 0 the
    /// quartic has no root <= 0, and conversely positive embeddings make all
    /// elementary symmetric functions positive.
    pub fn is_totally_positive(&self) -> bool {
        let cp = self.char_poly();
        cp.a.is_positive() && cp.b.is_positive() && cp.c.is_positive() && cp.d.is_positive()
    }

    /// Domination order: self - other is zero or totally positive. A nonzero
    /// element cannot have a zero embedding, so this is exactly "all
    /// embeddings of the difference are >= 0".
    pub fn dominates(&self, other: &FieldElement) -> Result<bool, Error> {
        let d = self.try_sub(other)?;
        Ok(d.is_zero() || d.is_totally_positive())
    }

    /// Evaluate the element's own characteristic polynomial at itself
    /// (Cayley-Hamilton check helper).
    pub fn char_poly_at_self(&self) -> FieldElement {
        let cp = self.char_poly();
        let a2 = self.try_mul(self).expect("same field");
        let a3 = a2.try_mul(self).expect("same field");
        let a4 = a2.try_mul(&a2).expect("same field");
        let mut acc = a4;
        acc = acc.try_sub(&a3.scale(&cp.a)).unwrap();
        acc = acc.try_add(&a2.scale(&cp.b)).unwrap();
        acc = acc.try_sub(&self.scale(&cp.c)).unwrap();
        acc.try_add(&self.field.rational(cp.d)).unwrap()
    }

    /// Exact floor/ceil-free integer check of the trace pairing denominator:
    /// true when every coordinate is an integer multiple of 1 (used by tests).
    pub fn has_integer_coords(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.try_add(rhs).expect("field mismatch")
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.try_sub(rhs).expect("field mismatch")
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.try_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let coords = [
            -self.coords[0].clone(),
            -self.coords[1].clone(),
            -self.coords[2].clone(),
            -self.coords[3].clone(),
        ];
        self.field.element(coords)
    }
}

/// Convenience: exact integer square-root check for rationals, used when
/// promoting norms and discriminants to `BigInt`.
pub fn rational_to_bigint(x: &BigRational) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    fn f(p: i64, q: i64) -> FieldSpec {
        FieldSpec::new(p, q).unwrap()
    }

    #[test]
    fn make_field_examples() {
        let k = f(30, 35);
        assert_eq!((k.r, k.p0, k.q0, k.r0), (42, 7, 6, 5));
        assert_eq!(k.basis_type, BasisType::T1);
        assert_eq!((k.role_p, k.role_q), (Radical::P, Radical::Q));

        let k = f(143, 165);
        assert_eq!((k.r, k.p0, k.q0, k.r0), (195, 15, 13, 11));
        assert_eq!(k.basis_type, BasisType::T3);

        assert!(matches!(FieldSpec::new(4, 7), Err(Error::NotSquareFree(4))));
        assert!(matches!(
            FieldSpec::new(7, 7),
            Err(Error::EqualParameters(7))
        ));
        assert!(matches!(FieldSpec::new(1, 7), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn classification_covers_swapped_roles() {
        // (35, 30): identity ordering fails T1 but (q, p) matches.
        let k = f(35, 30);
        assert_eq!(k.basis_type, BasisType::T1);
        assert_eq!((k.role_p, k.role_q), (Radical::Q, Radical::P));
        // T4 subtypes
        assert_eq!(f(5, 13).basis_type, BasisType::T4a);
        assert_eq!(f(21, 33).basis_type, BasisType::T4b);
        assert_eq!(f(10, 17).basis_type, BasisType::T2);
    }

    #[test]
    fn add_sub_identities() {
        let k = f(30, 35);
        let a = k.from_integers([1, 1, 0, 0]);
        let b = k.from_integers([1, 0, 1, 0]);
        assert_eq!(&a + &b, k.from_integers([2, 1, 1, 0]));
        assert_eq!(&a + &k.zero(), a);
        assert!((&a + &-&a).is_zero());
        let other = f(10, 17);
        assert!(matches!(
            a.try_add(&other.zero()),
            Err(Error::FieldMismatch)
        ));
    }

    #[test]
    fn mul_table() {
        // sqrt(30) * sqrt(35) = 5 sqrt(42)
        let k = f(30, 35);
        let prod = &k.sqrt(Radical::P) * &k.sqrt(Radical::Q);
        assert_eq!(prod, k.from_integers([0, 0, 0, 5]));
        // (2n + sqrt p)(2n - sqrt p) = 1 for p = 4n^2 - 1 (n = 6, p = 143)
        let k = f(143, 165);
        let u = k.from_integers([12, 1, 0, 0]);
        let v = k.from_integers([12, -1, 0, 0]);
        assert_eq!(&u * &v, k.one());
    }

    #[test]
    fn conjugate_patterns() {
        let k = f(30, 35);
        let sp = k.sqrt(Radical::P);
        assert_eq!(sp.conjugate(2), -&sp);
        let a = k.element([ratio(1, 2), ratio(-3, 2), rat(2), rat(5)]);
        assert_eq!(a.conjugate(1), a);
        assert_eq!(a.conjugate(3).conjugate(3), a);
        // homomorphism on a sample pair
        let b = k.from_integers([2, 0, 1, 1]);
        for i in 1..=4 {
            assert_eq!(
                (&a * &b).conjugate(i),
                &a.conjugate(i) * &b.conjugate(i),
                "sigma_{i} multiplicative"
            );
        }
    }

    #[test]
    fn trace_and_norm_examples() {
        let k = f(143, 165);
        let mu = k.element([ratio(15, 2), ratio(1, 2), ratio(1, 2), ratio(1, 2)]);
        assert_eq!(mu.trace(), rat(30));
        assert_eq!(k.one().trace(), rat(4));
        assert_eq!(k.sqrt(Radical::P).trace(), rat(0));
        assert_eq!(mu.norm(), rat(4));
        // N((eps_p^{-1} + eps_r)/2) = (2n+1)^2 = 169 at n = 6
        let halfmix = k.element([rat(13), ratio(-1, 2), rat(0), ratio(1, 2)]);
        assert_eq!(halfmix.norm(), rat(169));
    }

    #[test]
    fn char_poly_examples() {
        let k = f(30, 35);
        // rational c: (X - c)^4
        let c = k.rational(ratio(3, 2));
        let cp = c.char_poly();
        assert_eq!(cp.a, rat(6));
        assert_eq!(cp.b, ratio(27, 2));
        assert_eq!(cp.c, ratio(27, 2));
        assert_eq!(cp.d, ratio(81, 16));
        // mu at n = 6: A = 30, B = 86, C = 60, D = 4
        let k = f(143, 165);
        let mu = k.element([ratio(15, 2), ratio(1, 2), ratio(1, 2), ratio(1, 2)]);
        let cp = mu.char_poly();
        assert_eq!(cp.coefficients(), [rat(30), rat(86), rat(60), rat(4)]);
        assert!(cp.is_integral());
    }

    #[test]
    fn cayley_hamilton() {
        let k = f(30, 35);
        let a = k.element([ratio(1, 2), rat(2), ratio(-1, 3), rat(1)]);
        assert!(a.char_poly_at_self().is_zero());
        let mu = f(143, 165).element([ratio(15, 2), ratio(1, 2), ratio(1, 2), ratio(1, 2)]);
        assert!(mu.char_poly_at_self().is_zero());
    }

    #[test]
    fn total_positivity() {
        let k = f(143, 165);
        // eps_p = 2n + sqrt p with p = 4n^2 - 1 is totally positive
        assert!(k.from_integers([12, 1, 0, 0]).is_totally_positive());
        assert!(!k.sqrt(Radical::P).is_totally_positive());
        assert!(!k.zero().is_totally_positive());
        assert!(!k.rational(rat(-2)).is_totally_positive());
        assert!(k.rational(rat(2)).is_totally_positive());
    }

    #[test]
    fn domination_examples() {
        let k = f(30, 35);
        let alpha = k.from_integers([74, 2, 2, 0]);
        assert!(alpha.dominates(&alpha).unwrap());
        let sq = {
            let b = k.from_integers([1, 1, 0, 0]);
            &b * &b
        };
        assert!(alpha.dominates(&sq).unwrap());
        assert_eq!(&alpha - &sq, k.from_integers([43, 0, 2, 0]));
        assert!(!k.one().dominates(&k.rational(rat(2))).unwrap());
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<FieldSpec>();
        assert_send_sync::<FieldElement>();
        assert_send_sync::<CharPoly>();
    }

    #[test]
    fn inverse_round_trip() {
        let k = f(143, 165);
        let a = k.element([rat(3), ratio(1, 2), rat(0), ratio(-1, 2)]);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, k.one());
        assert!(matches!(k.zero().inverse(), Err(Error::DivisionByZero)));
    }
}
