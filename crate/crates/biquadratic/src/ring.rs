//! Integral bases for the four congruence cases, coordinate conversion,
//! the codifferent dual basis, the trace pairing, and the discriminant.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith::{rat, ratio};
use crate::error::Error;
use crate::field::{BasisType, FieldElement, FieldSpec};
use crate::linalg::{self, Mat4, Vec4};

/// The integral basis gamma_1..gamma_4 (gamma_1 = 1) of O_K, with the
/// change-of-basis matrices to and from {1, sqrt p, sqrt q, sqrt r}.
#[derive(Clone, Debug)]
pub struct IntegralBasis {
    field: FieldSpec,
    elements: [FieldElement; 4],
    basis_matrix: Mat4,
    inv_matrix: Mat4,
}

/// An algebraic integer with coordinates in the integral basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntegralElement {
    field: FieldSpec,
    pub coords: [BigInt; 4],
}

impl IntegralElement {
    pub fn new(field: FieldSpec, coords: [BigInt; 4]) -> IntegralElement {
        IntegralElement { field, coords }
    }

    pub fn from_i64(field: FieldSpec, coords: [i64; 4]) -> IntegralElement {
        IntegralElement::new(field, coords.map(BigInt::from))
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Canonical sign: first nonzero coordinate positive.
    pub fn is_canonical_sign(&self) -> bool {
        match self.coords.iter().find(|c| !c.is_zero()) {
            Some(c) => c.is_positive(),
            None => true,
        }
    }
}

/// The dual basis phi_1..phi_4 of the codifferent under the trace form.
#[derive(Clone, Debug)]
pub struct CodifferentBasis {
    field: FieldSpec,
    pub elements: [FieldElement; 4],
}

impl CodifferentBasis {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// The codifferent element with the given integer coordinates.
    pub fn element(&self, coeffs: &[BigInt; 4]) -> FieldElement {
        let mut acc = self.field.zero();
        for (c, phi) in coeffs.iter().zip(&self.elements) {
            acc = &acc + &phi.scale(&BigRational::from_integer(c.clone()));
        }
        acc
    }

    pub fn element_i64(&self, coeffs: [i64; 4]) -> FieldElement {
        self.element(&coeffs.map(BigInt::from))
    }
}

fn half() -> BigRational {
    ratio(1, 2)
}

fn quarter() -> BigRational {
    ratio(1, 4)
}

/// The case-(1)-(4) integral basis under the field's role assignment.
/// The construction self-checks integrality and ring closure and fails
/// loudly if either breaks (this is what falsifies a wrong resolution of
/// the case-(4) fourth generator).
pub fn integral_basis(field: &FieldSpec) -> Result<IntegralBasis, Error> {
    let sp = field.sqrt(field.role_p);
    let sq = field.sqrt(field.role_q);
    let sr = field.sqrt(field.role_r());
    let one = field.one();
    let g2;
    let g3;
    let g4;
    match field.basis_type {
        BasisType::T1 => {
            g2 = sp.clone();
            g3 = sq.clone();
            g4 = (&sp + &sr).scale(&half());
        }
        BasisType::T2 | BasisType::T3 => {
            g2 = sp.clone();
            g3 = (&one + &sq).scale(&half());
            g4 = (&sp + &sr).scale(&half());
        }
        BasisType::T4a => {
            g2 = (&one + &sp).scale(&half());
            g3 = (&one + &sq).scale(&half());
            g4 = (&(&(&one + &sp) + &sq) + &sr).scale(&quarter());
        }
        BasisType::T4b => {
            g2 = (&one + &sp).scale(&half());
            g3 = (&one + &sq).scale(&half());
            g4 = (&(&(&one - &sp) + &sq) + &sr).scale(&quarter());
        }
    }
    let elements = [one, g2, g3, g4];
    let mut basis_matrix = linalg::zero_mat();
    for (j, g) in elements.iter().enumerate() {
        for i in 0..4 {
            basis_matrix[i][j] = g.coords()[i].clone();
        }
    }
    let inv_matrix = linalg::invert(&basis_matrix)
        .ok_or_else(|| Error::SelfCheckFailed("basis matrix is singular".into()))?;
    let basis = IntegralBasis {
        field: *field,
        elements,
        basis_matrix,
        inv_matrix,
    };
    // integrality of the generators
    for (i, g) in basis.elements.iter().enumerate() {
        if !is_algebraic_integer(g) {
            return Err(Error::SelfCheckFailed(format!(
                "basis element gamma_{} is not an algebraic integer",
                i + 1
            )));
        }
    }
    // ring closure: every product has integer coordinates
    for gi in &basis.elements {
        for gj in &basis.elements {
            if basis.to_integral_coords(&(gi * gj)).is_err() {
                return Err(Error::SelfCheckFailed(
                    "basis is not multiplicatively closed".into(),
                ));
            }
        }
    }
    Ok(basis)
}

/// True iff the characteristic polynomial has integer coefficients.
pub fn is_algebraic_integer(a: &FieldElement) -> bool {
    a.char_poly().is_integral()
}

impl IntegralBasis {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn elements(&self) -> &[FieldElement; 4] {
        &self.elements
    }

    pub fn basis_matrix(&self) -> &Mat4 {
        &self.basis_matrix
    }

    /// Exact solve against the basis matrix; `NotAnInteger` if any
    /// coordinate fails to be a rational integer.
    pub fn to_integral_coords(&self, a: &FieldElement) -> Result<IntegralElement, Error> {
        let v: Vec4 = a.coords().clone();
        let x = linalg::mat_vec(&self.inv_matrix, &v);
        let mut coords: [BigInt; 4] = Default::default();
        for (slot, xi) in coords.iter_mut().zip(&x) {
            if !xi.is_integer() {
                return Err(Error::NotAnInteger);
            }
            *slot = xi.to_integer();
        }
        Ok(IntegralElement::new(self.field, coords))
    }

    pub fn from_integral(&self, a: &IntegralElement) -> FieldElement {
        let mut acc = self.field.zero();
        for (c, g) in a.coords.iter().zip(&self.elements) {
            acc = &acc + &g.scale(&BigRational::from_integer(c.clone()));
        }
        acc
    }

    /// Gram matrix [Tr(gamma_i gamma_j)] of the trace form; entries are
    /// rational integers for an integral basis.
    pub fn gram(&self) -> [[BigInt; 4]; 4] {
        let mut g: [[BigInt; 4]; 4] = Default::default();
        for i in 0..4 {
            for j in 0..4 {
                let t = (&self.elements[i] * &self.elements[j]).trace();
                assert!(t.is_integer(), "trace form entry not integral");
                g[i][j] = t.to_integer();
            }
        }
        g
    }
}

/// Solve the sixteen conditions Tr(gamma_i phi_j) = delta_ij exactly.
pub fn codifferent_basis(basis: &IntegralBasis) -> CodifferentBasis {
    let gram = basis.gram();
    let mut gr = linalg::zero_mat();
    for i in 0..4 {
        for j in 0..4 {
            gr[i][j] = BigRational::from_integer(gram[i][j].clone());
        }
    }
    let inv = linalg::invert(&gr).expect("trace form is nondegenerate");
    let mut elements: [FieldElement; 4] = [
        basis.field.zero(),
        basis.field.zero(),
        basis.field.zero(),
        basis.field.zero(),
    ];
    for (j, phi) in elements.iter_mut().enumerate() {
        let mut acc = basis.field.zero();
        for k in 0..4 {
            acc = &acc + &basis.elements[k].scale(&inv[k][j]);
        }
        *phi = acc;
    }
    let cod = CodifferentBasis {
        field: basis.field,
        elements,
    };
    for i in 0..4 {
        for j in 0..4 {
            let t = (&basis.elements()[i] * &cod.elements[j]).trace();
            let expect = if i == j { rat(1) } else { rat(0) };
            assert_eq!(t, expect, "duality Tr(gamma_{i} phi_{j})");
        }
    }
    cod
}

/// Tr((sum a_i gamma_i)(sum b_j phi_j)) = sum a_i b_i.
pub fn trace_pairing(a: &IntegralElement, b_coeffs: &[BigInt; 4]) -> BigInt {
    a.coords.iter().zip(b_coeffs).map(|(x, y)| x * y).sum()
}

/// Discriminant: determinant of [Tr(gamma_i gamma_j)].
pub fn discriminant(basis: &IntegralBasis) -> BigInt {
    let gram = basis.gram();
    let mut m = linalg::zero_mat();
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = BigRational::from_integer(gram[i][j].clone());
        }
    }
    let d = linalg::det(&m);
    assert!(
        d.is_integer() && d.is_positive(),
        "discriminant must be a positive integer"
    );
    d.to_integer()
}

/// Discriminant of the quadratic subfield Q(sqrt n).
pub fn quadratic_discriminant(n: i64) -> i64 {
    if n.rem_euclid(4) == 1 {
        n
    } else {
        4 * n
    }
}

/// Closed-form codifferent basis for fields whose basis has the type-(3)
/// shape, expressed over {1, sqrt P, sqrt Q, sqrt R} in role order:
/// phi1 = 1/4 - sqrt(Q)/(4Q), phi2 = sqrt(P)/(4P) - sqrt(R)/(4R),
/// phi3 = sqrt(Q)/(2Q), phi4 = sqrt(R)/(2R).
pub fn closed_form_codifferent_t3(field: &FieldSpec) -> Result<[FieldElement; 4], Error> {
    if !matches!(field.basis_type, BasisType::T3) {
        return Err(Error::WrongBasisType {
            expected: "T3",
            got: field.basis_type,
        });
    }
    let (pv, qv, rv) = field.role_values();
    let sp = field.sqrt(field.role_p);
    let sq = field.sqrt(field.role_q);
    let sr = field.sqrt(field.role_r());
    let one = field.one();
    let phi1 = &one.scale(&quarter()) - &sq.scale(&ratio(1, 4 * qv));
    let phi2 = &sp.scale(&ratio(1, 4 * pv)) - &sr.scale(&ratio(1, 4 * rv));
    let phi3 = sq.scale(&ratio(1, 2 * qv));
    let phi4 = sr.scale(&ratio(1, 2 * rv));
    Ok([phi1, phi2, phi3, phi4])
}

/// Transition matrix U with other_j = sum_i U[i][j] phi_i, computed through
/// the duality U[i][j] = Tr(gamma_i other_j). Both bases generate the same
/// lattice iff U is an integer matrix of determinant +-1.
pub fn codifferent_transition(basis: &IntegralBasis, other: &[FieldElement; 4]) -> Mat4 {
    let mut u = linalg::zero_mat();
    for i in 0..4 {
        for j in 0..4 {
            u[i][j] = (&basis.elements()[i] * &other[j]).trace();
        }
    }
    u
}

/// Everything derived from one field, computed once: integral basis,
/// codifferent, integer Gram matrix, discriminant.
#[derive(Clone, Debug)]
pub struct Ring {
    spec: FieldSpec,
    basis: IntegralBasis,
    codifferent: CodifferentBasis,
    gram: [[BigInt; 4]; 4],
    discriminant: BigInt,
}

impl Ring {
    pub fn new(spec: FieldSpec) -> Result<Ring, Error> {
        let basis = integral_basis(&spec)?;
        let codifferent = codifferent_basis(&basis);
        let gram = basis.gram();
        let discriminant = discriminant(&basis);
        Ok(Ring {
            spec,
            basis,
            codifferent,
            gram,
            discriminant,
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn basis(&self) -> &IntegralBasis {
        &self.basis
    }

    pub fn codifferent(&self) -> &CodifferentBasis {
        &self.codifferent
    }

    pub fn gram(&self) -> &[[BigInt; 4]; 4] {
        &self.gram
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    pub fn to_integral(&self, a: &FieldElement) -> Result<IntegralElement, Error> {
        self.basis.to_integral_coords(a)
    }

    pub fn from_integral(&self, a: &IntegralElement) -> FieldElement {
        self.basis.from_integral(a)
    }

    pub fn integral_from_i64(&self, coords: [i64; 4]) -> IntegralElement {
        IntegralElement::from_i64(self.spec, coords)
    }

    /// Tr(alpha^2) for an integral element, through the integer Gram matrix.
    pub fn trace_of_square(&self, a: &IntegralElement) -> BigInt {
        let mut acc = BigInt::zero();
        for i in 0..4 {
            for j in 0..4 {
                acc += &a.coords[i] * &a.coords[j] * &self.gram[i][j];
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::field::Radical;

    fn ring(p: i64, q: i64) -> Ring {
        Ring::new(FieldSpec::new(p, q).unwrap()).unwrap()
    }

    #[test]
    fn basis_examples() {
        // (30,35): {1, s30, s35, (s30+s42)/2}
        let r = ring(30, 35);
        let b = r.basis().elements();
        assert_eq!(b[0], r.spec().one());
        assert_eq!(b[1], r.spec().sqrt(Radical::P));
        assert_eq!(b[2], r.spec().sqrt(Radical::Q));
        let g4 = (&r.spec().sqrt(Radical::P) + &r.spec().sqrt(Radical::R)).scale(&ratio(1, 2));
        assert_eq!(b[3], g4);
        // (143,165): {1, s143, (1+s165)/2, (s143+s195)/2}
        let r = ring(143, 165);
        let b = r.basis().elements();
        let k = r.spec();
        assert_eq!(b[2], (&k.one() + &k.sqrt(Radical::Q)).scale(&ratio(1, 2)));
        assert_eq!(
            b[3],
            (&k.sqrt(Radical::P) + &k.sqrt(Radical::R)).scale(&ratio(1, 2))
        );
    }

    #[test]
    fn basis_self_checks_cover_all_types() {
        for (p, q) in [(30, 35), (10, 17), (143, 165), (5, 13), (21, 33), (33, 57)] {
            let r = ring(p, q);
            let b = r.basis();
            for gi in b.elements() {
                for gj in b.elements() {
                    assert!(b.to_integral_coords(&(gi * gj)).is_ok());
                }
            }
        }
    }

    #[test]
    fn integral_coords_examples() {
        let r = ring(143, 165);
        let mu = r
            .spec()
            .element([ratio(15, 2), ratio(1, 2), ratio(1, 2), ratio(1, 2)]);
        let coords = r.to_integral(&mu).unwrap();
        assert_eq!(coords, r.integral_from_i64([7, 0, 1, 1]));
        assert_eq!(
            r.to_integral(&r.spec().one()).unwrap(),
            r.integral_from_i64([1, 0, 0, 0])
        );
        assert!(matches!(
            r.to_integral(&r.spec().rational(ratio(1, 3))),
            Err(Error::NotAnInteger)
        ));
        // round trip
        let back = r.from_integral(&r.integral_from_i64([7, 0, 1, 1]));
        assert_eq!(back, mu);
    }

    #[test]
    fn algebraic_integer_examples() {
        let k = FieldSpec::new(143, 165).unwrap();
        let half_q = (&k.one() + &k.sqrt(Radical::Q)).scale(&ratio(1, 2));
        assert!(is_algebraic_integer(&half_q)); // (1+sqrt165)/2
        let k2 = FieldSpec::new(30, 35).unwrap();
        let half_p = (&k2.one() + &k2.sqrt(Radical::P)).scale(&ratio(1, 2));
        assert!(!is_algebraic_integer(&half_p)); // (1+sqrt30)/2
        assert!(is_algebraic_integer(&k.rational(rat(5))));
        // agreement with to_integral_coords success
        let r = ring(30, 35);
        assert!(r.to_integral(&half_p).is_err());
    }

    #[test]
    fn codifferent_duality_and_closed_form() {
        let r = ring(143, 165);
        let cod = r.codifferent();
        for i in 0..4 {
            for j in 0..4 {
                let t = (&r.basis().elements()[i] * &cod.elements[j]).trace();
                assert_eq!(t, if i == j { rat(1) } else { rat(0) });
            }
        }
        let closed = closed_form_codifferent_t3(r.spec()).unwrap();
        let u = codifferent_transition(r.basis(), &closed);
        assert!(linalg::is_unimodular(&u));
        // the dual basis is unique, so the closed form is literally equal
        for j in 0..4 {
            assert_eq!(closed[j], cod.elements[j]);
        }
        // Tr(mu * (phi1 - 11 phi2 + 6 phi3 - 12 phi4)) = 1
        let mu = r
            .spec()
            .element([ratio(15, 2), ratio(1, 2), ratio(1, 2), ratio(1, 2)]);
        let delta = cod.element_i64([1, -11, 6, -12]);
        assert_eq!((&mu * &delta).trace(), rat(1));
    }

    #[test]
    fn trace_pairing_examples() {
        let r = ring(143, 165);
        let a = r.integral_from_i64([1, 0, 0, 0]);
        assert_eq!(
            trace_pairing(&a, &[1, 0, 0, 0].map(BigInt::from)),
            BigInt::from(1)
        );
        let mu = r.integral_from_i64([7, 0, 1, 1]);
        assert_eq!(
            trace_pairing(&mu, &[1, -11, 6, -12].map(BigInt::from)),
            BigInt::from(1)
        );
        // agreement with the long-way trace
        let delta = r.codifferent().element_i64([3, -5, 2, 7]);
        let long = (&r.from_integral(&mu) * &delta).trace();
        assert_eq!(
            long,
            BigRational::from_integer(trace_pairing(&mu, &[3, -5, 2, 7].map(BigInt::from)))
        );
    }

    #[test]
    fn discriminant_examples() {
        let r = ring(143, 165);
        assert_eq!(*r.discriminant(), BigInt::from(73_616_400_i64));
        assert_eq!(*r.discriminant(), BigInt::from(16_i64 * 143 * 165 * 195));
        // cross-check against the product of quadratic subfield discriminants
        let prod = BigInt::from(quadratic_discriminant(143))
            * BigInt::from(quadratic_discriminant(165))
            * BigInt::from(quadratic_discriminant(195));
        assert_eq!(*r.discriminant(), prod);
        let r = ring(30, 35);
        let prod = BigInt::from(quadratic_discriminant(30))
            * BigInt::from(quadratic_discriminant(35))
            * BigInt::from(quadratic_discriminant(42));
        assert_eq!(*r.discriminant(), prod);
    }

    #[test]
    fn char_poly_integral_on_integral_elements() {
        let r = ring(21, 33);
        for coords in [[1, 2, -1, 3], [0, 0, 0, 1], [-2, 5, 1, -1]] {
            let e = r.from_integral(&r.integral_from_i64(coords));
            assert!(e.char_poly().is_integral(), "{coords:?}");
        }
    }
}
