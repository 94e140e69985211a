//! The three indecomposable-integer families: construction of every listed
//! element, closed-form norms and the norm bound, brute-force
//! decomposability, minimal codifferent traces by complete enumeration,
//! association identities, and universal-form variable counts.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::{is_square_free, rat, ratio};
use crate::enumerate::{
    enumerate_ellipsoid, hyperplane_lattice, restrict_to_sublattice, Ellipsoid,
};
use crate::error::Error;
use crate::field::{BasisType, FieldElement, FieldSpec, Radical};
use crate::ring::{trace_pairing, IntegralElement, Ring};
use crate::sos::SearchBudget;

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    F1,
    F2,
    F3,
}

impl Family {
    pub fn min_n(self) -> i64 {
        match self {
            Family::F1 => 6,
            Family::F2 => 9,
            Family::F3 => 2,
        }
    }

    /// (p, q) as polynomials in n.
    fn parameters(self, n: i64) -> (i64, i64) {
        let p = (2 * n - 1) * (2 * n + 1);
        let q = match self {
            Family::F1 => (2 * n - 1) * (2 * n + 3),
            Family::F2 => (4 * n - 3) * (4 * n + 1),
            Family::F3 => (4 * n - 1) * (4 * n + 3),
        };
        (p, q)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::F1 => write!(f, "f1"),
            Family::F2 => write!(f, "f2"),
            Family::F3 => write!(f, "f3"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FamilyParam {
    pub family: Family,
    pub n: i64,
    pub spec: FieldSpec,
}

#[derive(Clone, Debug)]
pub struct FamilyUnits {
    pub eps_p: FieldElement,
    pub eps_q: FieldElement,
    pub eps_r: FieldElement,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementName {
    One,
    HalfMix,
    Mu,
    Alpha,
    Beta,
    Gamma,
    Delta,
    Omega,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FamilyElementLabel {
    pub name: ElementName,
    pub t: Option<i64>,
}

impl FamilyElementLabel {
    fn plain(name: ElementName) -> Self {
        FamilyElementLabel { name, t: None }
    }

    fn at(name: ElementName, t: i64) -> Self {
        FamilyElementLabel { name, t: Some(t) }
    }
}

impl fmt::Display for FamilyElementLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.name {
            ElementName::One => "one",
            ElementName::HalfMix => "half_mix",
            ElementName::Mu => "mu",
            ElementName::Alpha => "alpha",
            ElementName::Beta => "beta",
            ElementName::Gamma => "gamma",
            ElementName::Delta => "delta",
            ElementName::Omega => "omega",
        };
        match self.t {
            Some(t) => write!(f, "{base}_{t}"),
            None => write!(f, "{base}"),
        }
    }
}

/// Verify admissibility (square-freeness, coprimality for F2/F3, n range)
/// and construct the field.
pub fn make_family(family: Family, n: i64) -> Result<FamilyParam, Error> {
    if n < family.min_n() {
        return Err(Error::InadmissibleParameter(format!(
            "{family} requires n >= {}, got {n}",
            family.min_n()
        )));
    }
    let (p, q) = family.parameters(n);
    for (name, v) in [("p", p), ("q", q)] {
        if !is_square_free(v) {
            return Err(Error::InadmissibleParameter(format!(
                "{family} n={n}: {name} = {v} is not square-free"
            )));
        }
    }
    if matches!(family, Family::F2 | Family::F3) && crate::arith::gcd_i64(p, q) != 1 {
        return Err(Error::InadmissibleParameter(format!(
            "{family} n={n}: p = {p} and q = {q} are not coprime"
        )));
    }
    let r = {
        let r0 = crate::arith::gcd_i64(p, q);
        (p / r0) * (q / r0)
    };
    if !is_square_free(r) {
        return Err(Error::InadmissibleParameter(format!(
            "{family} n={n}: r = {r} is not square-free"
        )));
    }
    let spec = FieldSpec::new(p, q)?;
    // all three families have the type-(3) basis with the identity roles
    if spec.basis_type != BasisType::T3 || spec.role_p != Radical::P || spec.role_q != Radical::Q {
        return Err(Error::SelfCheckFailed(format!(
            "{family} n={n}: expected a type-(3) basis in identity roles, got {:?}",
            spec.basis_type
        )));
    }
    Ok(FamilyParam { family, n, spec })
}

/// Fundamental totally positive units of the three quadratic subfields.
pub fn family_units(fp: &FamilyParam) -> FamilyUnits {
    let k = &fp.spec;
    let n = fp.n;
    let eps_p = k.from_integers([2 * n, 1, 0, 0]);
    let (eq_half, er_const) = match fp.family {
        Family::F1 => (2 * n + 1, 2 * n + 2),
        Family::F2 => (4 * n - 1, 8 * n * n - 2 * n - 2),
        Family::F3 => (4 * n + 1, 8 * n * n + 2 * n - 2),
    };
    let eps_q = k.element([ratio(eq_half, 2), rat(0), ratio(1, 2), rat(0)]);
    let eps_r = k.from_integers([er_const, 0, 0, 1]);
    for (name, u) in [("eps_p", &eps_p), ("eps_q", &eps_q), ("eps_r", &eps_r)] {
        assert_eq!(u.norm(), rat(1), "{name} must have norm 1");
        assert!(u.is_totally_positive(), "{name} must be totally positive");
        assert!(u.char_poly().is_integral(), "{name} must be integral");
    }
    FamilyUnits {
        eps_p,
        eps_q,
        eps_r,
    }
}

/// A family with its ring data and units, ready for element construction.
pub struct FamilyContext {
    pub param: FamilyParam,
    pub ring: Ring,
    pub units: FamilyUnits,
}

impl FamilyContext {
    pub fn new(family: Family, n: i64) -> Result<FamilyContext, Error> {
        let param = make_family(family, n)?;
        let ring = Ring::new(param.spec)?;
        let units = family_units(&param);
        Ok(FamilyContext { param, ring, units })
    }

    fn inv(&self, u: &FieldElement) -> FieldElement {
        u.inverse().expect("units are invertible")
    }

    /// mu = n + 3/2 + (sqrt p + sqrt q + sqrt r)/2 (first family only).
    pub fn mu(&self) -> FieldElement {
        let n = self.param.n;
        self.param
            .spec
            .element([ratio(2 * n + 3, 2), ratio(1, 2), ratio(1, 2), ratio(1, 2)])
    }

    /// (eps_p^{-1} + eps_r)/2.
    pub fn half_mix(&self) -> FieldElement {
        (&self.inv(&self.units.eps_p) + &self.units.eps_r).scale(&ratio(1, 2))
    }

    /// Field element for a label; `None` when the label does not belong to
    /// this family or t is out of range.
    pub fn element(&self, label: &FamilyElementLabel) -> Option<FieldElement> {
        let k = &self.param.spec;
        let n = self.param.n;
        let one = k.one();
        let u = &self.units;
        let in_range = |t: i64, lo: i64, hi: i64| lo <= t && t <= hi;
        match (self.param.family, label.name, label.t) {
            (_, ElementName::One, None) => Some(one),
            (Family::F1, ElementName::HalfMix, None) | (Family::F3, ElementName::HalfMix, None) => {
                Some(self.half_mix())
            }
            (Family::F1, ElementName::Mu, None) => Some(self.mu()),
            (Family::F1, name, Some(t)) => {
                let mu1 = &self.mu() - &one;
                let step = mu1.scale(&rat(t));
                match name {
                    ElementName::Alpha if in_range(t, 3, 2 * n - 2) => {
                        Some(&(&one + &u.eps_p) + &step)
                    }
                    ElementName::Beta if in_range(t, 3, 2 * n - 2) => {
                        let base = (&one + &(&u.eps_p * &u.eps_r)).scale(&ratio(1, 2));
                        Some(&(&base + &u.eps_p) + &step)
                    }
                    ElementName::Gamma if in_range(t, 4, 2 * n - 1) => {
                        Some(&(&one + &self.inv(&u.eps_q)) + &step)
                    }
                    ElementName::Delta if in_range(t, 4, 2 * n - 1) => {
                        let base = (&one + &(&u.eps_p * &u.eps_r)).scale(&ratio(1, 2));
                        Some(&(&base + &self.inv(&u.eps_q)) + &step)
                    }
                    ElementName::Omega if in_range(t, 2, 2 * n - 1) => {
                        let base = (&self.inv(&u.eps_r) + &u.eps_p).scale(&ratio(1, 2));
                        let mu2 = &self.mu() - &k.from_integers([2, 0, 0, 0]);
                        Some(&base + &mu2.scale(&rat(t)))
                    }
                    _ => None,
                }
            }
            (Family::F2, ElementName::Alpha, Some(t)) if in_range(t, 0, 2 * n - 2) => {
                let base = (&self.inv(&u.eps_p) + &u.eps_r).scale(&ratio(1, 2));
                let step = (&u.eps_q - &self.inv(&u.eps_p)).scale(&rat(t));
                Some(&base + &step)
            }
            (Family::F2, ElementName::Beta, Some(t)) if in_range(t, 1, 2 * n - 1) => {
                let base = &self.inv(&u.eps_p) - &u.eps_q;
                let step = (&(&u.eps_p * &u.eps_q) - &one).scale(&rat(t));
                Some(&base + &step)
            }
            (Family::F3, ElementName::Alpha, Some(t)) if in_range(t, 0, 2 * n - 2) => {
                let base = (&u.eps_p + &u.eps_r).scale(&ratio(1, 2));
                let step = (&u.eps_p - &self.inv(&u.eps_q)).scale(&rat(t));
                Some(&base + &step)
            }
            (Family::F3, ElementName::Beta, Some(t)) if in_range(t, 1, 2 * n - 1) => {
                let base = &self.inv(&u.eps_q) - &u.eps_p;
                let step = (&(&u.eps_p * &u.eps_q) - &one).scale(&rat(t));
                Some(&base + &step)
            }
            _ => None,
        }
    }

    /// All labels of the family list, in deterministic order.
    pub fn labels(&self) -> Vec<FamilyElementLabel> {
        let n = self.param.n;
        let mut out = vec![FamilyElementLabel::plain(ElementName::One)];
        match self.param.family {
            Family::F1 => {
                out.push(FamilyElementLabel::plain(ElementName::HalfMix));
                out.push(FamilyElementLabel::plain(ElementName::Mu));
                for t in 3..=2 * n - 2 {
                    out.push(FamilyElementLabel::at(ElementName::Alpha, t));
                }
                for t in 3..=2 * n - 2 {
                    out.push(FamilyElementLabel::at(ElementName::Beta, t));
                }
                for t in 4..=2 * n - 1 {
                    out.push(FamilyElementLabel::at(ElementName::Gamma, t));
                }
                for t in 4..=2 * n - 1 {
                    out.push(FamilyElementLabel::at(ElementName::Delta, t));
                }
                for t in 2..=2 * n - 1 {
                    out.push(FamilyElementLabel::at(ElementName::Omega, t));
                }
            }
            Family::F2 => {
                for t in 0..=2 * n - 2 {
                    out.push(FamilyElementLabel::at(ElementName::Alpha, t));
                }
                for t in 1..=2 * n - 1 {
                    out.push(FamilyElementLabel::at(ElementName::Beta, t));
                }
            }
            Family::F3 => {
                out.push(FamilyElementLabel::plain(ElementName::HalfMix));
                for t in 0..=2 * n - 2 {
                    out.push(FamilyElementLabel::at(ElementName::Alpha, t));
                }
                for t in 1..=2 * n - 1 {
                    out.push(FamilyElementLabel::at(ElementName::Beta, t));
                }
            }
        }
        out
    }

    /// The reduced set that the association identities leave for norm and
    /// trace verification in the first family.
    pub fn reduced_verification_labels(&self) -> Vec<FamilyElementLabel> {
        let n = self.param.n;
        assert_eq!(self.param.family, Family::F1);
        let mut out = vec![
            FamilyElementLabel::plain(ElementName::One),
            FamilyElementLabel::plain(ElementName::HalfMix),
            FamilyElementLabel::plain(ElementName::Mu),
        ];
        for t in 3..=2 * n - 2 {
            out.push(FamilyElementLabel::at(ElementName::Alpha, t));
        }
        for t in 3..=n {
            out.push(FamilyElementLabel::at(ElementName::Beta, t));
        }
        for t in 2..=n {
            out.push(FamilyElementLabel::at(ElementName::Omega, t));
        }
        out
    }

    /// Every listed element with its integral coordinates; asserts total
    /// positivity and integrality of each.
    pub fn family_elements(&self) -> Result<Vec<(FamilyElementLabel, IntegralElement)>, Error> {
        self.labels()
            .into_iter()
            .map(|label| {
                let f = self.element(&label).expect("label from labels()");
                if !f.is_totally_positive() {
                    return Err(Error::SelfCheckFailed(format!(
                        "{label} is not totally positive"
                    )));
                }
                let e = self.ring.to_integral(&f).map_err(|_| {
                    Error::SelfCheckFailed(format!("{label} is not an algebraic integer"))
                })?;
                Ok((label, e))
            })
            .collect()
    }

    /// Closed-form norm. For gamma/delta (F1) and beta at general t
    /// (F2/F3) the value is transported along the association identities.
    pub fn family_norm(&self, label: &FamilyElementLabel) -> Option<BigInt> {
        let n = self.param.n as i128;
        let sq = |x: i128| BigInt::from(x * x);
        match (self.param.family, label.name, label.t) {
            (_, ElementName::One, None) => Some(BigInt::from(1)),
            (Family::F1, ElementName::HalfMix, None) => Some(sq(2 * n + 1)),
            (Family::F1, ElementName::Mu, None) => Some(BigInt::from(4)),
            (Family::F1, ElementName::Alpha, Some(t)) => {
                let t = t as i128;
                Some(sq((4 * n + 2) * (t + 1) - t * t))
            }
            (Family::F1, ElementName::Beta, Some(t)) => Some(f1_beta_norm(n, t as i128)),
            (Family::F1, ElementName::Gamma, Some(t)) => Some(f1_beta_norm(n, (t - 1) as i128)),
            (Family::F1, ElementName::Delta, Some(t)) => {
                let t = (2 * self.param.n + 2 - t) as i128;
                Some(sq((4 * n + 2) * (t + 1) - t * t))
            }
            (Family::F1, ElementName::Omega, Some(t)) => {
                let t = t as i128;
                Some(sq(2 * n + 1 + (4 * n + 2) * t - 2 * t * t))
            }
            (Family::F2, ElementName::Alpha, Some(t)) => {
                let t = t as i128;
                Some(sq(t * t - 4 * n * n + 1))
            }
            (Family::F2, ElementName::Beta, Some(t)) => {
                let t = 2 * n - t as i128;
                Some(sq(t * t - 4 * n * n + 1))
            }
            (Family::F3, ElementName::HalfMix, None) => Some(sq(4 * n * n + 2 * n - 1)),
            (Family::F3, ElementName::Alpha, Some(t)) => {
                let t = t as i128;
                Some(sq(t * t + t - 4 * n * n - 2 * n + 1))
            }
            (Family::F3, ElementName::Beta, Some(t)) => {
                let t = 2 * n - t as i128;
                Some(sq(t * t + t - 4 * n * n - 2 * n + 1))
            }
            _ => None,
        }
    }

    /// The family's norm bound and the label that attains it.
    pub fn norm_bound(&self) -> (BigInt, FamilyElementLabel) {
        let n = self.param.n as i128;
        match self.param.family {
            Family::F1 => (
                BigInt::from(16 * n.pow(4) + 64 * n.pow(3) + 16 * n * n - 96 * n + 36),
                FamilyElementLabel::at(ElementName::Alpha, 2 * self.param.n - 2),
            ),
            Family::F2 => (
                BigInt::from(16 * n.pow(4) - 8 * n * n + 1),
                FamilyElementLabel::at(ElementName::Alpha, 0),
            ),
            Family::F3 => (
                BigInt::from(16 * n.pow(4) + 16 * n.pow(3) - 4 * n * n - 4 * n + 1),
                FamilyElementLabel::at(ElementName::Alpha, 0),
            ),
        }
    }

    /// Reference codifferent trace witnesses for the family, as
    /// coefficient vectors over phi_1..phi_4: (trace-1 witnesses, trace-2
    /// witness for alpha/beta/gamma/delta, trace-2 witness for omega).
    pub fn reference_trace_witnesses(&self) -> (Vec<[i64; 4]>, Option<[i64; 4]>, Option<[i64; 4]>) {
        let n = self.param.n;
        match self.param.family {
            Family::F1 => (
                vec![[1, 2 * n - 1, -(n - 1), -1], [1, -(2 * n - 1), n, -2 * n]],
                Some([1, -(2 * n - 1), n, -2 * n]),
                Some([1, -(2 * n - 1), -(n - 1), 0]),
            ),
            Family::F2 => (
                vec![[1, 2 * n - 1, -(2 * n - 2), -(4 * n * n - 2 * n - 1)]],
                None,
                None,
            ),
            Family::F3 => (
                vec![[1, -(2 * n - 1), 2 * n, -(4 * n * n + 2 * n - 2)]],
                None,
                None,
            ),
        }
    }
}

/// Corrected quartic reading of the printed first-family beta norm: the five
/// printed coefficients carry exponents 4, 3, 2, 1, 0.
pub fn f1_beta_norm(n: i128, t: i128) -> BigInt {
    BigInt::from(
        t.pow(4) - (4 * n + 2) * t.pow(3) - (4 * n * n + 12 * n + 3) * t * t
            + (16 * n.pow(3) + 40 * n * n + 24 * n + 4) * t
            + 16 * n.pow(3)
            + 48 * n * n
            + 44 * n
            + 13,
    )
}

/// The same five coefficients read verbatim (both middle terms on t^2),
/// kept for the reconciliation report.
pub fn f1_beta_norm_printed(n: i128, t: i128) -> BigInt {
    BigInt::from(
        t.pow(3) - (4 * n + 2) * t * t - (4 * n * n + 12 * n + 3) * t * t
            + (16 * n.pow(3) + 40 * n * n + 24 * n + 4) * t
            + 16 * n.pow(3)
            + 48 * n * n
            + 44 * n
            + 13,
    )
}

#[derive(Clone, Debug)]
pub struct NormRow {
    pub label: FamilyElementLabel,
    pub direct: BigInt,
    pub formula: BigInt,
}

#[derive(Clone, Debug)]
pub struct NormReport {
    pub rows: Vec<NormRow>,
    /// For the first family: whether the verbatim (cubic) reading of the
    /// printed beta norm matches direct computation, and whether the
    /// corrected quartic reading does.
    pub beta_printed_reading_matches: Option<bool>,
    pub beta_corrected_reading_matches: Option<bool>,
}

/// Check every element's closed-form norm against the direct norm; also
/// reconcile the printed first-family beta formula.
pub fn verify_norm_formulas(ctx: &FamilyContext) -> Result<NormReport, Error> {
    let mut rows = Vec::new();
    for (label, elt) in ctx.family_elements()? {
        let direct = ctx.ring.from_integral(&elt).norm();
        assert!(direct.is_integer());
        let direct = direct.to_integer();
        let formula = ctx
            .family_norm(&label)
            .expect("every listed label has a norm formula");
        if direct != formula {
            return Err(Error::FormulaMismatch {
                label: label.to_string(),
                direct,
                formula,
            });
        }
        rows.push(NormRow {
            label,
            direct,
            formula,
        });
    }
    let (mut printed, mut corrected) = (None, None);
    if ctx.param.family == Family::F1 {
        let n = ctx.param.n;
        let mut printed_ok = true;
        let mut corrected_ok = true;
        for t in 3..=2 * n - 2 {
            let label = FamilyElementLabel::at(ElementName::Beta, t);
            let direct = ctx
                .ring
                .from_integral(&ctx.ring.to_integral(&ctx.element(&label).unwrap()).unwrap());
            let direct = direct.norm().to_integer();
            printed_ok &= direct == f1_beta_norm_printed(n as i128, t as i128);
            corrected_ok &= direct == f1_beta_norm(n as i128, t as i128);
        }
        printed = Some(printed_ok);
        corrected = Some(corrected_ok);
    }
    Ok(NormReport {
        rows,
        beta_printed_reading_matches: printed,
        beta_corrected_reading_matches: corrected,
    })
}

/// Complete search for a totally positive beta with 0 < beta < a in the
/// domination order; the box sigma_j(beta) in (0, sigma_j(a)) sits inside
/// the exact ellipsoid Tr(a^{-2} (beta - a/2)^2) <= 1.
pub fn is_decomposable(
    ring: &Ring,
    a: &IntegralElement,
    budget: &SearchBudget,
) -> Result<Option<IntegralElement>, Error> {
    let af = ring.from_integral(a);
    if !af.is_totally_positive() {
        return Err(Error::NotTotallyNonnegative);
    }
    let inv = af.inverse().expect("totally positive");
    let gammas = ring.basis().elements();
    let scaled: Vec<FieldElement> = gammas.iter().map(|g| g * &inv).collect();
    let mut gram = vec![vec![BigRational::zero(); 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            let t = (&scaled[i] * &scaled[j]).trace();
            gram[i][j] = t.clone();
            gram[j][i] = t;
        }
    }
    let center = a
        .coords
        .iter()
        .map(|c| BigRational::new(c.clone(), BigInt::from(2)))
        .collect();
    let e = Ellipsoid {
        gram,
        center,
        radius: rat(1),
    };
    let mut witness: Option<IntegralElement> = None;
    enumerate_ellipsoid(&e, budget.node_limit, &mut |pt| {
        let pt: &[BigInt; 4] = pt.try_into().expect("dimension 4");
        let cand = IntegralElement::new(*ring.spec(), pt.clone());
        if cand.is_zero() || cand.coords == a.coords {
            return true;
        }
        let f = ring.from_integral(&cand);
        if f.is_totally_positive() && (&af - &f).is_totally_positive() {
            witness = Some(cand);
            return false;
        }
        true
    })
    .map_err(|e| match e {
        Error::BudgetExceeded { nodes, .. } => Error::BudgetExceeded {
            nodes,
            proven_bound: 0,
        },
        other => other,
    })?;
    Ok(witness)
}

/// Outcome of the minimal codifferent trace search.
#[derive(Clone, Debug)]
pub enum MinTraceOutcome {
    Found {
        value: u32,
        witness_coeffs: [BigInt; 4],
        witness: FieldElement,
    },
    /// No totally positive codifferent element pairs to a trace within the
    /// cap; the true minimum exceeds it.
    AboveCap { cap: u32 },
}

impl MinTraceOutcome {
    pub fn value(&self) -> Option<u32> {
        match self {
            MinTraceOutcome::Found { value, .. } => Some(*value),
            MinTraceOutcome::AboveCap { .. } => None,
        }
    }
}

/// Minimum of Tr(a delta) over totally positive delta in the codifferent
/// with Tr(a delta) <= t_max, by complete enumeration level by level. A
/// totally positive delta with Tr(a delta) = s has every sigma_j(a delta)
/// in (0, s), so it lies in the exact ellipsoid Tr((a delta - s/2)^2) <=
/// s^2 restricted to the integer hyperplane of pairing s; exhausting a
/// level with no totally positive hit proves minTr(a) > s.
pub fn min_codiff_trace(
    ring: &Ring,
    a: &IntegralElement,
    t_max: u32,
) -> Result<MinTraceOutcome, Error> {
    assert!(t_max >= 1);
    let af = ring.from_integral(a);
    if !af.is_totally_positive() {
        return Err(Error::NotTotallyNonnegative);
    }
    let inv = af.inverse().expect("totally positive");
    let phis = &ring.codifferent().elements;
    let scaled: Vec<FieldElement> = phis.iter().map(|phi| phi * &af).collect();
    let mut gram = vec![vec![BigRational::zero(); 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            let t = (&scaled[i] * &scaled[j]).trace();
            gram[i][j] = t.clone();
            gram[j][i] = t;
        }
    }
    let gammas = ring.basis().elements();
    for s in 1..=t_max {
        // center coordinates of (s/2) a^{-1} over the codifferent basis
        let c = inv.scale(&ratio(s as i64, 2));
        let center: Vec<BigRational> = gammas.iter().map(|gamma| (gamma * &c).trace()).collect();
        let e = Ellipsoid {
            gram: gram.clone(),
            center,
            radius: rat((s * s) as i64),
        };
        // pass to the hyperplane Tr(a delta) = s (pairing is the integer
        // dot product with a's coordinates)
        let want = BigInt::from(s);
        let Some((b0, null_basis)) = hyperplane_lattice(&a.coords, &want) else {
            // gcd of the coordinates does not divide s: the level is empty
            continue;
        };
        let slice = restrict_to_sublattice(&e, &b0, &null_basis)
            .expect("pulled-back trace form stays positive definite");
        let expand = |c: &[BigInt]| -> [BigInt; 4] {
            let mut out: [BigInt; 4] = b0.clone().try_into().expect("dimension 4");
            for (v, ci) in null_basis.iter().zip(c) {
                for (slot, vi) in out.iter_mut().zip(v) {
                    *slot += vi * ci;
                }
            }
            out
        };
        let mut hit: Option<[BigInt; 4]> = None;
        enumerate_ellipsoid(&slice, u64::MAX, &mut |pt| {
            let coeffs = expand(pt);
            debug_assert_eq!(trace_pairing(a, &coeffs), want);
            let delta = ring.codifferent().element(&coeffs);
            if delta.is_totally_positive() {
                hit = Some(coeffs);
                return false;
            }
            true
        })?;
        if let Some(coeffs) = hit {
            let witness = ring.codifferent().element(&coeffs);
            return Ok(MinTraceOutcome::Found {
                value: s,
                witness_coeffs: coeffs,
                witness,
            });
        }
    }
    Ok(MinTraceOutcome::AboveCap { cap: t_max })
}

/// One verified association identity batch.
#[derive(Clone, Debug)]
pub struct AssocReport {
    pub family: Family,
    pub n: i64,
    /// (identity name, number of t values verified)
    pub verified: Vec<(String, u32)>,
}

/// Verify every printed association identity exactly, for every t in range.
pub fn association_identities(ctx: &FamilyContext) -> Result<AssocReport, Error> {
    let n = ctx.param.n;
    let u = &ctx.units;
    let mut verified = Vec::new();
    let check = |name: &str, t: i64, lhs: &FieldElement, rhs: &FieldElement| {
        if lhs == rhs {
            Ok(())
        } else {
            Err(Error::IdentityFailed {
                name: name.to_string(),
                t,
            })
        }
    };
    match ctx.param.family {
        Family::F1 => {
            let mut counts = [0u32; 4];
            for t in 3..=2 * n - 2 {
                let alpha = ctx
                    .element(&FamilyElementLabel::at(ElementName::Alpha, t))
                    .unwrap();
                let beta = ctx
                    .element(&FamilyElementLabel::at(ElementName::Beta, t))
                    .unwrap();
                let delta = ctx
                    .element(&FamilyElementLabel::at(
                        ElementName::Delta,
                        2 * n - 1 - (t - 3),
                    ))
                    .unwrap();
                check(
                    "delta_{2n-1-(t-3)} = sigma3(alpha_t) eps_r",
                    t,
                    &delta,
                    &(&alpha.conjugate(3) * &u.eps_r),
                )?;
                counts[0] += 1;
                let beta_img = ctx
                    .element(&FamilyElementLabel::at(
                        ElementName::Beta,
                        2 * n - 2 - (t - 3),
                    ))
                    .unwrap();
                check(
                    "beta_{2n-2-(t-3)} = sigma3(beta_t) eps_r",
                    t,
                    &beta_img,
                    &(&beta.conjugate(3) * &u.eps_r),
                )?;
                counts[1] += 1;
                let gamma = ctx
                    .element(&FamilyElementLabel::at(ElementName::Gamma, t + 1))
                    .unwrap();
                check(
                    "gamma_{t+1} = sigma4(beta_t) eps_p",
                    t,
                    &gamma,
                    &(&beta.conjugate(4) * &u.eps_p),
                )?;
                counts[2] += 1;
            }
            for t in 2..=2 * n - 1 {
                let omega = ctx
                    .element(&FamilyElementLabel::at(ElementName::Omega, t))
                    .unwrap();
                let omega_img = ctx
                    .element(&FamilyElementLabel::at(
                        ElementName::Omega,
                        2 * n - 1 - (t - 2),
                    ))
                    .unwrap();
                check(
                    "omega_{2n-1-(t-2)} = sigma2(omega_t) eps_p",
                    t,
                    &omega_img,
                    &(&omega.conjugate(2) * &u.eps_p),
                )?;
                counts[3] += 1;
            }
            verified.push(("delta = sigma3(alpha) eps_r".into(), counts[0]));
            verified.push(("beta = sigma3(beta) eps_r".into(), counts[1]));
            verified.push(("gamma = sigma4(beta) eps_p".into(), counts[2]));
            verified.push(("omega = sigma2(omega) eps_p".into(), counts[3]));
        }
        Family::F2 => {
            let mut count = 0;
            for t in 1..=2 * n - 2 {
                let alpha = ctx
                    .element(&FamilyElementLabel::at(ElementName::Alpha, t))
                    .unwrap();
                let beta = ctx
                    .element(&FamilyElementLabel::at(
                        ElementName::Beta,
                        2 * n - 1 - (t - 1),
                    ))
                    .unwrap();
                check(
                    "beta_{2n-1-(t-1)} = sigma2(alpha_t) eps_r",
                    t,
                    &beta,
                    &(&alpha.conjugate(2) * &u.eps_r),
                )?;
                count += 1;
            }
            verified.push(("beta = sigma2(alpha) eps_r".into(), count));
        }
        Family::F3 => {
            let alpha0 = ctx
                .element(&FamilyElementLabel::at(ElementName::Alpha, 0))
                .unwrap();
            let half = ctx.half_mix();
            let rhs = &half.conjugate(3) * &(&u.eps_p * &u.eps_r);
            check("alpha_0 = sigma3(half_mix) eps_p eps_r", 0, &alpha0, &rhs)?;
            verified.push(("alpha_0 = sigma3(half_mix) eps_p eps_r".into(), 1));
            let mut count = 0;
            for t in 1..=2 * n - 2 {
                let alpha = ctx
                    .element(&FamilyElementLabel::at(ElementName::Alpha, t))
                    .unwrap();
                let beta = ctx
                    .element(&FamilyElementLabel::at(
                        ElementName::Beta,
                        2 * n - 1 - (t - 1),
                    ))
                    .unwrap();
                check(
                    "beta_{2n-1-(t-1)} = sigma3(alpha_t) eps_r",
                    t,
                    &beta,
                    &(&alpha.conjugate(3) * &u.eps_r),
                )?;
                count += 1;
            }
            verified.push(("beta = sigma3(alpha) eps_r".into(), count));
        }
    }
    // unit sanity belongs to every batch
    for unit in [&u.eps_p, &u.eps_q, &u.eps_r] {
        assert_eq!(unit.norm(), rat(1));
        assert!(unit.is_totally_positive());
    }
    Ok(AssocReport {
        family: ctx.param.family,
        n,
        verified,
    })
}

/// Universal-form variable lower bounds from trace-1 / trace-2 element
/// counts against the reference codifferent witnesses.
#[derive(Clone, Debug)]
pub struct UniversalBounds {
    pub trace_one_count: u32,
    pub trace_two_count: u32,
    /// n/4 as an exact rational.
    pub classical: BigRational,
    /// max(n/4, m/12) as an exact rational.
    pub diagonal: BigRational,
    pub classical_ceil: BigInt,
    pub diagonal_ceil: BigInt,
}

/// Count the trace-1 and trace-2 elements certified by the reference
/// codifferent witnesses. For F2/F3 the trace-1 list is the family list
/// plus the sigma_4 images of beta_t and six unit elements, all of which
/// pair to 1 with the shared witness.
pub fn universal_form_bounds(ctx: &FamilyContext) -> Result<UniversalBounds, Error> {
    let n = ctx.param.n;
    let ring = &ctx.ring;
    let u = &ctx.units;
    let (trace1_witnesses, trace2_abgd, _trace2_omega) = ctx.reference_trace_witnesses();
    // the shared trace-1 witness: the single reference witness for F2/F3,
    // phi1 + (2n-1) phi2 - (n-1) phi3 - phi4 for F1
    let delta1 = trace1_witnesses[0].map(BigInt::from);
    let delta1_elt = ring.codifferent().element(&delta1);
    assert!(
        delta1_elt.is_totally_positive(),
        "reference witness must be totally positive"
    );

    let mut trace1_elements: Vec<FieldElement> = ctx
        .family_elements()?
        .into_iter()
        .map(|(_, e)| ring.from_integral(&e))
        .collect();
    if matches!(ctx.param.family, Family::F2 | Family::F3) {
        for t in 1..=2 * n - 1 {
            let beta = ctx
                .element(&FamilyElementLabel::at(ElementName::Beta, t))
                .unwrap();
            trace1_elements.push(beta.conjugate(4));
        }
        let inv = |x: &FieldElement| x.inverse().unwrap();
        let six = match ctx.param.family {
            Family::F2 => [
                inv(&u.eps_p),
                u.eps_q.clone(),
                u.eps_r.clone(),
                (&u.eps_p * &u.eps_q).conjugate(4),
                (&u.eps_p * &u.eps_r).conjugate(4),
                (&u.eps_q * &u.eps_r).conjugate(4),
            ],
            Family::F3 => [
                u.eps_p.clone(),
                inv(&u.eps_q),
                u.eps_r.clone(),
                (&u.eps_p * &u.eps_q).conjugate(4),
                (&u.eps_p * &u.eps_r).conjugate(4),
                (&u.eps_q * &u.eps_r).conjugate(4),
            ],
            Family::F1 => unreachable!(),
        };
        trace1_elements.extend(six);
    }
    let mut trace_one_count = 0u32;
    for elt in &trace1_elements {
        if !elt.is_totally_positive() {
            return Err(Error::SelfCheckFailed(
                "trace-1 candidate is not totally positive".into(),
            ));
        }
        let coords = ring.to_integral(elt)?;
        if trace_pairing(&coords, &delta1) == BigInt::from(1) {
            trace_one_count += 1;
        }
    }
    let mut trace_two_count = 0u32;
    if let Some(d2) = trace2_abgd {
        let d2 = d2.map(BigInt::from);
        let d2_elt = ring.codifferent().element(&d2);
        assert!(d2_elt.is_totally_positive());
        for (label, elt) in ctx.family_elements()? {
            if matches!(
                label.name,
                ElementName::Alpha | ElementName::Beta | ElementName::Gamma | ElementName::Delta
            ) && trace_pairing(&elt, &d2) == BigInt::from(2)
            {
                trace_two_count += 1;
            }
        }
    }
    let classical = BigRational::new(BigInt::from(trace_one_count), BigInt::from(4));
    let diagonal_candidate = BigRational::new(BigInt::from(trace_two_count), BigInt::from(12));
    let diagonal = classical.clone().max(diagonal_candidate);
    Ok(UniversalBounds {
        trace_one_count,
        trace_two_count,
        classical_ceil: classical.ceil().to_integer(),
        diagonal_ceil: diagonal.ceil().to_integer(),
        classical,
        diagonal,
    })
}

/// One row of the family report.
#[derive(Clone, Debug)]
pub struct FamilyRow {
    pub label: FamilyElementLabel,
    pub coords: [BigInt; 4],
    pub norm: BigInt,
    pub formula_norm: BigInt,
    pub min_trace: Option<u32>,
    pub min_trace_witness: Option<[BigInt; 4]>,
    pub indecomposable: Option<bool>,
}

/// Full per-element report: coordinates, norms both ways, minimal traces
/// with witnesses, and (optionally) certified indecomposability. Elements
/// are processed in parallel; the row order is the label order.
pub fn family_report(
    ctx: &FamilyContext,
    t_max: u32,
    check_indecomposability: bool,
    budget: &SearchBudget,
) -> Result<Vec<FamilyRow>, Error> {
    let elements = ctx.family_elements()?;
    elements
        .into_par_iter()
        .map(|(label, elt)| {
            let f = ctx.ring.from_integral(&elt);
            let norm = f.norm().to_integer();
            let formula_norm = ctx.family_norm(&label).expect("listed label");
            let mt = min_codiff_trace(&ctx.ring, &elt, t_max)?;
            let (min_trace, min_trace_witness) = match mt {
                MinTraceOutcome::Found {
                    value,
                    witness_coeffs,
                    ..
                } => (Some(value), Some(witness_coeffs)),
                MinTraceOutcome::AboveCap { .. } => (None, None),
            };
            let indecomposable = if check_indecomposability {
                Some(is_decomposable(&ctx.ring, &elt, budget)?.is_none())
            } else {
                None
            };
            Ok(FamilyRow {
                label,
                coords: elt.coords,
                norm,
                formula_norm,
                min_trace,
                min_trace_witness,
                indecomposable,
            })
        })
        .collect()
}
