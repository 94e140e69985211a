//! Exact-arithmetic toolkit for real biquadratic fields Q(sqrt p, sqrt q):
//! element arithmetic over {1, sqrt p, sqrt q, sqrt r}, integral bases for
//! the four congruence cases, the codifferent dual basis, complete
//! sum-of-squares rank certification, and the three indecomposable-integer
//! families with their norm and minimal-trace reports.
//!
//! Everything a certificate depends on is exact: big-rational coordinate
//! arithmetic, characteristic-polynomial sign tests for total positivity,
//! and Fincke-Pohst enumeration over rational trace-form ellipsoids.

pub mod arith;
pub mod embed;
pub mod enumerate;
pub mod error;
pub mod field;
pub mod indec;
pub mod linalg;
pub mod literal;
pub mod report;
pub mod ring;
pub mod sos;

pub use error::Error;
pub use field::{BasisType, CharPoly, FieldElement, FieldSpec, Radical};
pub use indec::{
    association_identities, family_report, family_units, is_decomposable, make_family,
    min_codiff_trace, universal_form_bounds, verify_norm_formulas, ElementName, Family,
    FamilyContext, FamilyElementLabel, FamilyParam, FamilyRow, FamilyUnits, MinTraceOutcome,
};
pub use literal::parse_element;
pub use ring::{
    closed_form_codifferent_t3, codifferent_basis, codifferent_transition, discriminant,
    integral_basis, is_algebraic_integer, quadratic_discriminant, trace_pairing, CodifferentBasis,
    IntegralBasis, IntegralElement, Ring,
};
pub use sos::{
    certify_min_rank, enumerate_dominated_squares, pythagoras_scan, sos_rank, witness_element,
    CertificateKind, RankCertificate, ScanItem, ScanOutcome, SearchBudget, SquareCandidate,
    WitnessKind,
};
