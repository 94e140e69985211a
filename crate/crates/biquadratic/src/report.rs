//! Machine-readable report payloads shared by the CLI and tests. Big
//! integers are serialized as decimal strings so the JSON is stable and
//! never overflows a reader's number type.

use num_bigint::BigInt;
use serde::Serialize;

use crate::field::FieldSpec;
use crate::indec::{FamilyRow, UniversalBounds};
use crate::ring::Ring;
use crate::sos::{CertificateKind, RankCertificate, ScanOutcome};

#[derive(Serialize, Debug, Clone)]
pub struct FieldInfo {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub p0: i64,
    pub q0: i64,
    pub r0: i64,
    pub basis_type: String,
    pub roles: RoleInfo,
    pub basis: Vec<String>,
    pub codifferent: Vec<String>,
    pub discriminant: String,
}

#[derive(Serialize, Debug, Clone)]
pub struct RoleInfo {
    pub p_role: String,
    pub q_role: String,
}

pub fn field_info(ring: &Ring) -> FieldInfo {
    let spec = ring.spec();
    FieldInfo {
        p: spec.p,
        q: spec.q,
        r: spec.r,
        p0: spec.p0,
        q0: spec.q0,
        r0: spec.r0,
        basis_type: spec.basis_type.to_string(),
        roles: RoleInfo {
            p_role: format!("{:?}", spec.role_p).to_lowercase(),
            q_role: format!("{:?}", spec.role_q).to_lowercase(),
        },
        basis: ring
            .basis()
            .elements()
            .iter()
            .map(|e| e.to_string())
            .collect(),
        codifferent: ring
            .codifferent()
            .elements
            .iter()
            .map(|e| e.to_string())
            .collect(),
        discriminant: ring.discriminant().to_string(),
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct RankReport {
    pub kind: CertificateKind,
    pub rank_or_bound: u32,
    pub target: String,
    pub target_coords: Vec<String>,
    pub witness: Vec<String>,
    pub nodes_explored: u64,
}

pub fn rank_report(ring: &Ring, cert: &RankCertificate) -> RankReport {
    RankReport {
        kind: cert.kind,
        rank_or_bound: cert.rank_or_bound,
        target: ring.from_integral(&cert.target).to_string(),
        target_coords: cert.target.coords.iter().map(BigInt::to_string).collect(),
        witness: cert
            .witness
            .iter()
            .flatten()
            .map(|w| ring.from_integral(w).to_string())
            .collect(),
        nodes_explored: cert.nodes_explored,
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct FamilyRowReport {
    pub label: String,
    pub t: Option<i64>,
    pub integral_coords: Vec<String>,
    pub norm: String,
    pub formula_norm: String,
    pub min_trace: Option<u32>,
    pub min_trace_witness: Option<Vec<String>>,
    pub indecomposable: Option<bool>,
}

pub fn family_row_report(row: &FamilyRow) -> FamilyRowReport {
    FamilyRowReport {
        label: row.label.to_string(),
        t: row.label.t,
        integral_coords: row.coords.iter().map(BigInt::to_string).collect(),
        norm: row.norm.to_string(),
        formula_norm: row.formula_norm.to_string(),
        min_trace: row.min_trace,
        min_trace_witness: row
            .min_trace_witness
            .as_ref()
            .map(|w| w.iter().map(BigInt::to_string).collect()),
        indecomposable: row.indecomposable,
    }
}

/// Render family rows as CSV with a fixed header.
pub fn family_rows_csv(rows: &[FamilyRowReport]) -> String {
    let mut out = String::from(
        "label,t,a1,a2,a3,a4,norm,formula_norm,min_trace,min_trace_witness,indecomposable\n",
    );
    for r in rows {
        let witness = r
            .min_trace_witness
            .as_ref()
            .map(|w| w.join(" "))
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.label,
            r.t.map(|t| t.to_string()).unwrap_or_default(),
            r.integral_coords[0],
            r.integral_coords[1],
            r.integral_coords[2],
            r.integral_coords[3],
            r.norm,
            r.formula_norm,
            r.min_trace
                .map(|v| v.to_string())
                .unwrap_or_else(|| ">cap".into()),
            witness,
            r.indecomposable.map(|b| b.to_string()).unwrap_or_default(),
        ));
    }
    out
}

#[derive(Serialize, Debug, Clone)]
pub struct UniversalBoundsReport {
    pub trace_one_count: u32,
    pub trace_two_count: u32,
    pub classical: String,
    pub diagonal: String,
    pub classical_ceil: String,
    pub diagonal_ceil: String,
}

pub fn universal_bounds_report(b: &UniversalBounds) -> UniversalBoundsReport {
    UniversalBoundsReport {
        trace_one_count: b.trace_one_count,
        trace_two_count: b.trace_two_count,
        classical: b.classical.to_string(),
        diagonal: b.diagonal.to_string(),
        classical_ceil: b.classical_ceil.to_string(),
        diagonal_ceil: b.diagonal_ceil.to_string(),
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct ScanItemReport {
    pub source: String,
    pub target: String,
    pub kind: CertificateKind,
    pub value: u32,
}

#[derive(Serialize, Debug, Clone)]
pub struct ScanReport {
    pub max_proven: u32,
    pub items: Vec<ScanItemReport>,
}

pub fn scan_report(ring: &Ring, outcome: &ScanOutcome) -> ScanReport {
    ScanReport {
        max_proven: outcome.max_proven,
        items: outcome
            .items
            .iter()
            .map(|i| ScanItemReport {
                source: i.source.clone(),
                target: ring.from_integral(&i.target).to_string(),
                kind: i.kind,
                value: i.value,
            })
            .collect(),
    }
}

/// Convenience used by CLI round-trip tests.
pub fn spec_of(ring: &Ring) -> &FieldSpec {
    ring.spec()
}
