//! Crate-wide error type.

use std::fmt;

use num_bigint::BigInt;

use crate::field::BasisType;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Error {
    OutOfRange(String),
    NotSquareFree(i64),
    EqualParameters(i64),
    FieldMismatch,
    DivisionByZero,
    NotAnInteger,
    SelfCheckFailed(String),
    NotTotallyNonnegative,
    WrongBasisType {
        expected: &'static str,
        got: BasisType,
    },
    InadmissibleParameter(String),
    FormulaMismatch {
        label: String,
        direct: BigInt,
        formula: BigInt,
    },
    IdentityFailed {
        name: String,
        t: i64,
    },
    /// A representation with fewer squares than requested exists; the
    /// witness is the list of integral coordinates of the squared elements.
    Refuted {
        witness: Vec<[BigInt; 4]>,
    },
    BudgetExceeded {
        nodes: u64,
        proven_bound: u32,
    },
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OutOfRange(msg) => write!(f, "out of range: {msg}"),
            Error::NotSquareFree(n) => write!(f, "{n} is not square-free"),
            Error::EqualParameters(n) => write!(f, "field parameters must differ, both are {n}"),
            Error::FieldMismatch => write!(f, "elements belong to different fields"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::NotAnInteger => write!(f, "element is not in the span of the integral basis"),
            Error::SelfCheckFailed(msg) => write!(f, "construction self-check failed: {msg}"),
            Error::NotTotallyNonnegative => {
                write!(f, "element is neither zero nor totally positive")
            }
            Error::WrongBasisType { expected, got } => {
                write!(f, "witness requires {expected}, field has basis type {got}")
            }
            Error::InadmissibleParameter(msg) => write!(f, "inadmissible parameter: {msg}"),
            Error::FormulaMismatch {
                label,
                direct,
                formula,
            } => write!(
                f,
                "norm formula mismatch for {label}: direct {direct}, formula {formula}"
            ),
            Error::IdentityFailed { name, t } => {
                write!(f, "association identity {name} failed at t = {t}")
            }
            Error::Refuted { witness } => {
                write!(
                    f,
                    "refuted by a representation with {} squares",
                    witness.len()
                )
            }
            Error::BudgetExceeded {
                nodes,
                proven_bound,
            } => write!(
                f,
                "search budget exceeded after {nodes} nodes (proven bound so far: {proven_bound})"
            ),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
