use std::fmt;

/// Which condition of an independent-sequence certificate was violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertCondition {
    /// The base set is not qualified.
    BaseQualified,
    /// A sequence participant lies inside the base set.
    OutsideBase,
    /// A sequence participant is repeated.
    Distinct,
    /// A C-set is not contained in the base set.
    Containment,
    /// `B_i C_i` is qualified.
    Independence,
    /// `B_{i+1} C_i` is not qualified.
    Qualification,
    /// The C-sequence length differs from the b-sequence length, or a participant is out of range.
    Shape,
}

impl fmt::Display for CertCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CertCondition::BaseQualified => "base-qualified",
            CertCondition::OutsideBase => "outside-base",
            CertCondition::Distinct => "distinct",
            CertCondition::Containment => "containment",
            CertCondition::Independence => "independence",
            CertCondition::Qualification => "qualification",
            CertCondition::Shape => "shape",
        };
        f.write_str(s)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty list of sets")]
    EmptyInput,
    #[error("set at position {0} is empty")]
    EmptyMember(usize),
    #[error("input is not an antichain (set at position {0} is redundant)")]
    NotAntichain(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cap exceeded: {what} = {value}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subset cannot recover the secret")]
    NotQualified,
    #[error("shares are not consistent with any seed")]
    InconsistentShares,
    #[error("invalid certificate: {condition} violated at index {index}")]
    InvalidCertificate { condition: CertCondition, index: usize },
    #[error("scheme is not perfect: {0}")]
    NotPerfect(String),
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("could not certify LP solution: {0}")]
    Certification(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn cap(what: &'static str, value: usize, cap: usize) -> Self {
        Error::CapExceeded { what, value, cap }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
