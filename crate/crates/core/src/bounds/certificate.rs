use serde::{Deserialize, Serialize};

use crate::structures::{is_subset, members, subset_of, AccessStructure, Subset};
use crate::{CertCondition, Error, Rational, Result};

/// An independent sequence: base `A_0`, outside participants `b_1..b_n`, and
/// subsets `C_0..C_{n-1}` of `A_0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub a0: Subset,
    pub b: Vec<usize>,
    pub c: Vec<Subset>,
}

impl Certificate {
    pub fn new(a0: Subset, b: Vec<usize>, c: Vec<Subset>) -> Self {
        Certificate { a0, b, c }
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CertificateFile::from(self)).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: CertificateFile = serde_json::from_str(text)?;
        f.try_into()
    }
}

/// JSON form: `{"A0": [...], "b": [...], "C": [[...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateFile {
    #[serde(rename = "A0")]
    pub a0: Vec<usize>,
    pub b: Vec<usize>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<usize>>,
}

impl From<&Certificate> for CertificateFile {
    fn from(c: &Certificate) -> Self {
        CertificateFile {
            a0: members(c.a0).collect(),
            b: c.b.clone(),
            c: c.c.iter().map(|&s| members(s).collect()).collect(),
        }
    }
}

impl TryFrom<CertificateFile> for Certificate {
    type Error = Error;

    fn try_from(f: CertificateFile) -> Result<Self> {
        let limit = crate::structures::MAX_PARTICIPANTS;
        if f.a0.iter().chain(&f.b).chain(f.c.iter().flatten()).any(|&p| p >= limit) {
            return Err(Error::Parse(format!("certificate mentions a participant >= {limit}")));
        }
        Ok(Certificate {
            a0: subset_of(f.a0.iter().copied()),
            b: f.b,
            c: f.c.iter().map(|v| subset_of(v.iter().copied())).collect(),
        })
    }
}

fn invalid(condition: CertCondition, index: usize) -> Error {
    Error::InvalidCertificate { condition, index }
}

/// Validates an independent sequence against `structure` and returns its length.
///
/// Conditions, checked in this order: shape (matching lengths, participants in
/// range), `A_0` qualified, then for each `i` in turn: `b_{i+1} ∉ A_0`, `b_{i+1}`
/// distinct from earlier `b`s, `C_i ⊆ A_0`, `B_i C_i` independent, and
/// `B_{i+1} C_i` qualified.
pub fn check_certificate(structure: &AccessStructure, cert: &Certificate) -> Result<usize> {
    let all = structure.participants();
    if cert.b.len() != cert.c.len() {
        return Err(invalid(CertCondition::Shape, cert.b.len().min(cert.c.len())));
    }
    if !is_subset(cert.a0, all) {
        return Err(invalid(CertCondition::Shape, 0));
    }
    if let Some(i) = cert.b.iter().position(|&p| p >= structure.m()) {
        return Err(invalid(CertCondition::Shape, i));
    }
    if !structure.is_qualified(cert.a0) {
        return Err(invalid(CertCondition::BaseQualified, 0));
    }
    let mut bset: Subset = 0;
    for (i, (&b, &c)) in cert.b.iter().zip(&cert.c).enumerate() {
        let bit: Subset = 1 << b;
        if cert.a0 & bit != 0 {
            return Err(invalid(CertCondition::OutsideBase, i));
        }
        if bset & bit != 0 {
            return Err(invalid(CertCondition::Distinct, i));
        }
        if !is_subset(c, cert.a0) {
            return Err(invalid(CertCondition::Containment, i));
        }
        if structure.is_qualified(bset | c) {
            return Err(invalid(CertCondition::Independence, i));
        }
        bset |= bit;
        if !structure.is_qualified(bset | c) {
            return Err(invalid(CertCondition::Qualification, i));
        }
    }
    Ok(cert.b.len())
}

/// `n / |A_0|` for a certificate that passes [`check_certificate`].
pub fn certificate_bound(structure: &AccessStructure, cert: &Certificate) -> Result<Rational> {
    let n = check_certificate(structure, cert)?;
    Ok(Rational::new(n.into(), (cert.a0.count_ones() as usize).into()))
}
