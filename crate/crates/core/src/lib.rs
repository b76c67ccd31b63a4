//! Perfect secret sharing for universal access structures.
//!
//! A universal access structure on `n` minimal qualified sets has a participant in
//! every Boolean cell of those sets. This crate builds the recursive GF(2)-linear
//! scheme for the normalized universal structure `U*_n`, checks perfectness exactly
//! (rank arguments, with a brute-force oracle for small seeds), computes the exact
//! share-size profile `f_n(i)` in rationals, and certifies lower bounds with the
//! entropy-method linear program and independent-sequence certificates.
//!
//! The modules follow the pipeline:
//!
//! - [`structures`]: access structures, cell censuses, `U*_n`, maximal independent sets.
//! - [`gf2`]: bit matrices and echelon bases over the two-element field.
//! - [`schemes`]: linear schemes, threshold blocks, dealing, verification, cell transfer.
//! - [`builder`]: the recursive construction and its size trace.
//! - [`complexity`]: harmonic numbers, `f_n(i)`, maxima and the `n/e` estimates.
//! - [`bounds`]: entropy LP, symmetry reduction, exact solving, certificates.

pub mod bounds;
pub mod builder;
pub mod cli;
pub mod complexity;
mod error;
pub mod gf2;
pub mod schemes;
pub mod structures;

pub use error::{CertCondition, Error, Result};

/// Exact rational number used for every share-size and bound value.
pub type Rational = num_rational::BigRational;

/// Version tag written into every JSON document this crate emits.
pub const SCHEMA_VERSION: u32 = 1;

/// Formats a rational as `p/q` (or `p` when the denominator is one).
pub fn fraction_string(r: &Rational) -> String {
    if r.denom() == &num_bigint::BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q` or `p` into a rational.
pub fn parse_fraction(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a fraction: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: num_bigint::BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: num_bigint::BigInt = q.trim().parse().map_err(|_| bad())?;
            if q == num_bigint::BigInt::from(0) {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Lossy conversion used for advisory decimal columns.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
