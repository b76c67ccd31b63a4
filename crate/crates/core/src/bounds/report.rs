//! Bound reports combining the LP and independent-sequence certificates.

use num_bigint::BigInt;
use num_traits::{Pow, Signed, ToPrimitive};
use serde::{Serialize, Serializer};

use super::certificate::{certificate_bound, Certificate};
use super::certify::{solve_exact, verify_dual_certificate, ExactSolution, SolveMethod};
use super::lpfile::{ExternalSolution, SOLUTION_TOLERANCE};
use super::model::{entropy_lp, LpModel, LP_PARTICIPANT_CAP};
use super::stored::{stored_reduced_solution, SolutionFile};
use super::symmetry::{symmetry_reduce, Reduction};
use crate::complexity::{sigma_upper, SIGMA_EXACT_CAP};
use crate::structures::{independent_sequence_structure, theorem7_structure, universal_normalized, AccessStructure};
use crate::{fraction_string, to_f64, Error, Rational, Result, SCHEMA_VERSION};

fn opt_fraction<S: Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&fraction_string(r)),
        None => s.serialize_none(),
    }
}

/// The LP optimum of one structure and how it was obtained.
#[derive(Debug, Clone, Serialize)]
pub struct LpBound {
    #[serde(serialize_with = "opt_fraction")]
    pub exact: Option<Rational>,
    /// Advisory decimal, or the float value when no exact optimum is available.
    pub value: f64,
    pub tolerance: f64,
    pub method: SolveMethod,
    pub reduced: bool,
    pub variables: usize,
    pub rows: usize,
    /// Number of rows of the full model used by the checked dual certificate.
    pub certificate_rows: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub schema_version: u32,
    pub structure: String,
    pub participants: usize,
    pub lp_bound: Option<LpBound>,
    #[serde(serialize_with = "opt_fraction")]
    pub certificate_bound: Option<Rational>,
    /// Best proven lower bound.
    #[serde(serialize_with = "opt_fraction")]
    pub lower_bound: Option<Rational>,
    /// Complexity of the recursive construction, when known.
    #[serde(serialize_with = "opt_fraction")]
    pub upper_bound: Option<Rational>,
    /// Whether `lower_bound ≥ n / (1 + log2 n)` (universal structures only).
    pub log_bound_holds: Option<bool>,
    pub notes: Vec<String>,
}

impl BoundReport {
    fn empty(structure: &str, participants: usize) -> Self {
        BoundReport {
            schema_version: SCHEMA_VERSION,
            structure: structure.to_string(),
            participants,
            lp_bound: None,
            certificate_bound: None,
            lower_bound: None,
            upper_bound: None,
            log_bound_holds: None,
            notes: Vec::new(),
        }
    }

    /// The entropy LP optimum of `structure`, optionally solved on the symmetry-reduced model.
    pub fn for_lp(structure: &AccessStructure, name: &str, reduce: bool) -> Result<Self> {
        let mut report = Self::empty(name, structure.m());
        let (_, lp) = lp_bound(structure, reduce)?;
        report.lower_bound = lp.exact.clone();
        report.lp_bound = Some(lp);
        Ok(report)
    }

    /// Report carrying no bound, only an explanation.
    pub fn rejected(name: &str, participants: usize, note: String) -> Self {
        let mut report = Self::empty(name, participants);
        report.notes.push(note);
        report
    }

    /// Report for an LP result computed elsewhere (for example [`universal_lp`]).
    pub fn with_lp(name: &str, participants: usize, lp: LpBound) -> Self {
        let mut report = Self::empty(name, participants);
        report.lower_bound = lp.exact.clone();
        report.lp_bound = Some(lp);
        report
    }

    /// Report for a point from an outside solver. No exact bound is claimed;
    /// the float bound is the objective less the tolerance.
    pub fn with_external(name: &str, participants: usize, model: &LpModel, solution: &ExternalSolution) -> Self {
        let mut report = Self::empty(name, participants);
        report.lp_bound = Some(LpBound {
            exact: None,
            value: solution.conservative_bound(),
            tolerance: SOLUTION_TOLERANCE,
            method: SolveMethod::External,
            reduced: false,
            variables: model.num_vars(),
            rows: model.num_rows(),
            certificate_rows: 0,
        });
        report.notes.push(format!(
            "outside point satisfies every row within {SOLUTION_TOLERANCE:e} (largest violation {:e}); \
             its objective bounds the optimum only if the outside solver proved optimality",
            solution.max_violation
        ));
        report
    }

    /// The bound `|b| / |A0|` proven by an independent-sequence certificate.
    pub fn for_certificate(structure: &AccessStructure, cert: &Certificate, name: &str) -> Result<Self> {
        let mut report = Self::empty(name, structure.m());
        let bound = certificate_bound(structure, cert)?;
        report.certificate_bound = Some(bound.clone());
        report.lower_bound = Some(bound);
        Ok(report)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Solves the entropy LP of `structure` exactly. With `reduce`, the reduced
/// model is solved and its certificate is lifted and re-checked on the full model.
pub fn lp_bound(structure: &AccessStructure, reduce: bool) -> Result<(ExactSolution, LpBound)> {
    let model = entropy_lp(structure)?;
    if reduce {
        let reduction = symmetry_reduce(&model, structure)?;
        let solution = solve_exact(&reduction.model)?;
        let lp = lifted_bound(&model, &reduction, &solution)?;
        Ok((solution, lp))
    } else {
        let solution = solve_exact(&model)?;
        let certificate_rows = solution.dual.multipliers.len();
        let lp = lp_summary(&solution, false, model.num_vars(), model.num_rows(), certificate_rows);
        Ok((solution, lp))
    }
}

fn lp_summary(solution: &ExactSolution, reduced: bool, variables: usize, rows: usize, certificate_rows: usize) -> LpBound {
    LpBound {
        exact: Some(solution.value.clone()),
        value: to_f64(&solution.value),
        tolerance: 0.0,
        method: solution.method,
        reduced,
        variables,
        rows,
        certificate_rows,
    }
}

/// Checks a reduced-model solution's certificate on the full model.
fn lifted_bound(model: &LpModel, reduction: &Reduction, solution: &ExactSolution) -> Result<LpBound> {
    let lifted = reduction.lift_dual(model, &solution.dual)?;
    let proven = verify_dual_certificate(model, &lifted)?;
    if proven != solution.value {
        return Err(Error::Certification(format!(
            "lifted certificate proves {proven}, reduced optimum is {}",
            solution.value
        )));
    }
    Ok(lp_summary(
        solution,
        true,
        reduction.model.num_vars(),
        reduction.model.num_rows(),
        lifted.multipliers.len(),
    ))
}

/// Exact LP optimum of `U*_n` on the reduced model. With `use_stored`, a
/// shipped solution is tried first; it goes through the same checks as a fresh one.
pub fn universal_lp(n: usize, use_stored: bool) -> Result<(ExactSolution, LpBound)> {
    let structure = universal_normalized(n)?;
    if use_stored {
        if let Some(text) = stored_reduced_solution(n) {
            let model = entropy_lp(&structure)?;
            let reduction = symmetry_reduce(&model, &structure)?;
            if let Ok(solution) = SolutionFile::load(text, &reduction.model) {
                let lp = lifted_bound(&model, &reduction, &solution)?;
                return Ok((solution, lp));
            }
        }
    }
    lp_bound(&structure, true)
}

/// Exact test of `bound ≥ n / (1 + log2 n)`.
///
/// With `bound = p/q` this is `n^p ≥ 2^(nq - p)`, compared in big integers.
pub fn log_bound_holds(n: usize, bound: &Rational) -> bool {
    if !bound.is_positive() {
        return false;
    }
    let (p, q) = (bound.numer(), bound.denom());
    let exponent = BigInt::from(n) * q - p;
    if !exponent.is_positive() {
        return true;
    }
    let (Some(p), Some(e)) = (p.to_u32(), exponent.to_u32()) else {
        // p / q ≥ n/(1 + log2 n) with p beyond u32 only happens for huge n
        return to_f64(bound) >= n as f64 / (1.0 + (n as f64).log2());
    };
    Pow::pow(BigInt::from(n), p) >= Pow::pow(BigInt::from(2u8), e)
}

/// The best lower bound on the complexity of the universal structure on `n` sets.
///
/// Combines an independent-sequence certificate on an `n`-set structure (valid
/// for `U_n` since it has the largest complexity among `n`-set structures) with
/// the exact LP optimum of `U*_n` when the LP fits.
///
/// Uses the stored LP solution when one ships; see [`universal_lower_bound_with`].
pub fn universal_lower_bound(n: usize) -> Result<BoundReport> {
    universal_lower_bound_with(n, true)
}

/// [`universal_lower_bound`], optionally forcing a fresh LP solve.
pub fn universal_lower_bound_with(n: usize, use_stored: bool) -> Result<BoundReport> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("universal structures need n >= 2, got {n}")));
    }
    let mut report = BoundReport::empty(&format!("U*_{n}"), (1usize << n.min(63)) - 2);
    let (literal, literal_cert) = theorem7_structure(n)?;
    let cert_bound = match certificate_bound(&literal, &literal_cert) {
        Ok(b) => {
            report.notes.push(format!("classical independent-sequence certificate gives {}", fraction_string(&b)));
            b
        }
        Err(e) => {
            report.notes.push(format!("classical independent-sequence certificate rejected: {e}"));
            let (s, cert) = independent_sequence_structure(n)?;
            let b = certificate_bound(&s, &cert)?;
            report.notes.push(format!(
                "certificate with qualified base of size {} gives {}",
                cert.a0.count_ones(),
                fraction_string(&b)
            ));
            b
        }
    };
    report.certificate_bound = Some(cert_bound.clone());
    let mut best = cert_bound;
    let m = (1usize << n.min(63)) - 2;
    if m <= LP_PARTICIPANT_CAP {
        let (_, lp) = universal_lp(n, use_stored)?;
        if let Some(v) = &lp.exact {
            if *v > best {
                best = v.clone();
            }
            report.notes.push(format!("entropy LP optimum {}", fraction_string(v)));
        }
        report.lp_bound = Some(lp);
    } else {
        report.notes.push(format!("entropy LP skipped: {m} participants exceed {LP_PARTICIPANT_CAP}"));
    }
    if n <= SIGMA_EXACT_CAP {
        let (upper, _) = sigma_upper(n)?;
        if upper == best {
            report.notes.push("lower and upper bounds coincide".into());
        } else {
            report.notes.push(format!(
                "complexity lies in [{}, {}]",
                fraction_string(&best),
                fraction_string(&upper)
            ));
        }
        report.upper_bound = Some(upper);
    }
    report.log_bound_holds = Some(log_bound_holds(n, &best));
    report.lower_bound = Some(best);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    #[test]
    fn log_bound_examples() {
        // 2/(1+1) = 1
        assert!(log_bound_holds(2, &r(1, 1)));
        assert!(!log_bound_holds(2, &r(99, 100)));
        // 8/(1+3) = 2
        assert!(log_bound_holds(8, &r(2, 1)));
        assert!(!log_bound_holds(8, &r(1999, 1000)));
        // 64/7 is exactly the bound for n = 64
        assert!(log_bound_holds(64, &r(64, 7)));
        assert!(!log_bound_holds(64, &r(9, 1)));
        assert!(!log_bound_holds(5, &Rational::zero()));
    }
}
