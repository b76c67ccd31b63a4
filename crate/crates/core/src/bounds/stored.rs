//! Saving exact LP solutions and reloading them with full re-checking.
//!
//! The reduced `U*_4` model takes minutes to solve, so a solution computed by
//! [`super::solve_exact`] ships with the crate. Loading it repeats every exact
//! check, so a stale or corrupted file is rejected rather than trusted.

use serde::{Deserialize, Serialize};

use super::certify::{DualCertificate, ExactSolution, SolveMethod};
use super::model::LpModel;
use crate::{fraction_string, parse_fraction, Error, Result, SCHEMA_VERSION};

/// JSON form of an [`ExactSolution`]: fractions as `p/q` strings, multipliers as `[row, value]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionFile {
    pub schema_version: u32,
    pub variables: usize,
    pub rows: usize,
    pub value: String,
    pub multipliers: Vec<(usize, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primal: Option<Vec<String>>,
}

impl SolutionFile {
    pub fn new(model: &LpModel, solution: &ExactSolution) -> Self {
        SolutionFile {
            schema_version: SCHEMA_VERSION,
            variables: model.num_vars(),
            rows: model.num_rows(),
            value: fraction_string(&solution.value),
            multipliers: solution.dual.multipliers.iter().map(|(r, y)| (*r, fraction_string(y))).collect(),
            primal: solution.primal.as_ref().map(|x| x.iter().map(fraction_string).collect()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("solution serializes")
    }

    /// Parses and checks the solution against `model`.
    pub fn load(text: &str, model: &LpModel) -> Result<ExactSolution> {
        let file: SolutionFile = serde_json::from_str(text)?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported schema version {}", file.schema_version)));
        }
        if file.variables != model.num_vars() || file.rows != model.num_rows() {
            return Err(Error::DimensionMismatch(format!(
                "solution is for {}x{}, model is {}x{}",
                file.variables,
                file.rows,
                model.num_vars(),
                model.num_rows()
            )));
        }
        let value = parse_fraction(&file.value)?;
        let multipliers = file
            .multipliers
            .iter()
            .map(|(r, y)| Ok((*r, parse_fraction(y)?)))
            .collect::<Result<Vec<_>>>()?;
        let primal = file
            .primal
            .map(|x| x.iter().map(|v| parse_fraction(v)).collect::<Result<Vec<_>>>())
            .transpose()?;
        let dual = DualCertificate { multipliers, bound: value.clone() };
        ExactSolution::checked(model, value, primal, dual, SolveMethod::Stored)
    }
}

/// Stored solution text for the symmetry-reduced LP of `U*_n`, when one ships.
pub fn stored_reduced_solution(n: usize) -> Option<&'static str> {
    match n {
        4 => Some(include_str!("../../data/u4_reduced_lp.json")),
        _ => None,
    }
}
