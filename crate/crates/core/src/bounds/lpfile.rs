//! CPLEX LP text export and import, plus checking of externally computed points.
//!
//! Rows are named `<family>_<index>` so a parsed file rebuilds the same model,
//! families included.

use std::collections::HashMap;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use super::model::{Family, LpModel, Sense};
use crate::{Error, Result};

/// Absolute tolerance for rows checked against a floating-point solution.
pub const SOLUTION_TOLERANCE: f64 = 1e-6;

const FAMILIES: [Family; 6] = [
    Family::Monotonicity,
    Family::Submodularity,
    Family::Normalization,
    Family::Qualified,
    Family::Independent,
    Family::Objective,
];

/// Writes `model` in CPLEX LP format. All variables are free.
pub fn write_lp<W: Write>(model: &LpModel, w: W) -> io::Result<()> {
    let mut w = BufWriter::new(w);
    let names = model.names();
    writeln!(w, "\\ entropy LP: {} variables, {} rows", model.num_vars(), model.num_rows())?;
    writeln!(w, "Minimize\n obj: {}\nSubject To", names[model.objective()])?;
    for r in 0..model.num_rows() {
        write!(w, " {}_{}:", model.family(r), r)?;
        for (c, a) in model.row(r) {
            let sign = if a < 0 { '-' } else { '+' };
            match a.abs() {
                1 => write!(w, " {sign} {}", names[c])?,
                k => write!(w, " {sign} {k} {}", names[c])?,
            }
        }
        let op = match model.sense(r) {
            Sense::Ge => ">=",
            Sense::Eq => "=",
        };
        writeln!(w, " {op} {}", model.rhs(r))?;
    }
    writeln!(w, "Bounds")?;
    for name in names {
        writeln!(w, " {name} free")?;
    }
    writeln!(w, "End")?;
    w.flush()
}

/// Writes the model to `path`. A model without rows is rejected.
pub fn export_lp(model: &LpModel, path: &Path) -> Result<()> {
    if model.num_rows() == 0 {
        return Err(Error::EmptyInput);
    }
    let file = fs::File::create(path)?;
    write_lp(model, file)?;
    Ok(())
}

#[derive(PartialEq)]
enum Section {
    Start,
    Objective,
    Constraints,
    Bounds,
    End,
}

fn parse_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

/// Parses a linear expression such as `+ f3 - 2 f5` into (name, coefficient) pairs.
fn parse_terms(tokens: &[&str], line: usize) -> Result<Vec<(String, i64)>> {
    let mut out = Vec::new();
    let mut sign = 1i64;
    let mut coef: Option<i64> = None;
    for &tok in tokens {
        match tok {
            "+" => sign = 1,
            "-" => sign = -1,
            _ => {
                if let Ok(k) = tok.parse::<i64>() {
                    coef = Some(k);
                } else {
                    out.push((tok.to_string(), sign * coef.unwrap_or(1)));
                    sign = 1;
                    coef = None;
                }
            }
        }
    }
    if coef.is_some() {
        return Err(parse_err(line, "dangling coefficient"));
    }
    Ok(out)
}

/// Parses a file written by [`write_lp`] back into a model.
///
/// Accepts one constraint per line. Variables are numbered in the order they
/// appear in the `Bounds` section, which `write_lp` emits in column order.
pub fn parse_lp(text: &str) -> Result<LpModel> {
    let mut section = Section::Start;
    let mut objective: Option<String> = None;
    let mut rows: Vec<(Family, Vec<(String, i64)>, Sense, i64, usize)> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('\\').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match line.to_ascii_lowercase().as_str() {
            "minimize" | "minimise" | "min" => {
                section = Section::Objective;
                continue;
            }
            "subject to" | "such that" | "st" | "s.t." => {
                section = Section::Constraints;
                continue;
            }
            "bounds" => {
                section = Section::Bounds;
                continue;
            }
            "end" => {
                section = Section::End;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Start | Section::End => return Err(parse_err(line_no, "text outside a section")),
            Section::Objective => {
                let body = line.split_once(':').map_or(line, |(_, b)| b);
                let terms = parse_terms(&body.split_whitespace().collect::<Vec<_>>(), line_no)?;
                match terms.as_slice() {
                    [(name, 1)] if objective.is_none() => objective = Some(name.clone()),
                    _ => return Err(parse_err(line_no, "objective must be a single variable")),
                }
            }
            Section::Constraints => {
                let (label, body) = line.split_once(':').ok_or_else(|| parse_err(line_no, "unnamed row"))?;
                let family_name = label.trim().rsplit_once('_').map_or("", |(f, _)| f);
                let family = FAMILIES
                    .into_iter()
                    .find(|f| f.to_string() == family_name)
                    .ok_or_else(|| parse_err(line_no, format!("unknown row family in '{label}'")))?;
                let tokens: Vec<&str> = body.split_whitespace().collect();
                let op = tokens
                    .iter()
                    .position(|t| matches!(*t, ">=" | "=" | "=>"))
                    .ok_or_else(|| parse_err(line_no, "missing '>=' or '='"))?;
                let sense = if tokens[op] == "=" { Sense::Eq } else { Sense::Ge };
                let rhs_tokens = &tokens[op + 1..];
                let rhs: i64 = match rhs_tokens {
                    [v] => v.parse().map_err(|_| parse_err(line_no, "non-integer right-hand side"))?,
                    ["-", v] => -v.parse::<i64>().map_err(|_| parse_err(line_no, "non-integer right-hand side"))?,
                    _ => return Err(parse_err(line_no, "malformed right-hand side")),
                };
                rows.push((family, parse_terms(&tokens[..op], line_no)?, sense, rhs, line_no));
            }
            Section::Bounds => match line.split_whitespace().collect::<Vec<_>>().as_slice() {
                [name, free] if free.eq_ignore_ascii_case("free") => names.push(name.to_string()),
                _ => return Err(parse_err(line_no, "only 'free' bounds are supported")),
            },
        }
    }
    if section != Section::End {
        return Err(Error::Parse("missing End".into()));
    }
    let objective = objective.ok_or_else(|| Error::Parse("missing objective".into()))?;
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let t = *index
        .get(objective.as_str())
        .ok_or_else(|| Error::Parse(format!("objective variable {objective} has no bound")))?;
    let mut model = LpModel::new(names.clone(), t);
    for (family, terms, sense, rhs, line_no) in rows {
        let mut cols = Vec::with_capacity(terms.len());
        for (name, a) in terms {
            let c = *index.get(name.as_str()).ok_or_else(|| parse_err(line_no, format!("unknown variable {name}")))?;
            let a = i32::try_from(a).map_err(|_| parse_err(line_no, "coefficient out of range"))?;
            cols.push((c as u32, a));
        }
        model.push_row(&cols, sense, rhs, family);
    }
    Ok(model)
}

/// A point produced by an outside solver, checked against the model.
#[derive(Debug, Clone)]
pub struct ExternalSolution {
    pub values: Vec<f64>,
    pub objective: f64,
    /// Largest row violation, never above [`SOLUTION_TOLERANCE`] once loaded.
    pub max_violation: f64,
}

impl ExternalSolution {
    /// The objective less the tolerance. This is what may be reported as a
    /// lower bound when the outside solver states the point is optimal.
    pub fn conservative_bound(&self) -> f64 {
        self.objective - SOLUTION_TOLERANCE
    }
}

/// Reads `name value` lines (blank lines and lines starting with `#` or `\`
/// are skipped; unlisted variables are zero) and checks every row to within
/// [`SOLUTION_TOLERANCE`].
pub fn load_solution(model: &LpModel, text: &str) -> Result<ExternalSolution> {
    let index: HashMap<&str, usize> = model.names().iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let mut values = vec![0.0f64; model.num_vars()];
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('\\') {
            continue;
        }
        let mut parts = line.split(|c: char| c.is_whitespace() || c == '=').filter(|s| !s.is_empty());
        let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(parse_err(i + 1, "expected 'name value'"));
        };
        let c = *index.get(name).ok_or_else(|| parse_err(i + 1, format!("unknown variable {name}")))?;
        values[c] = value.parse().map_err(|_| parse_err(i + 1, format!("bad number '{value}'")))?;
        if !values[c].is_finite() {
            return Err(parse_err(i + 1, "value is not finite"));
        }
    }
    let mut max_violation: f64 = 0.0;
    for r in 0..model.num_rows() {
        let lhs: f64 = model.row(r).map(|(c, a)| a as f64 * values[c]).sum();
        let gap = lhs - model.rhs(r) as f64;
        let violation = match model.sense(r) {
            Sense::Ge => (-gap).max(0.0),
            Sense::Eq => gap.abs(),
        };
        if violation > SOLUTION_TOLERANCE {
            return Err(Error::Certification(format!(
                "row {r} ({}) violated by {violation:e}",
                model.family(r)
            )));
        }
        max_violation = max_violation.max(violation);
    }
    let objective = values[model.objective()];
    Ok(ExternalSolution { values, objective, max_violation })
}

/// Formats a point in the format [`load_solution`] reads.
pub fn format_solution(model: &LpModel, values: &[f64]) -> String {
    model.names().iter().zip(values).map(|(n, v)| format!("{n} {v:.12}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::entropy_lp;
    use crate::structures::universal_normalized;

    #[test]
    fn round_trip_u2() {
        let model = entropy_lp(&universal_normalized(2).unwrap()).unwrap();
        let mut buf = Vec::new();
        write_lp(&model, &mut buf).unwrap();
        let parsed = parse_lp(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(parsed, model);
    }

    #[test]
    fn rejects_bad_points() {
        let model = entropy_lp(&universal_normalized(2).unwrap()).unwrap();
        assert!(load_solution(&model, "t 5\n").is_err());
        assert!(load_solution(&model, "nosuch 1\n").is_err());
    }
}
