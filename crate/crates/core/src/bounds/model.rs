//! The entropy-method linear program.
//!
//! Variables are `f(A)` for every subset `A` of the ground set `P ∪ {s}` (the
//! secret `s` is the element after the participants) plus the objective `t`.
//! Minimizing `t` subject to `t ≥ f({p})` and the polymatroid and secret rules
//! bounds the complexity of every perfect scheme from below.

use std::fmt;

use serde::Serialize;

use crate::structures::{AccessStructure, Subset};
use crate::{Error, Result};

/// Largest participant count for which the full model is generated.
pub const LP_PARTICIPANT_CAP: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sense {
    Ge,
    Eq,
}

/// Which rule produced a constraint row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `f(G) ≥ f(G ∖ {x})` for the whole ground set `G`.
    Monotonicity,
    /// `f(Ax) + f(Ay) ≥ f(Axy) + f(A)`.
    Submodularity,
    /// `f(∅) = 0`, `f(s) = 1`.
    Normalization,
    /// `f(As) = f(A)` for qualified `A`.
    Qualified,
    /// `f(As) = f(A) + 1` for independent nonempty `A`.
    Independent,
    /// `t ≥ f({p})`.
    Objective,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Monotonicity => "monotonicity",
            Family::Submodularity => "submodularity",
            Family::Normalization => "normalization",
            Family::Qualified => "qualified",
            Family::Independent => "independent",
            Family::Objective => "objective",
        };
        f.write_str(s)
    }
}

/// `min t` over sparse integer rows `a·x (≥|=) b`, all variables free.
#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    names: Vec<String>,
    objective: usize,
    row_start: Vec<usize>,
    cols: Vec<u32>,
    coefs: Vec<i32>,
    rhs: Vec<i64>,
    senses: Vec<Sense>,
    families: Vec<Family>,
}

impl LpModel {
    pub fn new(names: Vec<String>, objective: usize) -> Self {
        assert!(objective < names.len());
        LpModel {
            names,
            objective,
            row_start: vec![0],
            cols: Vec::new(),
            coefs: Vec::new(),
            rhs: Vec::new(),
            senses: Vec::new(),
            families: Vec::new(),
        }
    }

    /// Appends a row; duplicate columns are merged and zero coefficients dropped.
    pub fn push_row(&mut self, terms: &[(u32, i32)], sense: Sense, rhs: i64, family: Family) {
        let mut t: Vec<(u32, i32)> = terms.to_vec();
        t.sort_unstable_by_key(|&(c, _)| c);
        let mut merged: Vec<(u32, i32)> = Vec::with_capacity(t.len());
        for (c, a) in t {
            match merged.last_mut() {
                Some((lc, la)) if *lc == c => *la += a,
                _ => merged.push((c, a)),
            }
        }
        for (c, a) in merged.into_iter().filter(|&(_, a)| a != 0) {
            assert!((c as usize) < self.names.len(), "column {c} out of range");
            self.cols.push(c);
            self.coefs.push(a);
        }
        self.row_start.push(self.cols.len());
        self.rhs.push(rhs);
        self.senses.push(sense);
        self.families.push(family);
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rhs.len()
    }

    pub fn num_nonzeros(&self) -> usize {
        self.cols.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn objective(&self) -> usize {
        self.objective
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        let span = self.row_start[r]..self.row_start[r + 1];
        self.cols[span.clone()].iter().zip(&self.coefs[span]).map(|(&c, &a)| (c as usize, a as i64))
    }

    pub fn row_terms(&self, r: usize) -> Vec<(u32, i32)> {
        let span = self.row_start[r]..self.row_start[r + 1];
        self.cols[span.clone()].iter().copied().zip(self.coefs[span].iter().copied()).collect()
    }

    pub fn rhs(&self, r: usize) -> i64 {
        self.rhs[r]
    }

    pub(crate) fn set_rhs(&mut self, r: usize, rhs: i64) {
        self.rhs[r] = rhs;
    }

    pub fn sense(&self, r: usize) -> Sense {
        self.senses[r]
    }

    pub fn family(&self, r: usize) -> Family {
        self.families[r]
    }

    /// Row counts per family.
    pub fn family_counts(&self) -> Vec<(Family, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for &f in &self.families {
            *counts.entry(f).or_insert(0) += 1;
        }
        counts.into_iter().collect()
    }

    /// Row activity `a·x` for an integer point.
    pub fn activity_i128(&self, r: usize, x: &[i128]) -> i128 {
        self.row(r).map(|(c, a)| a as i128 * x[c]).sum()
    }
}

/// Variable layout of the entropy LP on `m` participants.
#[derive(Debug, Clone, Copy)]
pub struct EntropyLayout {
    pub m: usize,
}

impl EntropyLayout {
    /// Ground-set bit of the secret.
    pub fn secret_bit(&self) -> u32 {
        1 << self.m
    }

    pub fn subsets(&self) -> usize {
        1 << (self.m + 1)
    }

    /// Column of the objective `t`, after all subset columns.
    pub fn t(&self) -> usize {
        self.subsets()
    }

    pub fn name(&self, mask: usize) -> String {
        format!("f{mask}")
    }
}

fn entropy_names(layout: EntropyLayout) -> Vec<String> {
    let mut names: Vec<String> = (0..layout.subsets()).map(|v| layout.name(v)).collect();
    names.push("t".into());
    names
}

fn polymatroid_rows(model: &mut LpModel, layout: EntropyLayout) {
    let g = layout.m + 1;
    let full = (1u32 << g) - 1;
    for x in 0..g {
        model.push_row(&[(full, 1), (full & !(1 << x), -1)], Sense::Ge, 0, Family::Monotonicity);
    }
    for x in 0..g {
        for y in x + 1..g {
            let (bx, by) = (1u32 << x, 1u32 << y);
            let rest = full & !bx & !by;
            // every A ⊆ G ∖ {x, y}
            let mut a = rest;
            loop {
                model.push_row(&[(a | bx, 1), (a | by, 1), (a | bx | by, -1), (a, -1)], Sense::Ge, 0, Family::Submodularity);
                if a == 0 {
                    break;
                }
                a = (a - 1) & rest;
            }
        }
    }
    model.push_row(&[(0, 1)], Sense::Eq, 0, Family::Normalization);
    model.push_row(&[(layout.secret_bit(), 1)], Sense::Eq, 1, Family::Normalization);
}

fn objective_rows(model: &mut LpModel, layout: EntropyLayout) {
    let t = layout.t() as u32;
    for p in 0..layout.m {
        model.push_row(&[(t, 1), (1 << p, -1)], Sense::Ge, 0, Family::Objective);
    }
}

fn check_lp_size(m: usize) -> Result<()> {
    if m > LP_PARTICIPANT_CAP {
        return Err(Error::cap("participants for the entropy LP", m, LP_PARTICIPANT_CAP));
    }
    Ok(())
}

/// The entropy LP of `structure`.
pub fn entropy_lp(structure: &AccessStructure) -> Result<LpModel> {
    check_lp_size(structure.m())?;
    let layout = EntropyLayout { m: structure.m() };
    let mut model = LpModel::new(entropy_names(layout), layout.t());
    polymatroid_rows(&mut model, layout);
    let table = structure.qualification_table()?;
    let s = layout.secret_bit();
    for (a, &q) in table.iter().enumerate().skip(1) {
        let a = a as u32;
        if q {
            model.push_row(&[(a | s, 1), (a, -1)], Sense::Eq, 0, Family::Qualified);
        } else {
            model.push_row(&[(a | s, 1), (a, -1)], Sense::Eq, 1, Family::Independent);
        }
    }
    objective_rows(&mut model, layout);
    Ok(model)
}

/// The model with only the polymatroid, normalization and objective rows.
pub fn polymatroid_lp(m: usize) -> Result<LpModel> {
    if m == 0 {
        return Err(Error::EmptyInput);
    }
    check_lp_size(m)?;
    let layout = EntropyLayout { m };
    let mut model = LpModel::new(entropy_names(layout), layout.t());
    polymatroid_rows(&mut model, layout);
    objective_rows(&mut model, layout);
    Ok(model)
}

/// Mask of a subset variable name `f<mask>`, if it is one.
pub fn parse_subset_name(name: &str) -> Option<Subset> {
    name.strip_prefix('f')?.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::universal_normalized;

    #[test]
    fn sizes_for_u2() {
        let m = entropy_lp(&universal_normalized(2).unwrap()).unwrap();
        assert_eq!(m.num_vars(), 9);
        // 3 monotonicity, 3 pairs × 2 subsets, 2 normalization, 3 secret rows, 2 objective
        assert_eq!(m.num_rows(), 3 + 6 + 2 + 3 + 2);
    }

    #[test]
    fn cap_is_enforced() {
        let u5 = universal_normalized(5).unwrap();
        assert!(matches!(entropy_lp(&u5), Err(Error::CapExceeded { .. })));
    }
}
