//! Exact dense simplex with Bland's rule.
//!
//! The solver works on the dual of `min t s.t. A x (≥|=) b`, namely
//! `max b·y s.t. Aᵀ y = e_t, y ≥ 0` (an equality row contributes a pair of
//! columns `y⁺ - y⁻`). The final basis yields the optimal multipliers `y`
//! directly and the primal point `x` as the simplex multipliers of the
//! equality system, read off the artificial columns.

use num_traits::{One, Signed, Zero};

use super::certify::{DualCertificate, ExactSolution, SolveMethod};
use super::model::{LpModel, Sense};
use crate::{Error, Rational, Result};

/// Largest model the dense tableau accepts (variables, rows).
pub const SIMPLEX_VAR_CAP: usize = 600;
pub const SIMPLEX_ROW_CAP: usize = 8_000;

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    /// Reduced costs of every column (structural then artificial).
    cost_row: Vec<Rational>,
    value: Rational,
    basis: Vec<usize>,
    structural: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rational::one() / &self.rows[r][c];
        let nz: Vec<usize> = (0..self.rows[r].len()).filter(|&j| !self.rows[r][j].is_zero()).collect();
        for &j in &nz {
            self.rows[r][j] *= &inv;
        }
        self.rhs[r] *= &inv;
        let prow: Vec<(usize, Rational)> = nz.iter().map(|&j| (j, self.rows[r][j].clone())).collect();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (j, v) in &prow {
                let delta = &f * v;
                self.rows[i][*j] -= delta;
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !self.cost_row[c].is_zero() {
            let f = self.cost_row[c].clone();
            for (j, v) in &prow {
                let delta = &f * v;
                self.cost_row[*j] -= delta;
            }
            self.value += &f * &prhs;
        }
        self.basis[r] = c;
    }

    /// Runs Bland's rule to optimality over the structural columns.
    fn optimize(&mut self) -> Result<()> {
        loop {
            let Some(c) = (0..self.structural).find(|&j| self.cost_row[j].is_positive()) else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                // the dual is unbounded, so the primal model is infeasible
                return Err(Error::Infeasible);
            };
            self.pivot(r, c);
        }
    }
}

/// Solves `model` exactly; the result carries both an optimal point and a
/// dual certificate, each checked before returning.
pub fn simplex_solve(model: &LpModel) -> Result<ExactSolution> {
    let nv = model.num_vars();
    if nv > SIMPLEX_VAR_CAP || model.num_rows() > SIMPLEX_ROW_CAP {
        return Err(Error::cap("model size for the dense simplex", nv.max(model.num_rows()), SIMPLEX_VAR_CAP));
    }
    // columns of the dual: (model row, sign)
    let mut columns: Vec<(usize, i64)> = Vec::new();
    for r in 0..model.num_rows() {
        columns.push((r, 1));
        if model.sense(r) == Sense::Eq {
            columns.push((r, -1));
        }
    }
    let ns = columns.len();
    let width = ns + nv;
    let mut rows = vec![vec![Rational::zero(); width]; nv];
    for (j, &(r, sign)) in columns.iter().enumerate() {
        for (v, a) in model.row(r) {
            rows[v][j] = Rational::from_integer((sign * a).into());
        }
    }
    for (v, row) in rows.iter_mut().enumerate() {
        row[ns + v] = Rational::one();
    }
    let rhs: Vec<Rational> =
        (0..nv).map(|v| if v == model.objective() { Rational::one() } else { Rational::zero() }).collect();

    // phase 1: maximize minus the sum of artificials
    let mut cost_row = vec![Rational::zero(); width];
    for row in &rows {
        for j in 0..ns {
            if !row[j].is_zero() {
                cost_row[j] += &row[j];
            }
        }
    }
    let value = -rhs.iter().fold(Rational::zero(), |a, b| a + b);
    let mut tab = Tableau { rows, rhs, cost_row, value, basis: (ns..width).collect(), structural: ns };
    tab.optimize()?;
    if !tab.value.is_zero() {
        // Aᵀ y = e_t has no nonnegative solution: the primal objective is unbounded
        return Err(Error::Unbounded);
    }
    for i in 0..nv {
        if tab.basis[i] >= ns {
            if let Some(c) = (0..ns).find(|&j| !tab.rows[i][j].is_zero()) {
                tab.pivot(i, c);
            }
        }
    }

    // phase 2: maximize b·y
    let cost: Vec<Rational> = columns
        .iter()
        .map(|&(r, sign)| Rational::from_integer((sign * model.rhs(r)).into()))
        .chain(std::iter::repeat_n(Rational::zero(), nv))
        .collect();
    let basic_cost: Vec<Rational> = tab.basis.iter().map(|&b| cost[b].clone()).collect();
    let mut cost_row = cost.clone();
    for (i, row) in tab.rows.iter().enumerate() {
        if basic_cost[i].is_zero() {
            continue;
        }
        for j in 0..width {
            if !row[j].is_zero() {
                cost_row[j] -= &basic_cost[i] * &row[j];
            }
        }
    }
    tab.value = basic_cost.iter().zip(&tab.rhs).fold(Rational::zero(), |a, (c, r)| a + c * r);
    tab.cost_row = cost_row;
    tab.optimize()?;

    let mut y = vec![Rational::zero(); model.num_rows()];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < ns {
            let (r, sign) = columns[b];
            y[r] += Rational::from_integer(sign.into()) * &tab.rhs[i];
        }
    }
    let x: Vec<Rational> = (0..nv).map(|v| -tab.cost_row[ns + v].clone()).collect();
    let dual = DualCertificate {
        multipliers: y.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect(),
        bound: tab.value.clone(),
    };
    ExactSolution::checked(model, tab.value, Some(x), dual, SolveMethod::Simplex)
}
