//! Exact optima with checkable certificates.
//!
//! Small models go through the exact simplex. Larger ones are solved in floating
//! point by an interior-point method, then made exact: the optimum is guessed as
//! a small-denominator rational `L`, a dual solution with `b·y = L` is
//! recovered on its support by exact elimination, and a primal point with
//! `t = L` is rounded and re-checked row by row. Nothing is reported unless the
//! exact checks pass.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::model::{LpModel, Sense};
use super::simplex::{simplex_solve, SIMPLEX_ROW_CAP, SIMPLEX_VAR_CAP};
use crate::{Error, Rational, Result};

/// Largest variable count the exact pipeline accepts.
pub const EXACT_VAR_CAP: usize = 5_000;

/// Nonnegative combination of rows (free sign on equality rows) whose left side
/// equals the objective, proving `objective ≥ bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualCertificate {
    pub multipliers: Vec<(usize, Rational)>,
    pub bound: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMethod {
    Simplex,
    GuidedInteriorPoint,
    /// A previously computed solution, re-checked exactly on load.
    Stored,
    /// A floating-point point from an outside solver, checked to a tolerance.
    External,
}

#[derive(Debug, Clone)]
pub struct ExactSolution {
    pub value: Rational,
    /// An optimal point, when one was recovered exactly.
    pub primal: Option<Vec<Rational>>,
    pub dual: DualCertificate,
    pub method: SolveMethod,
}

impl ExactSolution {
    /// Checks the certificate (and the point, if any) before wrapping them.
    pub(crate) fn checked(
        model: &LpModel,
        value: Rational,
        primal: Option<Vec<Rational>>,
        dual: DualCertificate,
        method: SolveMethod,
    ) -> Result<Self> {
        let proven = verify_dual_certificate(model, &dual)?;
        if proven != value {
            return Err(Error::Certification(format!("certificate proves {proven}, expected {value}")));
        }
        if let Some(x) = &primal {
            let obj = verify_primal(model, x)?;
            if obj != value {
                return Err(Error::Certification(format!("point has objective {obj}, expected {value}")));
            }
        }
        Ok(ExactSolution { value, primal, dual, method })
    }
}

/// Independent check of a dual certificate; returns the bound it proves.
///
/// Requires nonnegative multipliers on `≥` rows, `Σ y_r a_r = e_t` exactly, and
/// `Σ y_r b_r` equal to the claimed bound.
pub fn verify_dual_certificate(model: &LpModel, cert: &DualCertificate) -> Result<Rational> {
    let mut combo = vec![Rational::zero(); model.num_vars()];
    let mut bound = Rational::zero();
    for (r, y) in &cert.multipliers {
        if *r >= model.num_rows() {
            return Err(Error::Certification(format!("row {r} out of range")));
        }
        if model.sense(*r) == Sense::Ge && y.is_negative() {
            return Err(Error::Certification(format!("negative multiplier on inequality row {r}")));
        }
        for (c, a) in model.row(*r) {
            combo[c] += y * Rational::from_integer(a.into());
        }
        bound += y * Rational::from_integer(model.rhs(*r).into());
    }
    for (c, v) in combo.iter().enumerate() {
        let want = if c == model.objective() { Rational::one() } else { Rational::zero() };
        if *v != want {
            return Err(Error::Certification(format!(
                "combination has coefficient {v} on {}, expected {want}",
                model.names()[c]
            )));
        }
    }
    if bound != cert.bound {
        return Err(Error::Certification(format!("multipliers give {bound}, certificate claims {}", cert.bound)));
    }
    Ok(bound)
}

/// Exact feasibility check of a point; returns its objective value.
pub fn verify_primal(model: &LpModel, x: &[Rational]) -> Result<Rational> {
    if x.len() != model.num_vars() {
        return Err(Error::DimensionMismatch(format!("{} values for {} variables", x.len(), model.num_vars())));
    }
    let denom = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let scaled: Option<Vec<i128>> = x.iter().map(|v| (v.numer() * (&denom / v.denom())).to_i128()).collect();
    let (scaled, d) = match (scaled, denom.to_i128()) {
        (Some(s), Some(d)) if s.iter().all(|v| v.abs() < 1 << 60) && d < 1 << 60 => (s, d),
        _ => return Err(Error::Certification("point has oversized entries".into())),
    };
    for r in 0..model.num_rows() {
        let lhs = model.activity_i128(r, &scaled);
        let rhs = model.rhs(r) as i128 * d;
        let ok = match model.sense(r) {
            Sense::Ge => lhs >= rhs,
            Sense::Eq => lhs == rhs,
        };
        if !ok {
            return Err(Error::Certification(format!("point violates row {r} ({})", model.family(r))));
        }
    }
    Ok(x[model.objective()].clone())
}

/// Best rational approximation with denominator at most `max_den`.
pub fn rationalize(v: f64, max_den: i64) -> Rational {
    let sign = if v < 0.0 { -1 } else { 1 };
    let mut x = v.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    for _ in 0..64 {
        let a = x.floor();
        if a > 1e15 {
            break;
        }
        let a = a as i64;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = x - a as f64;
        if frac < 1e-12 {
            break;
        }
        x = 1.0 / frac;
    }
    if q1 == 0 {
        return Rational::zero();
    }
    Rational::new((sign * p1).into(), q1.into())
}

/// Float optimum from the interior-point solver.
#[derive(Debug, Clone)]
pub struct FloatSolution {
    pub value: f64,
    pub x: Vec<f64>,
    /// Multipliers in the `Aᵀ y = e_t` convention.
    pub y: Vec<f64>,
}

fn settings() -> clarabel::solver::DefaultSettings<f64> {
    DefaultSettingsBuilder::default()
        .verbose(false)
        .tol_gap_abs(1e-10)
        .tol_gap_rel(1e-10)
        .tol_feas(1e-10)
        .max_iter(400)
        .build()
        .expect("valid solver settings")
}

fn zeros_p(n: usize) -> CscMatrix<f64> {
    CscMatrix::new_from_triplets(n, n, vec![], vec![], vec![])
}

fn solved(status: SolverStatus) -> Result<()> {
    match status {
        SolverStatus::Solved | SolverStatus::AlmostSolved => Ok(()),
        SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => Err(Error::Infeasible),
        SolverStatus::DualInfeasible | SolverStatus::AlmostDualInfeasible => Err(Error::Unbounded),
        other => Err(Error::Certification(format!("interior-point solver stopped with {other:?}"))),
    }
}

/// `min q·x` over the model rows plus extra `≥` rows given as (terms, rhs).
fn solve_primal(model: &LpModel, q: &[f64], extra_ge: &[(Vec<(usize, f64)>, f64)]) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let n = model.num_vars();
    let (mut ri, mut ci, mut vals, mut b) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let eq_rows: Vec<usize> = (0..model.num_rows()).filter(|&r| model.sense(r) == Sense::Eq).collect();
    let ge_rows: Vec<usize> = (0..model.num_rows()).filter(|&r| model.sense(r) == Sense::Ge).collect();
    let mut k = 0;
    for &r in &eq_rows {
        for (c, a) in model.row(r) {
            ri.push(k);
            ci.push(c);
            vals.push(a as f64);
        }
        b.push(model.rhs(r) as f64);
        k += 1;
    }
    for &r in &ge_rows {
        for (c, a) in model.row(r) {
            ri.push(k);
            ci.push(c);
            vals.push(-(a as f64));
        }
        b.push(-(model.rhs(r) as f64));
        k += 1;
    }
    for (terms, rhs) in extra_ge {
        for &(c, a) in terms {
            ri.push(k);
            ci.push(c);
            vals.push(-a);
        }
        b.push(-rhs);
        k += 1;
    }
    let a = CscMatrix::new_from_triplets(k, n, ri, ci, vals);
    let cones = [
        SupportedConeT::ZeroConeT(eq_rows.len()),
        SupportedConeT::NonnegativeConeT(k - eq_rows.len()),
    ];
    let mut solver = DefaultSolver::new(&zeros_p(n), q, &a, &b, &cones, settings())
        .map_err(|e| Error::Certification(format!("solver setup: {e:?}")))?;
    solver.solve();
    solved(solver.solution.status)?;
    let z = &solver.solution.z;
    let mut y = vec![0.0; model.num_rows()];
    for (i, &r) in eq_rows.iter().enumerate() {
        y[r] = -z[i];
    }
    for (i, &r) in ge_rows.iter().enumerate() {
        y[r] = z[eq_rows.len() + i];
    }
    Ok((solver.solution.x.clone(), y, solver.solution.obj_val))
}

/// Float optimum of `min t`.
pub fn solve_float(model: &LpModel) -> Result<FloatSolution> {
    let mut q = vec![0.0; model.num_vars()];
    q[model.objective()] = 1.0;
    let (x, y, value) = solve_primal(model, &q, &[])?;
    Ok(FloatSolution { value, x, y })
}

/// Among multipliers proving `b·y = target`, the one minimizing a random
/// positive weighting; returns values indexed by model row.
fn sparse_dual(model: &LpModel, target: f64, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    // variables: y⁺ for every row, then y⁻ for equality rows
    let rows = model.num_rows();
    let eq: Vec<usize> = (0..rows).filter(|&r| model.sense(r) == Sense::Eq).collect();
    let nvar = rows + eq.len();
    let nv = model.num_vars();
    let (mut ri, mut ci, mut vals) = (Vec::new(), Vec::new(), Vec::new());
    let mut push_col = |col: usize, r: usize, sign: f64| {
        for (c, a) in model.row(r) {
            ri.push(c);
            ci.push(col);
            vals.push(sign * a as f64);
        }
        ri.push(nv);
        ci.push(col);
        vals.push(sign * model.rhs(r) as f64);
    };
    for r in 0..rows {
        push_col(r, r, 1.0);
    }
    for (i, &r) in eq.iter().enumerate() {
        push_col(rows + i, r, -1.0);
    }
    for j in 0..nvar {
        ri.push(nv + 1 + j);
        ci.push(j);
        vals.push(-1.0);
    }
    let m = nv + 1 + nvar;
    let a = CscMatrix::new_from_triplets(m, nvar, ri, ci, vals);
    let mut b = vec![0.0; m];
    b[model.objective()] = 1.0;
    b[nv] = target;
    let q: Vec<f64> = (0..nvar).map(|_| rng.gen_range(1.0..2.0)).collect();
    let cones = [SupportedConeT::ZeroConeT(nv + 1), SupportedConeT::NonnegativeConeT(nvar)];
    let mut solver = DefaultSolver::new(&zeros_p(nvar), &q, &a, &b, &cones, settings())
        .map_err(|e| Error::Certification(format!("solver setup: {e:?}")))?;
    solver.solve();
    solved(solver.solution.status)?;
    let s = &solver.solution.x;
    let mut y: Vec<f64> = s[..rows].to_vec();
    for (i, &r) in eq.iter().enumerate() {
        y[r] -= s[rows + i];
    }
    Ok(y)
}

/// Solves `M z = rhs` exactly (rows of `M` given densely); free unknowns take `hint` values.
fn exact_solve(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>, hint: &[Rational]) -> Option<Vec<Rational>> {
    let cols = hint.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        rhs.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for j in 0..cols {
            m[r][j] *= &inv;
        }
        rhs[r] *= &inv;
        let (prow, prhs) = (m[r].clone(), rhs[r].clone());
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    if !prow[j].is_zero() {
                        m[i][j] -= &f * &prow[j];
                    }
                }
                rhs[i] -= &f * &prhs;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rhs[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut z = hint.to_vec();
    let is_pivot: Vec<bool> = (0..cols).map(|c| pivots.contains(&c)).collect();
    for (i, &c) in pivots.iter().enumerate() {
        let mut v = rhs[i].clone();
        for j in 0..cols {
            if !is_pivot[j] && !m[i][j].is_zero() {
                v -= &m[i][j] * &hint[j];
            }
        }
        z[c] = v;
    }
    Some(z)
}

fn dual_from_support(model: &LpModel, y: &[f64], target: &Rational) -> Option<DualCertificate> {
    let scale = y.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
    let support: Vec<usize> = (0..y.len()).filter(|&r| y[r].abs() > 1e-7 * scale).collect();
    // a vertex of the dual has at most one nonzero per primal variable plus one
    if support.len() > model.num_vars() + 1 {
        return None;
    }
    let hint: Vec<Rational> = support.iter().map(|&r| rationalize(y[r], 1 << 12)).collect();
    let nv = model.num_vars();
    let mut m = vec![vec![Rational::zero(); support.len()]; nv + 1];
    for (j, &r) in support.iter().enumerate() {
        for (c, a) in model.row(r) {
            m[c][j] = Rational::from_integer(a.into());
        }
        m[nv][j] = Rational::from_integer(model.rhs(r).into());
    }
    let mut rhs = vec![Rational::zero(); nv + 1];
    rhs[model.objective()] = Rational::one();
    rhs[nv] = target.clone();
    let attempts = [exact_solve(m, rhs, &hint), Some(hint)];
    attempts.into_iter().flatten().find_map(|z| {
        let cert = DualCertificate {
            multipliers: support.iter().copied().zip(z).filter(|(_, v)| !v.is_zero()).collect(),
            bound: target.clone(),
        };
        verify_dual_certificate(model, &cert).ok().map(|_| cert)
    })
}

fn primal_at(model: &LpModel, target: &Rational, rng: &mut ChaCha8Rng) -> Result<Option<Vec<Rational>>> {
    let t = model.objective();
    let mut q: Vec<f64> = (0..model.num_vars()).map(|_| rng.gen_range(1.0..2.0)).collect();
    q[t] = 0.0;
    let cap = (vec![(t, -1.0)], -crate::to_f64(target));
    let (x, _, _) = solve_primal(model, &q, &[cap])?;
    for den in [4i64, 12, 60, 840] {
        let mut xr: Vec<Rational> = x.iter().map(|&v| rationalize(v, den)).collect();
        xr[t] = target.clone();
        if verify_primal(model, &xr).is_ok() {
            return Ok(Some(xr));
        }
    }
    Ok(None)
}

/// Exact optimum with a verified dual certificate, and a verified optimal point
/// when one can be recovered.
pub fn solve_exact(model: &LpModel) -> Result<ExactSolution> {
    if model.num_vars() <= SIMPLEX_VAR_CAP && model.num_rows() <= SIMPLEX_ROW_CAP {
        return simplex_solve(model);
    }
    solve_guided(model)
}

/// The interior-point route, usable on any model within [`EXACT_VAR_CAP`].
pub fn solve_guided(model: &LpModel) -> Result<ExactSolution> {
    if model.num_vars() > EXACT_VAR_CAP {
        return Err(Error::cap("variables for exact solving", model.num_vars(), EXACT_VAR_CAP));
    }
    let float = solve_float(model)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for den in [2i64, 6, 12, 60, 420, 2520] {
        let target = rationalize(float.value, den);
        // candidates only; everything below is checked exactly
        if (crate::to_f64(&target) - float.value).abs() > 1e-4 * float.value.abs().max(1.0) {
            continue;
        }
        let dual = dual_from_support(model, &float.y, &target).or_else(|| {
            let y = sparse_dual(model, crate::to_f64(&target), &mut rng).ok()?;
            dual_from_support(model, &y, &target)
        });
        let Some(dual) = dual else { continue };
        // a certificate alone only proves a lower bound; optimality needs a point too
        let Ok(Some(primal)) = primal_at(model, &target, &mut rng) else { continue };
        return ExactSolution::checked(model, target, Some(primal), dual, SolveMethod::GuidedInteriorPoint);
    }
    Err(Error::Certification(format!("could not certify a rational optimum near {}", float.value)))
}
