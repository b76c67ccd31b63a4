use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::harmonic::HarmonicTable;
use crate::{to_f64, Error, Rational, Result};

/// Largest `n` handled by exact rational arithmetic in [`ne_bound_check`] and [`ne_scan`].
pub const EXACT_NE_CAP: usize = 10_000;

/// Largest `n` accepted by the float paths.
const FLOAT_CAP: usize = 10_000_000;

/// Absolute slack for float comparisons; float errors here stay below `1e-9`.
const GUARD: f64 = 1e-7;

/// Rational bounds `lo < 1/e < hi` from partial sums of `Σ (-1)^k / k!`
/// (terms up to `k = 17` and `k = 16`); `hi - lo = 1/17! < 1e-14`.
pub fn inv_e_bracket() -> (Rational, Rational) {
    let mut sum = Rational::zero();
    let mut fact = BigInt::one();
    let mut partial = Vec::new();
    for k in 0..=17u32 {
        if k > 0 {
            fact *= BigInt::from(k);
        }
        let term = Rational::new(BigInt::one(), fact.clone());
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        partial.push(sum.clone());
    }
    (partial[17].clone(), partial[16].clone())
}

/// `n - (n/e + (e - 1)/(2e))`, the predicted location of the maximizer of `f_n`.
pub fn argmax_estimate(n: usize) -> f64 {
    let e = std::f64::consts::E;
    n as f64 - (n as f64 / e + (e - 1.0) / (2.0 * e))
}

/// Neumaier-compensated accumulator.
#[derive(Default, Clone, Copy)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn check_float_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be at least 2, got {n}")));
    }
    if n > FLOAT_CAP {
        return Err(Error::cap("n for float path", n, FLOAT_CAP));
    }
    Ok(())
}

/// Float tail sums `T_i = Σ_{n-i ≤ j < n} 1/j` for `i = 1..n`, plain or compensated.
fn tails(n: usize, compensated: bool) -> impl Iterator<Item = (usize, f64)> {
    let mut plain = 0.0f64;
    let mut comp = Compensated::default();
    (1..n).map(move |i| {
        let x = 1.0 / (n - i) as f64;
        if compensated {
            comp.add(x);
            (i, comp.value())
        } else {
            plain += x;
            (i, plain)
        }
    })
}

/// Maximizer of `f_n` from float tail sums: the first `i ≤ n - 2` with `T_i ≥ 1`, else `n - 1`.
pub fn argmax_float(n: usize, compensated: bool) -> Result<usize> {
    check_float_n(n)?;
    Ok(tails(n, compensated)
        .take_while(|&(i, _)| i <= n.saturating_sub(2))
        .find(|&(_, t)| t >= 1.0)
        .map_or(n - 1, |(i, _)| i))
}

/// Exact `Σ_{lo ≤ j < hi} 1/j` as an unreduced `P/Q`, by binary splitting.
fn split_sum(lo: usize, hi: usize) -> (BigUint, BigUint) {
    if hi - lo <= 32 {
        let mut p = BigUint::zero();
        let mut q = BigUint::one();
        for j in lo..hi {
            p = p * BigUint::from(j) + &q;
            q *= BigUint::from(j);
        }
        return (p, q);
    }
    let mid = lo + (hi - lo) / 2;
    let (p1, q1) = split_sum(lo, mid);
    let (p2, q2) = split_sum(mid, hi);
    (p1 * &q2 + p2 * &q1, q1 * q2)
}

/// Compares `Σ_{lo ≤ j < hi} 1/j` with 1, exactly.
pub fn tail_sum_cmp_one(lo: usize, hi: usize) -> Ordering {
    assert!(lo >= 1 && lo <= hi);
    let (p, q) = split_sum(lo, hi);
    p.cmp(&q)
}

/// Whether index `i` satisfies `f_n(i+1) ≤ f_n(i)`, i.e. `h(n) - h(n-i) ≥ 1`.
fn stops_at(n: usize, i: usize) -> bool {
    i <= n - 2 && tail_sum_cmp_one(n - i, n) != Ordering::Less
}

/// The exact smallest maximizer of `f_n`: a compensated-float candidate,
/// confirmed by exact evaluation of the increment sign at it and its predecessor.
pub fn argmax_validated(n: usize) -> Result<usize> {
    let mut i = argmax_float(n, true)?;
    loop {
        if i < n - 1 && !stops_at(n, i) {
            i += 1;
        } else if i > 1 && stops_at(n, i - 1) {
            i -= 1;
        } else {
            return Ok(i);
        }
    }
}

/// One line of the `f_n` scan.
#[derive(Debug, Clone, PartialEq)]
pub struct NeRow {
    pub n: usize,
    pub argmax: usize,
    /// Exact maximum, present for `n ≤ EXACT_NE_CAP`.
    pub max: Option<Rational>,
    pub max_f64: f64,
    /// `n/e + 1/2` (advisory decimal).
    pub bound_f64: f64,
    /// Whether `max f_n < n/e + 1/2`, decided exactly or with a guard.
    pub holds: bool,
}

impl NeRow {
    pub fn margin(&self) -> f64 {
        self.bound_f64 - self.max_f64
    }
}

/// `max f_n < n·lo + 1/2` with `lo < 1/e`: clearing denominators,
/// `2·b·L·max < (2·n·a + b)·L` where `lo = a/b` and `L·max` is the scaled maximum.
fn exact_holds(scaled_max: &BigInt, denom: &BigInt, lo: &Rational, n: usize) -> bool {
    let (a, b) = (lo.numer(), lo.denom());
    let lhs = scaled_max * b * BigInt::from(2);
    let rhs = (BigInt::from(2 * n) * a + b) * denom;
    lhs < rhs
}

fn exact_row(table: &HarmonicTable, n: usize, lo: &Rational) -> NeRow {
    let i = table.argmax(n);
    let scaled = table.f_scaled(n, i);
    let holds = exact_holds(&scaled, table.denominator(), lo, n);
    let max = Rational::new(scaled, table.denominator().clone());
    NeRow {
        n,
        argmax: i,
        max_f64: to_f64(&max),
        max: Some(max),
        bound_f64: n as f64 / std::f64::consts::E + 0.5,
        holds,
    }
}

/// Guarded float row: the maximum is taken over the float maximizer and its
/// neighbours, so an off-by-one maximizer cannot understate it.
fn float_row(n: usize, lo_f64: f64) -> Result<NeRow> {
    let i = argmax_float(n, true)?;
    let ts: Vec<f64> = tails(n, true).map(|(_, t)| t).take((i + 2).min(n - 1)).collect();
    let f = |j: usize| (n - j) as f64 * ts[j - 1];
    let max_f64 = (i.saturating_sub(2).max(1)..=(i + 2).min(n - 1)).map(f).fold(f64::MIN, f64::max);
    let bound = n as f64 * lo_f64 + 0.5;
    Ok(NeRow {
        n,
        argmax: i,
        max: None,
        max_f64,
        bound_f64: n as f64 / std::f64::consts::E + 0.5,
        holds: max_f64 + GUARD < bound,
    })
}

/// Whether `max_i f_n(i) < n/e + 1/2`, against the lower rational bound on `1/e`.
///
/// Exact for `n ≤ EXACT_NE_CAP`; above, a compensated float evaluation that
/// must clear the bound by a fixed guard.
pub fn ne_bound_check(n: usize) -> Result<bool> {
    check_float_n(n)?;
    let (lo, _) = inv_e_bracket();
    if n <= EXACT_NE_CAP {
        let t = HarmonicTable::new(n)?;
        return Ok(exact_row(&t, n, &lo).holds);
    }
    Ok(float_row(n, lo_f64(&lo))?.holds)
}

/// Rounds the lower bracket down a little so the float bound stays conservative.
fn lo_f64(lo: &Rational) -> f64 {
    to_f64(lo) - 1e-15
}

/// Rows `n = 2..=n_max`: exact up to `EXACT_NE_CAP` (one shared harmonic table),
/// guarded float beyond.
pub fn ne_scan(n_max: usize) -> Result<Vec<NeRow>> {
    check_float_n(n_max)?;
    let (lo, _) = inv_e_bracket();
    let exact_top = n_max.min(EXACT_NE_CAP);
    let table = HarmonicTable::new(exact_top)?;
    let mut rows: Vec<NeRow> = (2..=exact_top).map(|n| exact_row(&table, n, &lo)).collect();
    if n_max > EXACT_NE_CAP {
        rows.extend(float_scan(EXACT_NE_CAP + 1, n_max, lo_f64(&lo)));
    }
    Ok(rows)
}

/// Float rows for `from..=to` with a sliding window `[lo, n)` whose sum first reaches 1.
fn float_scan(from: usize, to: usize, inv_e_lo: f64) -> Vec<NeRow> {
    let mut rows = Vec::with_capacity(to + 1 - from);
    // window sum over [lo, n); lo only moves up as n grows
    let mut lo = from - 1;
    let mut acc = Compensated::default();
    for n in from..=to {
        acc.add(1.0 / (n - 1) as f64);
        while lo > 1 && acc.value() < 1.0 {
            lo -= 1;
            acc.add(1.0 / lo as f64);
        }
        while lo + 1 < n && acc.value() - 1.0 / lo as f64 >= 1.0 {
            acc.add(-1.0 / lo as f64);
            lo += 1;
        }
        let i = n - lo;
        let max_f64 = (n - i) as f64 * acc.value();
        // neighbours differ by at most 1/(n - i), which the guard absorbs at this size
        let slack = 1.0 / (n - i) as f64;
        let bound = n as f64 * inv_e_lo + 0.5;
        rows.push(NeRow {
            n,
            argmax: i,
            max: None,
            max_f64,
            bound_f64: n as f64 / std::f64::consts::E + 0.5,
            holds: max_f64 + slack + GUARD < bound,
        });
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::sigma_upper;

    #[test]
    fn bracket_contains_inverse_e() {
        let (lo, hi) = inv_e_bracket();
        assert!(lo < hi);
        let e_inv = 1.0 / std::f64::consts::E;
        assert!(to_f64(&lo) <= e_inv && e_inv <= to_f64(&hi));
        assert!(to_f64(&(hi - lo)) < 1e-12);
    }

    #[test]
    fn small_checks() {
        assert!(ne_bound_check(2).unwrap());
        assert!(ne_bound_check(5).unwrap());
        assert!(ne_bound_check(1000).unwrap());
    }

    #[test]
    fn estimate_for_four() {
        let est = argmax_estimate(4);
        assert!((est - 2.2124).abs() < 1e-3);
        assert_eq!(sigma_upper(4).unwrap().1, 3);
    }

    #[test]
    fn validated_argmax_matches_exact() {
        for n in [2, 3, 4, 5, 10, 57, 300, 1234] {
            assert_eq!(argmax_validated(n).unwrap(), sigma_upper(n).unwrap().1, "n={n}");
        }
    }

    #[test]
    fn float_scan_agrees_with_exact_rows_near_cap() {
        let (lo, _) = inv_e_bracket();
        let table = HarmonicTable::new(3000).unwrap();
        let fl = float_scan(2500, 3000, lo_f64(&lo));
        for row in fl {
            let ex = exact_row(&table, row.n, &lo);
            assert!((row.argmax as i64 - ex.argmax as i64).abs() <= 1);
            assert!(row.holds && ex.holds);
        }
    }
}
