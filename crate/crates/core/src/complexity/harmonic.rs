use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::{Error, Rational, Result};

/// Largest `n` for which [`sigma_upper`] works in exact rationals.
pub const SIGMA_EXACT_CAP: usize = 20_000;

/// `h(n) = Σ_{0<j<n} 1/j`.
pub fn harmonic(n: usize) -> Result<Rational> {
    if n < 1 {
        return Err(Error::InvalidArgument("h(n) needs n >= 1".into()));
    }
    Ok(tail_sum(1, n))
}

/// `Σ_{lo ≤ j < hi} 1/j` as a reduced rational.
fn tail_sum(lo: usize, hi: usize) -> Rational {
    // common denominator lcm(lo..hi), reduced once at the end
    let mut l = BigInt::one();
    for j in lo..hi {
        l = l.lcm(&BigInt::from(j));
    }
    let mut p = BigInt::zero();
    for j in lo..hi {
        p += &l / BigInt::from(j);
    }
    Rational::new(p, l)
}

fn check_fi(n: usize, i: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("f_n needs n >= 2, got {n}")));
    }
    if i > n {
        return Err(Error::InvalidArgument(format!("f_{n}({i}) needs 0 <= i <= n")));
    }
    Ok(())
}

/// `f_n(i) = (n - i)(h(n) - h(n - i))`, with `f_n(n) = 1`.
pub fn f_closed(n: usize, i: usize) -> Result<Rational> {
    check_fi(n, i)?;
    if i == n {
        return Ok(Rational::one());
    }
    Ok(tail_sum(n - i, n) * Rational::from_integer((n - i).into()))
}

/// Every `f_m(i)` for `2 ≤ m ≤ n`, built upward from `f_2` with
/// `m·f_{m+1}(i) = (m + 1 - i)·f_m(i) + i·f_m(i - 1)`. Row `m` is `table[m]`.
pub fn f_recursive_table(n: usize) -> Result<Vec<Vec<Rational>>> {
    check_fi(n, 0)?;
    let mut table: Vec<Vec<Rational>> = vec![Vec::new(), Vec::new()];
    table.push(vec![Rational::zero(), Rational::one(), Rational::one()]);
    for m in 2..n {
        let prev = &table[m];
        let mut row = Vec::with_capacity(m + 2);
        row.push(Rational::zero());
        for i in 1..=m {
            let v = (Rational::from_integer((m + 1 - i).into()) * &prev[i]
                + Rational::from_integer(i.into()) * &prev[i - 1])
                / Rational::from_integer(m.into());
            row.push(v);
        }
        row.push(Rational::one());
        table.push(row);
    }
    Ok(table)
}

/// `f_n(i)` by the recursion in `n`.
pub fn f_recursive(n: usize, i: usize) -> Result<Rational> {
    check_fi(n, i)?;
    Ok(f_recursive_table(n)?[n][i].clone())
}

/// `h(1..=max_n)` over the common denominator `L = lcm(1, …, max_n - 1)`.
///
/// Differences and comparisons of `h` values reduce to integer arithmetic on
/// the stored numerators.
#[derive(Debug, Clone)]
pub struct HarmonicTable {
    max_n: usize,
    denom: BigInt,
    numer: Vec<BigInt>,
}

impl HarmonicTable {
    pub fn new(max_n: usize) -> Result<Self> {
        if max_n < 1 {
            return Err(Error::InvalidArgument("harmonic table needs max_n >= 1".into()));
        }
        let mut denom = BigInt::one();
        for j in 1..max_n {
            denom = denom.lcm(&BigInt::from(j));
        }
        let mut numer = Vec::with_capacity(max_n + 1);
        numer.push(BigInt::zero()); // unused slot for n = 0
        numer.push(BigInt::zero());
        for j in 1..max_n {
            let next = &numer[j] + &denom / BigInt::from(j);
            numer.push(next);
        }
        Ok(HarmonicTable { max_n, denom, numer })
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denom
    }

    /// `L·h(n)`.
    pub fn scaled(&self, n: usize) -> &BigInt {
        &self.numer[n]
    }

    pub fn h(&self, n: usize) -> Rational {
        assert!((1..=self.max_n).contains(&n), "h({n}) outside table 1..={}", self.max_n);
        Rational::new(self.numer[n].clone(), self.denom.clone())
    }

    /// `L·(n - i)(h(n) - h(n - i))` for `0 ≤ i < n ≤ max_n`.
    pub fn f_scaled(&self, n: usize, i: usize) -> BigInt {
        (&self.numer[n] - &self.numer[n - i]) * BigInt::from(n - i)
    }

    pub fn f(&self, n: usize, i: usize) -> Result<Rational> {
        check_fi(n, i)?;
        if n > self.max_n {
            return Err(Error::cap("n for harmonic table", n, self.max_n));
        }
        if i == n {
            return Ok(Rational::one());
        }
        Ok(Rational::new(self.f_scaled(n, i), self.denom.clone()))
    }

    /// Sign of `f_n(i+1) - f_n(i) = h(n - i) + 1 - h(n)`.
    pub fn increment_sign(&self, n: usize, i: usize) -> Ordering {
        (&self.numer[n - i] + &self.denom).cmp(&self.numer[n])
    }

    /// Smallest maximizer of `f_n` over `1 ≤ i < n`: the first `i ≤ n - 2` whose
    /// increment is not positive, else `n - 1`. The increments decrease in `i`,
    /// so this is a binary search.
    pub fn argmax(&self, n: usize) -> usize {
        assert!((2..=self.max_n).contains(&n));
        let (mut lo, mut hi) = (1usize, n - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.increment_sign(n, mid) == Ordering::Greater {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

/// `(max_{1≤i<n} f_n(i), smallest maximizer)`, exact for `n ≤ SIGMA_EXACT_CAP`.
pub fn sigma_upper(n: usize) -> Result<(Rational, usize)> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("sigma_upper needs n >= 2, got {n}")));
    }
    if n > SIGMA_EXACT_CAP {
        return Err(Error::cap("n for exact sigma_upper", n, SIGMA_EXACT_CAP));
    }
    let t = HarmonicTable::new(n)?;
    let i = t.argmax(n);
    Ok((t.f(n, i)?, i))
}

/// Full scan of `f_n(1..n)` (first maximizer on ties), as an oracle for [`sigma_upper`].
pub fn sigma_upper_scan(table: &HarmonicTable, n: usize) -> (Rational, usize) {
    let mut best = (table.f_scaled(n, 1), 1);
    for i in 2..n {
        let v = table.f_scaled(n, i);
        if v > best.0 {
            best = (v, i);
        }
    }
    (Rational::new(best.0, table.denominator().clone()), best.1)
}
