//! Recursive construction of perfect schemes for the normalized universal structures.
//!
//! From a scheme for `U*_n` with a `u`-bit secret, [`lift`] shares an `n·u`-bit
//! secret `(s_1..s_n)`: the parity combiner yields `n + 1` shadows, and shadow
//! `j` is shared over `U*_{n+1}` with the `j`-th minimal set ignored (the
//! structure `Γ_j`) by expanding the `U*_n` scheme to the cells of `Γ_j`. Any
//! minimal set of `U*_{n+1}` is a minimal set of `n` of the `Γ_j`, so it
//! recovers `n` shadows and hence the secret.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::gf2::BitMatrix;
use crate::schemes::{expand_to_universal, verify_perfect, LinearScheme, SeedBlock};
use crate::structures::{normalized_participants, universal_normalized, CellCensus};
use crate::{Error, Rational, Result};

/// Largest `n` accepted by [`build`].
pub const BUILD_CAP: usize = 6;

/// Largest `n` whose input scheme [`lift`] re-verifies before lifting.
pub const LIFT_CHECK_CAP: usize = 5;

/// The two-participant scheme: both participants receive the secret bit.
pub fn base_u2() -> LinearScheme {
    let id = BitMatrix::identity(1);
    LinearScheme::new_unchecked(id.clone(), vec![id.clone(), id], vec![SeedBlock::new("secret", 0, 1)])
        .expect("base scheme is well formed")
}

fn drop_bit(bits: u64, j: usize) -> u64 {
    let low = bits & ((1 << j) - 1);
    let high = bits >> (j + 1);
    low | (high << j)
}

fn check_gamma(n_plus_1: usize, j: usize) -> Result<()> {
    if !(3..=20).contains(&n_plus_1) {
        return Err(Error::InvalidArgument(format!("Γ census needs 3 <= n+1 <= 20, got {n_plus_1}")));
    }
    if !(1..=n_plus_1).contains(&j) {
        return Err(Error::InvalidArgument(format!("set index {j} outside 1..={n_plus_1}")));
    }
    Ok(())
}

/// Census of `U*_{n+1}` with respect to its minimal sets other than the `j`-th (1-based).
pub fn gamma_census(n_plus_1: usize, j: usize) -> Result<CellCensus> {
    check_gamma(n_plus_1, j)?;
    let top = (1u64 << n_plus_1) - 1;
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for q in 1..top {
        *counts.entry(drop_bit(q, j - 1)).or_insert(0) += 1;
    }
    CellCensus::new(n_plus_1 - 1, counts)
}

/// Position of each `U*_{n+1}` participant among the participants of the
/// realized `Γ_j` census (cells ascending, dropped bit 0 first within a cell).
fn gamma_positions(n_plus_1: usize, j: usize, census: &CellCensus) -> Vec<usize> {
    let mut next: BTreeMap<u64, usize> = BTreeMap::new();
    let mut at = 0;
    for (pat, count) in census.nonempty() {
        next.insert(pat.bits(), at);
        at += count;
    }
    let top = (1u64 << n_plus_1) - 1;
    (1..top)
        .map(|q| {
            let slot = next.get_mut(&drop_bit(q, j - 1)).expect("every restricted cell is counted");
            *slot += 1;
            *slot - 1
        })
        .collect()
}

fn universal_n(scheme: &LinearScheme) -> Result<usize> {
    let m = scheme.participants();
    (2..=BUILD_CAP)
        .find(|&n| normalized_participants(n) == m)
        .ok_or_else(|| Error::InvalidArgument(format!("{m} participants is not 2^n - 2 for 2 <= n <= {BUILD_CAP}")))
}

/// Seed growth of one lift step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftStep {
    pub from_n: usize,
    pub secret_dim: usize,
    pub seed_dim: usize,
    /// Free seed bits consumed by each `Γ_j`, in `j` order.
    pub gamma_seed_bits: Vec<usize>,
}

fn lift_step(scheme_n: &LinearScheme) -> Result<(LinearScheme, LiftStep)> {
    let n = universal_n(scheme_n)?;
    if n + 1 > BUILD_CAP {
        return Err(Error::cap("n for lift output", n + 1, BUILD_CAP));
    }
    let inner = scheme_n.canonicalize()?;
    let u = inner.secret_dim();
    let big = n + 1;
    let subs: Vec<(LinearScheme, Vec<usize>)> = (1..=big)
        .into_par_iter()
        .map(|j| {
            let census = gamma_census(big, j)?;
            let exp = expand_to_universal(&inner, &census)?;
            Ok((exp, gamma_positions(big, j, &census)))
        })
        .collect::<Result<_>>()?;

    let k = n * u;
    let mut manifest = vec![SeedBlock::new("secret", 0, k)];
    let mut offsets = Vec::with_capacity(big);
    let mut d = k;
    for (j, (exp, _)) in subs.iter().enumerate() {
        offsets.push(d);
        for b in exp.manifest().iter().filter(|b| b.label != "secret") {
            manifest.push(SeedBlock::new(format!("Γ{}/{}", j + 1, b.label), d + b.offset - u, b.len));
        }
        d += exp.seed_dim() - u;
    }
    let gamma_seed_bits: Vec<usize> = subs.iter().map(|(e, _)| e.seed_dim() - u).collect();

    let m = normalized_participants(big);
    let share_maps: Vec<BitMatrix> = (0..m)
        .into_par_iter()
        .map(|q| {
            let parts: Vec<BitMatrix> = subs
                .iter()
                .enumerate()
                .map(|(j, (exp, pos))| {
                    let sub = exp.share_map(pos[q]);
                    let shadow = sub.column_block(0, u);
                    let mut g = sub.column_block(u, sub.cols() - u).widen(d, offsets[j]);
                    if j < n {
                        g.xor_block(0, j * u, &shadow);
                    } else {
                        for i in 0..n {
                            g.xor_block(0, i * u, &shadow);
                        }
                    }
                    g
                })
                .collect();
            BitMatrix::vstack(&parts.iter().collect::<Vec<_>>()).expect("equal widths")
        })
        .collect();
    let scheme = LinearScheme::new_unchecked(BitMatrix::identity(k).widen(d, 0), share_maps, manifest)?;
    let step = LiftStep { from_n: n, secret_dim: k, seed_dim: d, gamma_seed_bits };
    Ok((scheme, step))
}

fn require_perfect(scheme: &LinearScheme, n: usize) -> Result<()> {
    let report = verify_perfect(scheme, &universal_normalized(n)?)?;
    if !report.is_perfect() {
        return Err(Error::NotPerfect(format!("input scheme for U*_{n} fails at {:?}", report.failing_set)));
    }
    Ok(())
}

/// Lifts a perfect scheme for `U*_n` to one for `U*_{n+1}`.
///
/// For `n ≤ LIFT_CHECK_CAP` the input is verified first and a non-perfect
/// input is rejected with [`Error::NotPerfect`]; larger inputs are trusted.
pub fn lift(scheme_n: &LinearScheme) -> Result<LinearScheme> {
    let n = universal_n(scheme_n)?;
    if n <= LIFT_CHECK_CAP {
        require_perfect(scheme_n, n)?;
    }
    lift_unchecked(scheme_n)
}

/// [`lift`] without verifying the input.
pub fn lift_unchecked(scheme_n: &LinearScheme) -> Result<LinearScheme> {
    Ok(lift_step(scheme_n)?.0)
}

/// What [`build`] produced: sizes per class and how the seed grew.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BuildTrace {
    pub n: usize,
    pub secret_dim: usize,
    /// `class_sizes[i - 1]` is the share size in bits of every participant in `i` minimal sets.
    pub class_sizes: Vec<usize>,
    pub seed_dim: usize,
    pub steps: Vec<LiftStep>,
    pub manifest: Vec<SeedBlock>,
}

impl BuildTrace {
    pub fn class_size(&self, i: usize) -> usize {
        self.class_sizes[i - 1]
    }
}

/// Share size of each class of a scheme for `U*_n`; errors if a class is not uniform.
pub fn class_sizes(scheme: &LinearScheme, n: usize) -> Result<Vec<usize>> {
    let mut sizes = vec![None; n - 1];
    for p in 0..scheme.participants() {
        let w = (p as u64 + 1).count_ones() as usize;
        let s = scheme.share_size(p);
        match sizes[w - 1] {
            None => sizes[w - 1] = Some(s),
            Some(t) if t != s => {
                return Err(Error::InvalidArgument(format!("class {w} has share sizes {t} and {s}")));
            }
            _ => {}
        }
    }
    Ok(sizes.into_iter().map(|s| s.unwrap_or(0)).collect())
}

/// Builds the scheme for `U*_n`, `2 ≤ n ≤ BUILD_CAP`.
pub fn build(n: usize) -> Result<(LinearScheme, BuildTrace)> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("build needs n >= 2, got {n}")));
    }
    if n > BUILD_CAP {
        return Err(Error::cap("n for build", n, BUILD_CAP));
    }
    let mut scheme = base_u2();
    let mut steps = Vec::new();
    for from in 2..n {
        if from <= LIFT_CHECK_CAP {
            require_perfect(&scheme, from)?;
        }
        let (next, step) = lift_step(&scheme)?;
        scheme = next;
        steps.push(step);
    }
    let trace = BuildTrace {
        n,
        secret_dim: scheme.secret_dim(),
        class_sizes: class_sizes(&scheme, n)?,
        seed_dim: scheme.seed_dim(),
        steps,
        manifest: scheme.manifest().to_vec(),
    };
    Ok((scheme, trace))
}

/// Realized share sizes divided by the secret size, keyed by class.
pub fn size_profile(trace: &BuildTrace) -> BTreeMap<usize, Rational> {
    trace
        .class_sizes
        .iter()
        .enumerate()
        .map(|(i, &s)| (i + 1, Rational::new(s.into(), trace.secret_dim.into())))
        .collect()
}
