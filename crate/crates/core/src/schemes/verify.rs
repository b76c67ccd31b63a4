use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::LinearScheme;
use crate::gf2::EchelonBasis;
use crate::structures::{brute_force_maximal_independent_sets, members, AccessStructure, Subset, BRUTE_FORCE_PARTICIPANTS};
use crate::{Error, Result};

/// Largest seed dimension the exhaustive oracle accepts.
pub const BRUTE_FORCE_SEED_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    RankBased,
    BruteForce,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PerfectnessReport {
    pub correct: bool,
    pub private: bool,
    /// First minimal set that fails to recover, else first maximal independent set that leaks.
    pub failing_set: Option<Subset>,
    pub method: Method,
}

impl PerfectnessReport {
    pub fn is_perfect(&self) -> bool {
        self.correct && self.private
    }

    /// Same verdict, ignoring the method tag.
    pub fn agrees_with(&self, other: &PerfectnessReport) -> bool {
        self.correct == other.correct && self.private == other.private && self.failing_set == other.failing_set
    }
}

fn check_sizes(scheme: &LinearScheme, structure: &AccessStructure) -> Result<()> {
    if scheme.participants() != structure.m() {
        return Err(Error::DimensionMismatch(format!(
            "scheme has {} participants, structure has {}",
            scheme.participants(),
            structure.m()
        )));
    }
    Ok(())
}

fn span_of(scheme: &LinearScheme, subset: Subset) -> EchelonBasis {
    let mut basis = EchelonBasis::new(scheme.seed_dim(), scheme.seed_dim());
    for p in members(subset) {
        basis.insert_matrix(scheme.share_map(p));
    }
    basis
}

fn recovers(scheme: &LinearScheme, subset: Subset) -> bool {
    let basis = span_of(scheme, subset);
    let k = scheme.secret_map();
    (0..k.rows()).all(|r| basis.contains(k.row_words(r)))
}

fn hides(scheme: &LinearScheme, subset: Subset) -> bool {
    let mut basis = span_of(scheme, subset);
    let k = scheme.secret_map();
    (0..k.rows()).all(|r| basis.insert(k.row_words(r)).is_some())
}

fn report(
    method: Method,
    minimal: &[Subset],
    independent: &[Subset],
    recover: impl Fn(Subset) -> bool + Sync,
    hide: impl Fn(Subset) -> bool + Sync,
) -> PerfectnessReport {
    let bad_min = minimal.par_iter().find_first(|&&a| !recover(a)).copied();
    let bad_ind = independent.par_iter().find_first(|&&a| !hide(a)).copied();
    PerfectnessReport {
        correct: bad_min.is_none(),
        private: bad_ind.is_none(),
        failing_set: bad_min.or(bad_ind),
        method,
    }
}

/// Rank-based check: minimal sets span the secret rows, maximal independent
/// sets add exactly `k` to the rank when the secret rows are appended.
pub fn verify_perfect(scheme: &LinearScheme, structure: &AccessStructure) -> Result<PerfectnessReport> {
    check_sizes(scheme, structure)?;
    let independent = structure.maximal_independent_sets()?;
    Ok(report(
        Method::RankBased,
        structure.minimal_sets(),
        &independent,
        |a| recovers(scheme, a),
        |a| hides(scheme, a),
    ))
}

/// Evaluates all shares and the secret for every seed. Each share is packed
/// into `u64` words; seed bits are the low bits of the index.
struct Table {
    secrets: Vec<u64>,
    /// `shares[p][seed]` holds participant `p`'s share bits.
    shares: Vec<Vec<Vec<u64>>>,
}

fn row_masks(m: &crate::gf2::BitMatrix) -> Vec<u32> {
    (0..m.rows()).map(|r| m.row_words(r).first().copied().unwrap_or(0) as u32).collect()
}

fn evaluate(masks: &[u32], seed: u32) -> Vec<u64> {
    let mut out = vec![0u64; masks.len().div_ceil(64).max(1)];
    for (i, &m) in masks.iter().enumerate() {
        if (m & seed).count_ones() & 1 == 1 {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

fn tabulate(scheme: &LinearScheme) -> Result<Table> {
    let d = scheme.seed_dim();
    if d > BRUTE_FORCE_SEED_CAP {
        return Err(Error::cap("seed bits for brute force", d, BRUTE_FORCE_SEED_CAP));
    }
    let seeds = 1u32 << d;
    let secret_masks = row_masks(scheme.secret_map());
    let secrets = (0..seeds).map(|w| evaluate(&secret_masks, w)[0]).collect();
    let shares = scheme
        .share_maps()
        .par_iter()
        .map(|m| {
            let masks = row_masks(m);
            (0..seeds).map(|w| evaluate(&masks, w)).collect()
        })
        .collect();
    Ok(Table { secrets, shares })
}

fn view(table: &Table, subset: Subset, seed: usize) -> Vec<u64> {
    members(subset).flat_map(|p| table.shares[p][seed].iter().copied()).collect()
}

fn determines(table: &Table, subset: Subset) -> bool {
    let mut seen: HashMap<Vec<u64>, u64> = HashMap::new();
    (0..table.secrets.len()).all(|w| {
        let s = table.secrets[w];
        *seen.entry(view(table, subset, w)).or_insert(s) == s
    })
}

fn histograms_of(table: &Table, subset: Subset) -> BTreeMap<u64, BTreeMap<Vec<u64>, u64>> {
    let mut out: BTreeMap<u64, BTreeMap<Vec<u64>, u64>> = BTreeMap::new();
    for w in 0..table.secrets.len() {
        *out.entry(table.secrets[w]).or_default().entry(view(table, subset, w)).or_insert(0) += 1;
    }
    out
}

fn independent_of_secret(table: &Table, subset: Subset, k: usize) -> bool {
    let h = histograms_of(table, subset);
    h.len() == 1usize << k && h.values().all(|x| x == h.values().next().unwrap())
}

/// For every secret value, the multiset of share tuples of `subset` over all
/// seeds producing that secret (secret bits packed little-endian).
pub fn share_histograms(scheme: &LinearScheme, subset: Subset) -> Result<BTreeMap<u64, BTreeMap<Vec<u64>, u64>>> {
    Ok(histograms_of(&tabulate(scheme)?, subset))
}

/// Exhaustive check over all `2^d` seeds, `d ≤ 24`: every minimal set's view
/// determines the secret, and every maximal independent set's view has the same
/// distribution under every secret value.
pub fn brute_force_verify(scheme: &LinearScheme, structure: &AccessStructure) -> Result<PerfectnessReport> {
    check_sizes(scheme, structure)?;
    let table = tabulate(scheme)?;
    let independent = if structure.m() <= BRUTE_FORCE_PARTICIPANTS {
        brute_force_maximal_independent_sets(structure)?
    } else {
        structure.maximal_independent_sets()?
    };
    let k = scheme.secret_dim();
    Ok(report(
        Method::BruteForce,
        structure.minimal_sets(),
        &independent,
        |a| determines(&table, a),
        |a| independent_of_secret(&table, a, k),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BitMatrix;
    use crate::schemes::kofk_additive;
    use crate::structures::subset_of;

    #[test]
    fn two_of_two_is_perfect_both_ways() {
        let s = kofk_additive(2, 1).unwrap();
        let st = AccessStructure::new(2, &[0b11]).unwrap();
        assert!(verify_perfect(&s, &st).unwrap().is_perfect());
        assert!(brute_force_verify(&s, &st).unwrap().is_perfect());
    }

    #[test]
    fn leak_is_caught() {
        let k = BitMatrix::parse_rows(2, &["10"]).unwrap();
        let shares = vec![BitMatrix::parse_rows(2, &["01"]).unwrap(), k.clone()];
        let s = LinearScheme::new(k, shares, vec![]).unwrap();
        let st = AccessStructure::new(2, &[0b11]).unwrap();
        let bf = brute_force_verify(&s, &st).unwrap();
        assert!(!bf.private);
        assert!(bf.agrees_with(&verify_perfect(&s, &st).unwrap()));
    }

    #[test]
    fn three_of_three_fails_two_of_three() {
        let s = kofk_additive(3, 1).unwrap();
        let st = AccessStructure::new(3, &[subset_of([0, 1]), subset_of([0, 2]), subset_of([1, 2])]).unwrap();
        let r = verify_perfect(&s, &st).unwrap();
        assert!(!r.correct);
        assert_eq!(r.failing_set.unwrap().count_ones(), 2);
    }
}
