use super::{full_set, is_subset, AccessStructure, Subset, BRUTE_FORCE_PARTICIPANTS};
use crate::{Error, Result};

/// Limit on intermediate transversal families.
const MAX_TRANSVERSALS: usize = 1 << 22;

/// Minimal transversals of the minimal-set hypergraph, by Berge's edge-by-edge update.
fn minimal_transversals(edges: &[Subset]) -> Result<Vec<Subset>> {
    let mut current: Vec<Subset> = vec![0];
    for &e in edges {
        let (hit, miss): (Vec<Subset>, Vec<Subset>) = current.into_iter().partition(|&t| t & e != 0);
        let mut next = hit.clone();
        let mut fresh: Vec<Subset> = Vec::new();
        for t in miss {
            let mut rest = e;
            while rest != 0 {
                let v = rest & rest.wrapping_neg();
                rest ^= v;
                let cand = t | v;
                // an extension can only be dominated by a set that already hit `e`
                if !hit.iter().any(|&h| is_subset(h, cand)) {
                    fresh.push(cand);
                }
            }
        }
        fresh.sort_unstable_by_key(|s| (s.count_ones(), *s));
        fresh.dedup();
        let mut kept: Vec<Subset> = Vec::with_capacity(fresh.len());
        for c in fresh {
            if !kept.iter().any(|&k| is_subset(k, c)) {
                kept.push(c);
            }
        }
        next.extend(kept);
        if next.len() > MAX_TRANSVERSALS {
            return Err(Error::cap("transversals", next.len(), MAX_TRANSVERSALS));
        }
        current = next;
    }
    Ok(current)
}

pub(super) fn maximal_independent_sets(s: &AccessStructure) -> Result<Vec<Subset>> {
    let full = full_set(s.m());
    let mut out: Vec<Subset> = minimal_transversals(s.minimal_sets())?
        .into_iter()
        .map(|t| full & !t)
        .collect();
    out.sort_unstable_by_key(|s| (s.count_ones(), *s));
    Ok(out)
}

/// Exhaustive oracle: scans all `2^m` subsets, `m ≤ 16`.
pub fn brute_force_maximal_independent_sets(s: &AccessStructure) -> Result<Vec<Subset>> {
    if s.m() > BRUTE_FORCE_PARTICIPANTS {
        return Err(Error::cap("participants for brute force", s.m(), BRUTE_FORCE_PARTICIPANTS));
    }
    let table = s.qualification_table()?;
    let m = s.m();
    let mut out: Vec<Subset> = (0..table.len())
        .filter(|&a| !table[a] && (0..m).all(|p| a >> p & 1 == 1 || table[a | 1 << p]))
        .map(|a| a as Subset)
        .collect();
    out.sort_unstable_by_key(|s| (s.count_ones(), *s));
    Ok(out)
}
