use std::collections::BTreeMap;
use std::fmt;

use super::{subset_of, AccessStructure};
use crate::{Error, Result};

/// Largest number of minimal sets a [`Pattern`] can describe.
pub const MAX_PATTERN_SETS: usize = 64;

/// Membership vector of a participant across `n` minimal sets; bit `i` ↔ `A_{i+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    n: usize,
    bits: u64,
}

impl Pattern {
    pub fn new(n: usize, bits: u64) -> Self {
        debug_assert!(n <= MAX_PATTERN_SETS);
        debug_assert!(n == 64 || bits >> n == 0);
        Pattern { n, bits }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_all_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn is_all_one(&self) -> bool {
        self.weight() as usize == self.n
    }

    pub fn is_constant(&self) -> bool {
        self.is_all_zero() || self.is_all_one()
    }

    pub fn has(&self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }
}

impl fmt::Display for Pattern {
    /// Writes `ε_1 ε_2 … ε_n`, i.e. bit 0 first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            f.write_str(if self.has(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Number of participants in each Boolean cell of `n` sets.
///
/// Only nonzero counts are stored; absent patterns count zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellCensus {
    n: usize,
    counts: BTreeMap<u64, usize>,
}

impl CellCensus {
    pub fn new(n: usize, counts: impl IntoIterator<Item = (u64, usize)>) -> Result<Self> {
        if n == 0 || n > MAX_PATTERN_SETS {
            return Err(Error::InvalidArgument(format!("census needs 1..={MAX_PATTERN_SETS} sets, got {n}")));
        }
        let mut map = BTreeMap::new();
        for (bits, c) in counts {
            if n < 64 && bits >> n != 0 {
                return Err(Error::InvalidArgument(format!("pattern {bits:#b} has more than {n} bits")));
            }
            if c > 0 {
                *map.entry(bits).or_insert(0) += c;
            }
        }
        Ok(CellCensus { n, counts: map })
    }

    /// Census with one participant in every non-constant cell.
    pub fn normalized(n: usize) -> Result<Self> {
        if !(2..=20).contains(&n) {
            return Err(Error::InvalidArgument(format!("normalized census needs 2 <= n <= 20, got {n}")));
        }
        let top = (1u64 << n) - 1;
        Self::new(n, (1..top).map(|b| (b, 1)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self, bits: u64) -> usize {
        self.counts.get(&bits).copied().unwrap_or(0)
    }

    /// Nonempty cells in ascending pattern order.
    pub fn nonempty(&self) -> impl Iterator<Item = (Pattern, usize)> + '_ {
        self.counts.iter().map(move |(&b, &c)| (Pattern::new(self.n, b), c))
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    fn all_ones(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub fn all_zero_count(&self) -> usize {
        self.count(0)
    }

    pub fn all_one_count(&self) -> usize {
        self.count(self.all_ones())
    }

    /// Every one of the `2^n` cells is inhabited.
    pub fn is_universal(&self) -> bool {
        self.n < 64 && self.counts.len() as u128 == 1u128 << self.n
    }

    /// Every non-constant cell holds exactly one participant and the constant cells are empty.
    pub fn is_normalized(&self) -> bool {
        self.n < 64
            && self.n >= 2
            && self.counts.len() as u128 == (1u128 << self.n) - 2
            && self.all_zero_count() == 0
            && self.all_one_count() == 0
            && self.counts.values().all(|&c| c == 1)
    }

    /// Every non-constant cell is inhabited (the constant cells are unconstrained).
    pub fn covers_nonconstant(&self) -> bool {
        let nonconstant = self
            .counts
            .keys()
            .filter(|&&b| b != 0 && b != self.all_ones())
            .count() as u128;
        self.n >= 2 && self.n < 64 && nonconstant == (1u128 << self.n) - 2
    }

    /// Patterns of the realized participants: cells in ascending pattern order,
    /// members of one cell consecutive.
    pub fn participant_patterns(&self) -> Vec<Pattern> {
        self.nonempty()
            .flat_map(|(p, c)| std::iter::repeat_n(p, c))
            .collect()
    }

    /// Builds the structure whose `i`-th set collects the participants with bit `i`.
    ///
    /// Participants follow [`CellCensus::participant_patterns`]. The returned
    /// structure stores its minimal sets canonically, which may permute them
    /// relative to the census indices; the patterns keep the census indexing.
    pub fn realize(&self) -> Result<(AccessStructure, Vec<Pattern>)> {
        let pats = self.participant_patterns();
        let sets: Vec<_> = (0..self.n)
            .map(|i| subset_of(pats.iter().enumerate().filter(|(_, p)| p.has(i)).map(|(j, _)| j)))
            .collect();
        if let Some(i) = sets.iter().position(|&s| s == 0) {
            return Err(Error::InvalidArgument(format!("census leaves set {} empty", i + 1)));
        }
        let s = AccessStructure::new(pats.len(), &sets)?;
        if s.num_minimal() != self.n {
            return Err(Error::InvalidArgument("census sets are not pairwise incomparable".into()));
        }
        Ok((s, pats))
    }
}

/// Counts participants by their membership pattern across the minimal sets.
pub fn cell_census(structure: &AccessStructure) -> Result<CellCensus> {
    let n = structure.num_minimal();
    let mut counts = BTreeMap::new();
    for p in 0..structure.m() {
        *counts.entry(structure.membership_pattern(p)?.bits()).or_insert(0) += 1;
    }
    CellCensus::new(n, counts)
}
