//! Access structures over at most [`MAX_PARTICIPANTS`] participants.
//!
//! Participants are 0-based indices and subsets are bitmasks ([`Subset`]). An
//! [`AccessStructure`] stores the ⊆-minimal qualified sets in canonical order:
//! ascending by cardinality, ties broken by the numeric mask value. The `i`-th set
//! in that order is `A_{i+1}`, and bit `i` of a [`Pattern`] refers to it.

mod census;
mod independent;
mod sequence;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use census::{cell_census, CellCensus, Pattern, MAX_PATTERN_SETS};
pub use independent::brute_force_maximal_independent_sets;
pub use sequence::{
    decreasing_proper_subsets, independent_sequence_structure, sequence_k, theorem7_k, theorem7_structure,
    MAX_SEQUENCE_SETS,
};

/// Bitmask over participant indices.
pub type Subset = u128;

/// Hard cap on the participant count (mask width minus headroom).
pub const MAX_PARTICIPANTS: usize = 126;

/// Largest participant count for which exhaustive subset scans are used.
pub const BRUTE_FORCE_PARTICIPANTS: usize = 16;

/// Builds a mask from participant indices.
pub fn subset_of<I: IntoIterator<Item = usize>>(members: I) -> Subset {
    members.into_iter().fold(0, |acc, p| acc | (1u128 << p))
}

/// Iterates the members of a mask in increasing order.
pub fn members(mut s: Subset) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let p = s.trailing_zeros() as usize;
            s &= s - 1;
            Some(p)
        }
    })
}

#[inline]
pub fn is_subset(a: Subset, b: Subset) -> bool {
    a & !b == 0
}

/// Mask with the low `m` bits set.
pub fn full_set(m: usize) -> Subset {
    if m >= 128 {
        Subset::MAX
    } else {
        (1u128 << m) - 1
    }
}

fn canonical_key(s: &Subset) -> (u32, Subset) {
    (s.count_ones(), *s)
}

/// Returns the ⊆-minimal members of `sets`, deduplicated, in canonical order.
pub fn minimal_antichain(sets: &[Subset]) -> Result<Vec<Subset>> {
    if sets.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(pos) = sets.iter().position(|&s| s == 0) {
        return Err(Error::EmptyMember(pos));
    }
    let mut sorted = sets.to_vec();
    sorted.sort_by_key(canonical_key);
    sorted.dedup();
    let mut out: Vec<Subset> = Vec::with_capacity(sorted.len());
    for s in sorted {
        // smaller cardinalities come first, so only earlier sets can be subsets
        if !out.iter().any(|&t| is_subset(t, s)) {
            out.push(s);
        }
    }
    Ok(out)
}

/// Participant count plus the antichain of minimal qualified sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AccessStructure {
    m: usize,
    minimal_sets: Vec<Subset>,
}

impl AccessStructure {
    /// Builds a structure, canonicalizing `sets` to their minimal elements.
    pub fn new(m: usize, sets: &[Subset]) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("participant count must be at least 1".into()));
        }
        if m > MAX_PARTICIPANTS {
            return Err(Error::cap("participants", m, MAX_PARTICIPANTS));
        }
        let full = full_set(m);
        if let Some(pos) = sets.iter().position(|&s| !is_subset(s, full)) {
            return Err(Error::InvalidArgument(format!(
                "set at position {pos} mentions a participant outside 0..{m}"
            )));
        }
        Ok(AccessStructure { m, minimal_sets: minimal_antichain(sets)? })
    }

    /// Like [`AccessStructure::new`] but rejects input that is not already an antichain.
    pub fn new_strict(m: usize, sets: &[Subset]) -> Result<Self> {
        let s = Self::new(m, sets)?;
        if s.minimal_sets.len() != sets.len() {
            let pos = sets
                .iter()
                .enumerate()
                .position(|(i, a)| {
                    sets.iter().enumerate().any(|(j, b)| i != j && is_subset(*b, *a) && (b != a || j < i))
                })
                .unwrap_or(0);
            return Err(Error::NotAntichain(pos));
        }
        Ok(s)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn minimal_sets(&self) -> &[Subset] {
        &self.minimal_sets
    }

    pub fn num_minimal(&self) -> usize {
        self.minimal_sets.len()
    }

    pub fn participants(&self) -> Subset {
        full_set(self.m)
    }

    /// True iff `subset` contains some minimal qualified set.
    pub fn is_qualified(&self, subset: Subset) -> bool {
        self.minimal_sets.iter().any(|&a| is_subset(a, subset))
    }

    /// Membership vector of participant `p` across the minimal sets.
    pub fn membership_pattern(&self, p: usize) -> Result<Pattern> {
        if self.num_minimal() > census::MAX_PATTERN_SETS {
            return Err(Error::cap("minimal sets for patterns", self.num_minimal(), census::MAX_PATTERN_SETS));
        }
        let bits = self
            .minimal_sets
            .iter()
            .enumerate()
            .filter(|(_, &a)| a >> p & 1 == 1)
            .fold(0u64, |acc, (i, _)| acc | (1 << i));
        Ok(Pattern::new(self.num_minimal(), bits))
    }

    /// Qualification status of every subset of the participants, indexed by mask.
    ///
    /// Monotone sweep: a subset is qualified iff it is a minimal set or dropping one
    /// of its members leaves a qualified set.
    pub fn qualification_table(&self) -> Result<Vec<bool>> {
        if self.m > 24 {
            return Err(Error::cap("participants for qualification table", self.m, 24));
        }
        let n = 1usize << self.m;
        let mut q = vec![false; n];
        for &a in &self.minimal_sets {
            q[a as usize] = true;
        }
        for s in 1..n {
            if q[s] {
                continue;
            }
            let mut rest = s;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                if q[s ^ bit] {
                    q[s] = true;
                    break;
                }
                rest ^= bit;
            }
        }
        Ok(q)
    }

    /// The ⊆-maximal unqualified subsets, in canonical order.
    pub fn maximal_independent_sets(&self) -> Result<Vec<Subset>> {
        independent::maximal_independent_sets(self)
    }
}

/// JSON form: `{"m": int, "minimal_sets": [[int,...],...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructureFile {
    pub m: usize,
    pub minimal_sets: Vec<Vec<usize>>,
}

impl From<&AccessStructure> for StructureFile {
    fn from(s: &AccessStructure) -> Self {
        StructureFile {
            m: s.m,
            minimal_sets: s.minimal_sets.iter().map(|&a| members(a).collect()).collect(),
        }
    }
}

impl StructureFile {
    pub fn into_structure(self, strict: bool) -> Result<AccessStructure> {
        if let Some(&p) = self.minimal_sets.iter().flatten().find(|&&p| p >= MAX_PARTICIPANTS) {
            return Err(Error::InvalidArgument(format!("participant index {p} out of range")));
        }
        let sets: Vec<Subset> = self.minimal_sets.iter().map(|v| subset_of(v.iter().copied())).collect();
        if strict {
            AccessStructure::new_strict(self.m, &sets)
        } else {
            AccessStructure::new(self.m, &sets)
        }
    }
}

/// Parses a structure from its JSON text.
pub fn structure_from_json(text: &str, strict: bool) -> Result<AccessStructure> {
    let f: StructureFile = serde_json::from_str(text)?;
    f.into_structure(strict)
}

pub fn structure_to_json(s: &AccessStructure) -> String {
    serde_json::to_string(&StructureFile::from(s)).expect("structure serializes")
}

/// Number of non-constant patterns on `n` sets, i.e. the participants of `U*_n`.
pub fn normalized_participants(n: usize) -> usize {
    (1usize << n) - 2
}

/// The normalized universal structure `U*_n`.
///
/// Participant `j` is the unique member of the cell with pattern `j + 1`, so the
/// participants enumerate the non-constant patterns in increasing order and
/// `A_i` collects the patterns with bit `i - 1` set.
pub fn universal_normalized(n: usize) -> Result<AccessStructure> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("universal structure needs n >= 2, got {n}")));
    }
    if n > 7 {
        return Err(Error::cap("n for U*_n", n, 7));
    }
    let m = normalized_participants(n);
    let sets: Vec<Subset> = (0..n)
        .map(|i| subset_of((0..m).filter(|&j| (j + 1) >> i & 1 == 1)))
        .collect();
    let s = AccessStructure::new(m, &sets)?;
    debug_assert_eq!(s.minimal_sets, sets, "construction order is canonical");
    Ok(s)
}
