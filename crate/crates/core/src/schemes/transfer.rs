//! Moving schemes between a normalized universal structure and any universal
//! structure with the same nonempty non-constant cells.

use super::{LinearScheme, SeedBlock};
use crate::gf2::BitMatrix;
use crate::structures::{normalized_participants, CellCensus, Pattern};
use crate::{Error, Rational, Result};

fn check_census(census: &CellCensus) -> Result<usize> {
    let n = census.n();
    if !(2..=20).contains(&n) {
        return Err(Error::InvalidArgument(format!("census over {n} sets is out of range")));
    }
    if !census.covers_nonconstant() {
        let top = (1u64 << n) - 1;
        let empty = (1..top).find(|&b| census.count(b) == 0).unwrap_or(0);
        return Err(Error::InvalidArgument(format!(
            "non-constant cell {} is empty",
            Pattern::new(n, empty)
        )));
    }
    Ok(n)
}

/// Appends `len` seed bits under `label`; returns their offset.
fn grow(manifest: &mut Vec<SeedBlock>, d: &mut usize, label: String, len: usize) -> usize {
    let at = *d;
    if len > 0 {
        manifest.push(SeedBlock::new(label, at, len));
        *d += len;
    }
    at
}

/// Share maps for an additive split of `value` (rows over the final seed) among
/// `count` members, using fresh blocks starting at `first`.
fn split(value: &BitMatrix, count: usize, first: usize, d: usize) -> Vec<BitMatrix> {
    let size = value.rows();
    let id = BitMatrix::identity(size);
    let mut out: Vec<BitMatrix> = (0..count - 1).map(|i| id.widen(d, first + i * size)).collect();
    let mut last = value.clone();
    for i in 0..count - 1 {
        last.xor_block(0, first + i * size, &id);
    }
    out.push(last);
    out
}

/// Turns a scheme for `U*_n` into one for the universal structure described by `census`.
///
/// If the all-one cell is inhabited the secret is split as `s = r ⊕ s_1`: `r`
/// is shared additively inside the all-one cell and `s_1` goes to the
/// normalized scheme. Each non-constant cell's normalized share is re-shared
/// additively among the cell's members (singletons keep it as is), and members
/// of the all-zero cell get empty shares. The output is canonical and its
/// participants follow [`CellCensus::participant_patterns`].
pub fn expand_to_universal(scheme: &LinearScheme, census: &CellCensus) -> Result<LinearScheme> {
    let n = check_census(census)?;
    if scheme.participants() != normalized_participants(n) {
        return Err(Error::DimensionMismatch(format!(
            "scheme has {} participants, U*_{n} has {}",
            scheme.participants(),
            normalized_participants(n)
        )));
    }
    let inner = scheme.canonicalize()?;
    let k = inner.secret_dim();
    let d0 = inner.seed_dim();

    let mut manifest = vec![SeedBlock::new("secret", 0, k)];
    let mut d = k;
    grow(&mut manifest, &mut d, "inner".into(), d0 - k);
    let ones = census.all_one_count();
    let mask_at = (ones > 0).then(|| grow(&mut manifest, &mut d, "mask".into(), k));
    let mut plan: Vec<(Pattern, usize, usize)> = Vec::new();
    for (pat, count) in census.nonempty() {
        let size = if pat.is_all_zero() {
            0
        } else if pat.is_all_one() {
            k
        } else {
            inner.share_size(pat.bits() as usize - 1)
        };
        let first = if count > 1 && size > 0 {
            grow(&mut manifest, &mut d, format!("cell {pat}"), (count - 1) * size)
        } else {
            d
        };
        plan.push((pat, count, first));
    }

    let mut share_maps = Vec::with_capacity(census.total());
    for (pat, count, first) in plan {
        if pat.is_all_zero() {
            share_maps.extend(std::iter::repeat_n(BitMatrix::zeros(0, d), count));
            continue;
        }
        let value = if pat.is_all_one() {
            BitMatrix::identity(k).widen(d, mask_at.expect("all-one cell implies a mask"))
        } else {
            // inner share S (s_1, z) with s_1 = s ⊕ mask
            let src = inner.share_map(pat.bits() as usize - 1);
            let mut v = src.widen(d, 0);
            if let Some(at) = mask_at {
                v.xor_block(0, at, &src.column_block(0, k));
            }
            v
        };
        share_maps.extend(split(&value, count, first, d));
    }
    LinearScheme::new_unchecked(BitMatrix::identity(k).widen(d, 0), share_maps, manifest)
}

/// A scheme for `U*_n` obtained by publishing the shares of all but one
/// member of each non-constant cell.
#[derive(Debug, Clone)]
pub struct Restricted {
    /// Each representative's map is its own rows followed by all published rows.
    pub scheme: LinearScheme,
    /// Row count of each representative's own share.
    pub own_rows: Vec<usize>,
}

impl Restricted {
    /// Largest own share divided by the secret size; published rows are free.
    pub fn effective_complexity(&self) -> Rational {
        let max = self.own_rows.iter().copied().max().unwrap_or(0);
        Rational::new(max.into(), self.scheme.secret_dim().into())
    }
}

/// Restricts a scheme on the census structure to `U*_n`.
///
/// The first member of each non-constant cell is kept; every other
/// participant's share rows are appended to each representative's map.
pub fn restrict_to_normalized(scheme: &LinearScheme, census: &CellCensus) -> Result<Restricted> {
    let n = check_census(census)?;
    let pats = census.participant_patterns();
    if pats.len() != scheme.participants() {
        return Err(Error::DimensionMismatch(format!(
            "scheme has {} participants, census has {}",
            scheme.participants(),
            pats.len()
        )));
    }
    let top = (1u64 << n) - 1;
    let mut reps = vec![usize::MAX; top as usize - 1];
    let mut public = BitMatrix::zeros(0, scheme.seed_dim());
    for (p, pat) in pats.iter().enumerate() {
        let b = pat.bits();
        if b != 0 && b != top && reps[b as usize - 1] == usize::MAX {
            reps[b as usize - 1] = p;
        } else {
            public.append_rows(scheme.share_map(p))?;
        }
    }
    let own_rows: Vec<usize> = reps.iter().map(|&p| scheme.share_size(p)).collect();
    let share_maps = reps
        .iter()
        .map(|&p| BitMatrix::vstack(&[scheme.share_map(p), &public]))
        .collect::<Result<Vec<_>>>()?;
    let out = LinearScheme::new_unchecked(scheme.secret_map().clone(), share_maps, scheme.manifest().to_vec())?;
    Ok(Restricted { scheme: out, own_rows })
}
