//! Linear secret sharing over the two-element field.
//!
//! A [`LinearScheme`] acts on a uniform seed `w ∈ {0,1}^d`: the secret is
//! `K w` and participant `p` receives `S_p w`.

mod io;
mod share;
mod threshold;
mod transfer;
mod verify;

use serde::{Deserialize, Serialize};

use crate::gf2::{BitMatrix, SolutionSpace};
use crate::structures::{members, Subset};
use crate::{Error, Rational, Result};

pub use io::{scheme_from_json, scheme_to_json, SchemeFile, ShareEntry, Transcript};
pub use share::{deal, deal_with_free, reconstruct, Dealer};
pub use threshold::{kofk_additive, parity_shadows};
pub use transfer::{expand_to_universal, restrict_to_normalized, Restricted};
pub use verify::{brute_force_verify, share_histograms, verify_perfect, Method, PerfectnessReport, BRUTE_FORCE_SEED_CAP};

/// A labelled range of seed coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedBlock {
    pub label: String,
    pub offset: usize,
    pub len: usize,
}

impl SeedBlock {
    pub fn new(label: impl Into<String>, offset: usize, len: usize) -> Self {
        SeedBlock { label: label.into(), offset, len }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearScheme {
    seed_dim: usize,
    secret_map: BitMatrix,
    share_maps: Vec<BitMatrix>,
    manifest: Vec<SeedBlock>,
}

impl LinearScheme {
    /// Validates dimensions, full row rank of the secret map, and that the
    /// manifest (if nonempty) tiles the seed in order.
    pub fn new(secret_map: BitMatrix, share_maps: Vec<BitMatrix>, manifest: Vec<SeedBlock>) -> Result<Self> {
        let s = Self::new_unchecked(secret_map, share_maps, manifest)?;
        if s.secret_map.rows() == 0 {
            return Err(Error::InvalidArgument("secret must have at least one bit".into()));
        }
        if s.secret_map.rank() != s.secret_map.rows() {
            return Err(Error::InvalidArgument("secret map lacks full row rank".into()));
        }
        Ok(s)
    }

    /// Like [`LinearScheme::new`] without the rank computation.
    pub(crate) fn new_unchecked(
        secret_map: BitMatrix,
        share_maps: Vec<BitMatrix>,
        manifest: Vec<SeedBlock>,
    ) -> Result<Self> {
        let d = secret_map.cols();
        if let Some(p) = share_maps.iter().position(|m| m.cols() != d) {
            return Err(Error::DimensionMismatch(format!(
                "share map {p} has {} columns, seed has {d}",
                share_maps[p].cols()
            )));
        }
        if !manifest.is_empty() {
            let mut at = 0;
            for b in &manifest {
                if b.offset != at {
                    return Err(Error::InvalidArgument(format!("manifest block {:?} starts at {}, expected {at}", b.label, b.offset)));
                }
                at += b.len;
            }
            if at != d {
                return Err(Error::InvalidArgument(format!("manifest covers {at} of {d} seed bits")));
            }
        }
        Ok(LinearScheme { seed_dim: d, secret_map, share_maps, manifest })
    }

    pub fn seed_dim(&self) -> usize {
        self.seed_dim
    }

    pub fn secret_dim(&self) -> usize {
        self.secret_map.rows()
    }

    pub fn participants(&self) -> usize {
        self.share_maps.len()
    }

    pub fn secret_map(&self) -> &BitMatrix {
        &self.secret_map
    }

    pub fn share_map(&self, p: usize) -> &BitMatrix {
        &self.share_maps[p]
    }

    pub fn share_maps(&self) -> &[BitMatrix] {
        &self.share_maps
    }

    pub fn manifest(&self) -> &[SeedBlock] {
        &self.manifest
    }

    pub fn share_size(&self, p: usize) -> usize {
        self.share_maps[p].rows()
    }

    pub fn share_sizes(&self) -> Vec<usize> {
        self.share_maps.iter().map(BitMatrix::rows).collect()
    }

    pub fn max_share_size(&self) -> usize {
        self.share_maps.iter().map(BitMatrix::rows).max().unwrap_or(0)
    }

    /// Largest share size divided by the secret size.
    pub fn complexity(&self) -> Rational {
        Rational::new(self.max_share_size().into(), self.secret_dim().into())
    }

    /// Share rows of the members of `subset`, stacked in participant order.
    pub fn stacked(&self, subset: Subset) -> BitMatrix {
        let mut out = BitMatrix::zeros(0, self.seed_dim);
        for p in members(subset) {
            out.append_rows(&self.share_maps[p]).expect("share maps share the seed width");
        }
        out
    }

    /// True when the secret map is `[I_k | 0]`, i.e. the first `k` seed bits are the secret.
    pub fn is_canonical(&self) -> bool {
        let k = self.secret_dim();
        self.seed_dim >= k && self.secret_map == BitMatrix::identity(k).widen(self.seed_dim, 0)
    }

    /// An equivalent scheme whose seed starts with the secret.
    ///
    /// Substitutes `w = R s + N z` with `R` a right inverse and `N` a kernel
    /// basis of the secret map. Share distributions are unchanged.
    pub fn canonicalize(&self) -> Result<LinearScheme> {
        if self.is_canonical() {
            return Ok(self.clone());
        }
        let k = self.secret_dim();
        let d = self.seed_dim;
        let sol = SolutionSpace::new(&self.secret_map)?;
        let mut change = BitMatrix::zeros(d, d);
        change.xor_block(0, 0, &sol.right_inverse());
        change.xor_block(0, k, &sol.kernel());
        let share_maps = self.share_maps.iter().map(|m| m.mul(&change)).collect::<Result<Vec<_>>>()?;
        let manifest = vec![SeedBlock::new("secret", 0, k), SeedBlock::new("randomness", k, d - k)];
        LinearScheme::new_unchecked(BitMatrix::identity(k).widen(d, 0), share_maps, manifest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalize_moves_secret_to_front() {
        // secret = w0 + w1, share = w1
        let k = BitMatrix::parse_rows(2, &["11"]).unwrap();
        let s = LinearScheme::new(k, vec![BitMatrix::parse_rows(2, &["01"]).unwrap()], vec![]).unwrap();
        assert!(!s.is_canonical());
        let c = s.canonicalize().unwrap();
        assert!(c.is_canonical());
        assert_eq!(c.share_sizes(), vec![1]);
        assert!(c.share_map(0).get(0, 1));
    }

    #[test]
    fn rejects_rank_deficient_secret() {
        let k = BitMatrix::parse_rows(2, &["11", "11"]).unwrap();
        assert!(LinearScheme::new(k, vec![], vec![]).is_err());
    }
}
