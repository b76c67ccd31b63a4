use rand::RngCore;

use super::LinearScheme;
use crate::gf2::{BitVector, EchelonBasis, SolutionSpace};
use crate::structures::{members, Subset};
use crate::{Error, Result};

/// Samples seeds consistent with a chosen secret; reusable across deals.
#[derive(Debug, Clone)]
pub struct Dealer<'a> {
    scheme: &'a LinearScheme,
    space: SolutionSpace,
}

impl<'a> Dealer<'a> {
    pub fn new(scheme: &'a LinearScheme) -> Result<Self> {
        Ok(Dealer { scheme, space: SolutionSpace::new(scheme.secret_map())? })
    }

    /// Number of free seed bits once the secret is fixed.
    pub fn free_dim(&self) -> usize {
        self.space.free_dim()
    }

    fn check_secret(&self, secret: &BitVector) -> Result<()> {
        if secret.len() != self.scheme.secret_dim() {
            return Err(Error::DimensionMismatch(format!(
                "secret has {} bits, scheme expects {}",
                secret.len(),
                self.scheme.secret_dim()
            )));
        }
        Ok(())
    }

    /// The seed with the given free coordinates.
    pub fn seed(&self, secret: &BitVector, free: &BitVector) -> Result<BitVector> {
        self.check_secret(secret)?;
        self.space.solve(secret, free)
    }

    pub fn shares_for_seed(&self, seed: &BitVector) -> Result<Vec<BitVector>> {
        self.scheme.share_maps().iter().map(|m| m.mul_vec(seed)).collect()
    }

    pub fn deal_with_free(&self, secret: &BitVector, free: &BitVector) -> Result<Vec<BitVector>> {
        self.shares_for_seed(&self.seed(secret, free)?)
    }

    /// Draws the free coordinates uniformly, then evaluates every share map.
    pub fn deal<R: RngCore + ?Sized>(&self, secret: &BitVector, rng: &mut R) -> Result<Vec<BitVector>> {
        self.check_secret(secret)?;
        let free = BitVector::random(self.free_dim(), rng);
        self.deal_with_free(secret, &free)
    }
}

/// Deals `secret` with fresh randomness from `rng`.
pub fn deal<R: RngCore + ?Sized>(scheme: &LinearScheme, secret: &BitVector, rng: &mut R) -> Result<Vec<BitVector>> {
    Dealer::new(scheme)?.deal(secret, rng)
}

/// Deals `secret` with the free seed coordinates fixed to `free`.
pub fn deal_with_free(scheme: &LinearScheme, secret: &BitVector, free: &BitVector) -> Result<Vec<BitVector>> {
    Dealer::new(scheme)?.deal_with_free(secret, free)
}

/// Recovers the secret from the shares of `subset`, given in increasing participant order.
///
/// The shares are first checked for consistency with some seed, then every
/// secret row must lie in the span of the subset's share rows.
pub fn reconstruct(scheme: &LinearScheme, subset: Subset, shares: &[BitVector]) -> Result<BitVector> {
    let ids: Vec<usize> = members(subset).collect();
    if ids.len() != shares.len() {
        return Err(Error::DimensionMismatch(format!("{} shares for {} participants", shares.len(), ids.len())));
    }
    if let Some(&p) = ids.iter().find(|&&p| p >= scheme.participants()) {
        return Err(Error::InvalidArgument(format!("participant {p} out of range")));
    }
    let d = scheme.seed_dim();
    let stride = (d + 1).div_ceil(64);
    let widened = |words: &[u64], tag: bool| {
        let mut v = words.to_vec();
        v.resize(stride, 0);
        if tag {
            v[d / 64] |= 1 << (d % 64);
        }
        v
    };
    let tag_of = |v: &[u64]| v[d / 64] >> (d % 64) & 1 == 1;
    let mut basis = EchelonBasis::new(d + 1, d);
    for (&p, share) in ids.iter().zip(shares) {
        let map = scheme.share_map(p);
        if share.len() != map.rows() {
            return Err(Error::DimensionMismatch(format!(
                "share of participant {p} has {} bits, expected {}",
                share.len(),
                map.rows()
            )));
        }
        for r in 0..map.rows() {
            let mut v = widened(map.row_words(r), share.get(r));
            if basis.reduce(&mut v).is_none() {
                if tag_of(&v) {
                    return Err(Error::InconsistentShares);
                }
            } else {
                basis.insert(&v);
            }
        }
    }
    let k = scheme.secret_map();
    let mut secret = BitVector::zeros(k.rows());
    for r in 0..k.rows() {
        let mut v = widened(k.row_words(r), false);
        if basis.reduce(&mut v).is_some() {
            return Err(Error::NotQualified);
        }
        secret.set(r, tag_of(&v));
    }
    Ok(secret)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::kofk_additive;
    use crate::structures::full_set;

    #[test]
    fn zero_randomness_two_of_two() {
        let s = kofk_additive(2, 1).unwrap();
        let shares = deal_with_free(&s, &BitVector::parse("1").unwrap(), &BitVector::zeros(1)).unwrap();
        assert_eq!(shares.iter().map(|b| b.to_string()).collect::<Vec<_>>(), vec!["0", "1"]);
    }

    #[test]
    fn xor_of_all_shares() {
        let s = kofk_additive(3, 1).unwrap();
        let ones: Vec<BitVector> = (0..3).map(|_| BitVector::parse("1").unwrap()).collect();
        assert_eq!(reconstruct(&s, full_set(3), &ones).unwrap().to_string(), "1");
        assert!(matches!(reconstruct(&s, 0b011, &ones[..2]), Err(Error::NotQualified)));
    }

    #[test]
    fn inconsistency_is_detected() {
        // two participants both holding the secret
        let k = crate::gf2::BitMatrix::identity(1);
        let s = LinearScheme::new(k.clone(), vec![k.clone(), k], vec![]).unwrap();
        let bad = [BitVector::parse("0").unwrap(), BitVector::parse("1").unwrap()];
        assert!(matches!(reconstruct(&s, 0b11, &bad), Err(Error::InconsistentShares)));
    }
}
