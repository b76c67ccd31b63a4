use super::{LinearScheme, SeedBlock};
use crate::gf2::BitMatrix;
use crate::{Error, Result};

/// Additive `k`-out-of-`k` sharing of a `unit`-bit secret.
///
/// Seed layout: the secret, then `r_1..r_{k-1}`. Participant `i < k` receives
/// `r_i`; participant `k` receives `s ⊕ r_1 ⊕ … ⊕ r_{k-1}`.
pub fn kofk_additive(k: usize, unit: usize) -> Result<LinearScheme> {
    if k < 1 || unit < 1 {
        return Err(Error::InvalidArgument(format!("k-of-k sharing needs k >= 1 and unit >= 1, got k={k}, unit={unit}")));
    }
    let d = k * unit;
    let id = BitMatrix::identity(unit);
    let mut shares: Vec<BitMatrix> = (1..k).map(|i| id.widen(d, i * unit)).collect();
    let mut last = BitMatrix::zeros(unit, d);
    for i in 0..k {
        last.xor_block(0, i * unit, &id);
    }
    shares.push(last);
    let mut manifest = vec![SeedBlock::new("secret", 0, unit)];
    manifest.extend((1..k).map(|i| SeedBlock::new(format!("r{i}"), i * unit, unit)));
    LinearScheme::new_unchecked(id.widen(d, 0), shares, manifest)
}

/// Parity combiner: a secret of `n` blocks of `unit` bits, and `n + 1` shadows
/// `c_j = s_j` (`j ≤ n`), `c_{n+1} = s_1 ⊕ … ⊕ s_n`, any `n` of which recover it.
///
/// The result is a deterministic [`LinearScheme`] whose seed is the secret and
/// whose participants are the shadows.
pub fn parity_shadows(n: usize, unit: usize) -> Result<LinearScheme> {
    if n < 1 || unit < 1 {
        return Err(Error::InvalidArgument(format!("parity combiner needs n >= 1 and unit >= 1, got n={n}, unit={unit}")));
    }
    let d = n * unit;
    let id = BitMatrix::identity(unit);
    let mut shadows: Vec<BitMatrix> = (0..n).map(|j| id.widen(d, j * unit)).collect();
    let mut parity = BitMatrix::zeros(unit, d);
    for j in 0..n {
        parity.xor_block(0, j * unit, &id);
    }
    shadows.push(parity);
    let manifest = (0..n).map(|j| SeedBlock::new(format!("s{}", j + 1), j * unit, unit)).collect();
    LinearScheme::new_unchecked(BitMatrix::identity(d), shadows, manifest)
}
