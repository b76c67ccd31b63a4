//! Deals a secret with the U*_3 scheme and recovers it from a minimal qualified set.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use universal_sharing::builder::build;
use universal_sharing::gf2::BitVector;
use universal_sharing::schemes::{deal, reconstruct};
use universal_sharing::structures::{members, universal_normalized};
use universal_sharing::Error;

fn main() -> universal_sharing::Result<()> {
    let (scheme, _) = build(3)?;
    let structure = universal_normalized(3)?;
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let secret = BitVector::parse("10")?;
    let shares = deal(&scheme, &secret, &mut rng)?;
    for (p, s) in shares.iter().enumerate() {
        println!("participant {p}: {s}");
    }
    for &set in structure.minimal_sets() {
        let picked: Vec<BitVector> = members(set).map(|p| shares[p].clone()).collect();
        let got = reconstruct(&scheme, set, &picked)?;
        println!("{:?} recovers {got}", members(set).collect::<Vec<_>>());
    }
    // a single participant learns nothing
    match reconstruct(&scheme, 1, &shares[..1]) {
        Err(Error::NotQualified) => println!("{{0}} alone cannot recover the secret"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
