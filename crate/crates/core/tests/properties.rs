use proptest::prelude::*;
use universal_sharing::gf2::{BitMatrix, BitVector};
use universal_sharing::schemes::{brute_force_verify, deal_with_free, reconstruct, verify_perfect, LinearScheme, SeedBlock};
use universal_sharing::structures::{full_set, AccessStructure};
use universal_sharing::Error;

fn matrix(rows: usize, cols: usize, words: &[u64]) -> BitMatrix {
    let vs: Vec<BitVector> = (0..rows)
        .map(|r| BitVector::from_bools(&(0..cols).map(|c| words[r] >> c & 1 == 1).collect::<Vec<_>>()))
        .collect();
    BitMatrix::from_rows(cols, &vs).unwrap()
}

/// A random linear scheme (secret of full rank) with a random structure on the same participants.
fn scheme_and_structure() -> impl Strategy<Value = (LinearScheme, AccessStructure)> {
    (1usize..=4, 1usize..=8, 1usize..=2).prop_flat_map(|(m, d, k)| {
        let k = k.min(d);
        let words = proptest::collection::vec(any::<u64>(), k + 3 * m);
        let sizes = proptest::collection::vec(0usize..=3, m);
        let sets = proptest::collection::vec(1u128..(1 << m), 1..4);
        (words, sizes, sets).prop_filter_map("secret map must have full rank", move |(w, sizes, sets)| {
            let secret = matrix(k, d, &w[..k]);
            let shares: Vec<BitMatrix> =
                sizes.iter().enumerate().map(|(p, &s)| matrix(s, d, &w[k + 3 * p..k + 3 * p + s])).collect();
            let scheme = LinearScheme::new(secret, shares, vec![SeedBlock::new("seed", 0, d)]).ok()?;
            Some((scheme, AccessStructure::new(m, &sets).unwrap()))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn rank_and_brute_force_verdicts_agree((scheme, structure) in scheme_and_structure()) {
        let rank = verify_perfect(&scheme, &structure).unwrap();
        let brute = brute_force_verify(&scheme, &structure).unwrap();
        prop_assert!(rank.agrees_with(&brute), "rank {:?} brute {:?}", rank, brute);
    }

    #[test]
    fn full_set_reconstructs_every_deal((scheme, _) in scheme_and_structure(), s in any::<u64>(), z in any::<u64>()) {
        let k = scheme.secret_dim();
        let secret = BitVector::from_bools(&(0..k).map(|i| s >> i & 1 == 1).collect::<Vec<_>>());
        let free_dim = scheme.seed_dim() - k;
        let free = BitVector::from_bools(&(0..free_dim).map(|i| z >> i & 1 == 1).collect::<Vec<_>>());
        let shares = deal_with_free(&scheme, &secret, &free).unwrap();
        match reconstruct(&scheme, full_set(scheme.participants()), &shares) {
            Ok(got) => prop_assert_eq!(got, secret),
            Err(Error::NotQualified) => {}
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn rank_is_transpose_invariant(words in proptest::collection::vec(any::<u64>(), 1..12), cols in 1usize..40) {
        let m = matrix(words.len(), cols, &words);
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert!(m.rank() <= words.len().min(cols));
    }
}
