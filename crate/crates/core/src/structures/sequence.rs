//! Structures built from an independent sequence over a small base set `X`.

use super::{full_set, subset_of, AccessStructure, Subset, MAX_PARTICIPANTS};
use crate::bounds::Certificate;
use crate::{Error, Result};

/// Largest `n` accepted by the sequence constructions.
pub const MAX_SEQUENCE_SETS: usize = 112;

/// Proper subsets of the low `k` bits, non-increasing in cardinality; equal
/// cardinalities in ascending mask order. Ends with the empty set.
pub fn decreasing_proper_subsets(k: usize) -> Vec<Subset> {
    let full = full_set(k);
    let mut v: Vec<Subset> = (0..full).collect();
    v.sort_by_key(|&s| (std::cmp::Reverse(s.count_ones()), s));
    v
}

/// Smallest `k` with `n ≤ 2^k - 1`.
pub fn theorem7_k(n: usize) -> usize {
    let mut k = 1;
    while (1usize << k) - 1 < n {
        k += 1;
    }
    k
}

/// Smallest `k` with `n ≤ 2^k`.
pub fn sequence_k(n: usize) -> usize {
    let mut k = 0;
    while 1usize << k < n {
        k += 1;
    }
    k.max(1)
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("sequence structures need n >= 2, got {n}")));
    }
    if n > MAX_SEQUENCE_SETS {
        return Err(Error::cap("n for sequence structures", n, MAX_SEQUENCE_SETS));
    }
    Ok(())
}

/// Minimal sets `B_{i+1} C_i`, `i < len`, with `X = {0..k}` and `b_i = k + i - 1`.
fn chain_sets(k: usize, len: usize) -> (Vec<Subset>, Vec<usize>, Vec<Subset>) {
    let cs = decreasing_proper_subsets(k);
    let b: Vec<usize> = (k..k + len).collect();
    let c: Vec<Subset> = cs[..len].to_vec();
    let sets = (0..len).map(|i| subset_of(b[..=i].iter().copied()) | c[i]).collect();
    (sets, b, c)
}

/// The `n`-set structure of the classical independent-sequence construction.
///
/// Participants `0..k` are `a_1..a_k` (the base set `X`), participants
/// `k..k+n` are `b_1..b_n`, and the minimal sets are `B_{i+1} C_i` for `i < n`.
/// The returned certificate uses `A_0 = X`. Note that `X` is not qualified in
/// this structure, so [`crate::bounds::check_certificate`] rejects it with
/// [`crate::CertCondition::BaseQualified`]; see
/// [`independent_sequence_structure`] for a variant whose certificate is valid.
pub fn theorem7_structure(n: usize) -> Result<(AccessStructure, Certificate)> {
    check_n(n)?;
    let k = theorem7_k(n);
    let (sets, b, c) = chain_sets(k, n);
    let s = AccessStructure::new(k + n, &sets)?;
    debug_assert_eq!(s.num_minimal(), n);
    Ok((s, Certificate::new(full_set(k), b, c)))
}

/// An `n`-set structure whose independent-sequence certificate checks.
///
/// `X = {a_1..a_k}` is itself a minimal set, the remaining `n - 1` minimal sets
/// are `B_{i+1} C_i`, and `k` is the smallest value with `n ≤ 2^k`. The
/// certificate `(X, b_1..b_{n-1}, C_0..C_{n-2})` proves complexity at least
/// `(n - 1) / k`.
pub fn independent_sequence_structure(n: usize) -> Result<(AccessStructure, Certificate)> {
    check_n(n)?;
    let k = sequence_k(n);
    let (mut sets, b, c) = chain_sets(k, n - 1);
    sets.push(full_set(k));
    let m = k + n - 1;
    debug_assert!(m <= MAX_PARTICIPANTS);
    let s = AccessStructure::new(m, &sets)?;
    debug_assert_eq!(s.num_minimal(), n);
    Ok((s, Certificate::new(full_set(k), b, c)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_values() {
        assert_eq!(theorem7_k(2), 2);
        assert_eq!(theorem7_k(3), 2);
        assert_eq!(theorem7_k(4), 3);
        assert_eq!(theorem7_k(8), 4);
        assert_eq!(theorem7_k(63), 6);
        assert_eq!(theorem7_k(64), 7);
        assert_eq!(sequence_k(2), 1);
        assert_eq!(sequence_k(4), 2);
        assert_eq!(sequence_k(5), 3);
        assert_eq!(sequence_k(64), 6);
    }

    #[test]
    fn decreasing_order_for_two() {
        assert_eq!(decreasing_proper_subsets(2), vec![0b01, 0b10, 0b00]);
        let v = decreasing_proper_subsets(3);
        assert_eq!(v.len(), 7);
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                assert!(v[i] & !v[j] != 0, "C_{i} must not be a subset of C_{j}");
            }
        }
    }

    #[test]
    fn theorem7_small_shapes() {
        let (s, cert) = theorem7_structure(2).unwrap();
        // a_1 = 0, a_2 = 1, b_1 = 2, b_2 = 3
        assert_eq!(s.minimal_sets(), &[0b0101, 0b1110]);
        assert_eq!(cert.a0, 0b11);
        let (s3, _) = theorem7_structure(3).unwrap();
        assert_eq!(s3.minimal_sets(), &[0b00101, 0b01110, 0b11100]);
    }

    #[test]
    fn theorem7_chain_properties() {
        for n in 2..=64 {
            let (s, cert) = theorem7_structure(n).unwrap();
            assert_eq!(s.num_minimal(), n);
            let mut bset: Subset = 0;
            for i in 0..n {
                let bc = bset | cert.c[i];
                assert!(!s.is_qualified(bc), "B_{i}C_{i} independent for n={n}");
                bset |= 1 << cert.b[i];
                assert!(s.is_qualified(bset | cert.c[i]));
            }
            assert!(!s.is_qualified(cert.a0));
        }
    }

    #[test]
    fn corrected_structure_has_qualified_base() {
        for n in 2..=64 {
            let (s, cert) = independent_sequence_structure(n).unwrap();
            assert_eq!(s.num_minimal(), n);
            assert!(s.is_qualified(cert.a0));
            assert_eq!(cert.b.len(), n - 1);
        }
    }
}
