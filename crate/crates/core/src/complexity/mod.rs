//! The share-size function `f_n(i)`, its maximum, and the `n/e` estimates.
//!
//! `h(n)` follows the convention `h(n) = Σ_{0<j<n} 1/j`, so `h(1) = 0` and the
//! usual harmonic number `H_n` equals `h(n + 1)`. With it,
//! `f_n(i) = (n - i)(h(n) - h(n - i))` for `0 ≤ i < n` and `f_n(n) = 1`.

mod asymptotic;
mod harmonic;

pub use asymptotic::{
    argmax_estimate, argmax_float, argmax_validated, inv_e_bracket, ne_bound_check, ne_scan, tail_sum_cmp_one,
    NeRow, EXACT_NE_CAP,
};
pub use harmonic::{f_closed, f_recursive, f_recursive_table, harmonic, sigma_upper, sigma_upper_scan, HarmonicTable, SIGMA_EXACT_CAP};
