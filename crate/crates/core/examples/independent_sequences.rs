//! Independent-sequence certificates and the bounds they give.

use universal_sharing::bounds::{certificate_bound, check_certificate, log_bound_holds};
use universal_sharing::fraction_string;
use universal_sharing::structures::{independent_sequence_structure, theorem7_structure};

fn main() -> universal_sharing::Result<()> {
    for n in [2, 3, 4, 5, 8, 16, 17, 64] {
        let (s, cert) = theorem7_structure(n)?;
        let classical = match check_certificate(&s, &cert) {
            Ok(len) => format!("valid, length {len}"),
            Err(e) => format!("rejected ({e})"),
        };
        let (s, cert) = independent_sequence_structure(n)?;
        let bound = certificate_bound(&s, &cert)?;
        println!(
            "n={n:<3} classical certificate {classical}; qualified-base certificate bound {} (>= n/(1+log2 n): {})",
            fraction_string(&bound),
            log_bound_holds(n, &bound)
        );
    }
    Ok(())
}
