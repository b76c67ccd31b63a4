//! Builds the recursive scheme for U*_n, prints its size trace and checks it.
//!
//! Run with `cargo run --release --example build_universal_scheme -- 4`.

use universal_sharing::builder::{build, size_profile};
use universal_sharing::complexity::f_closed;
use universal_sharing::fraction_string;
use universal_sharing::schemes::verify_perfect;
use universal_sharing::structures::universal_normalized;

fn main() -> universal_sharing::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let (scheme, trace) = build(n)?;
    println!("U*_{n}: {} participants, secret {} bits, seed {} bits", scheme.participants(), trace.secret_dim, trace.seed_dim);
    for step in &trace.steps {
        println!("  lift {} -> {}: seed {} bits", step.from_n, step.from_n + 1, step.seed_dim);
    }
    for (i, ratio) in size_profile(&trace) {
        println!("  class {i}: {} bits, ratio {} (f_{n}({i}) = {})", trace.class_size(i), fraction_string(&ratio), fraction_string(&f_closed(n, i)?));
    }
    let report = verify_perfect(&scheme, &universal_normalized(n)?)?;
    println!("perfect: {}", report.is_perfect());
    Ok(())
}
