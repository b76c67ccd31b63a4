//! Share-size profile f_n(i) and its maximum for small n.
//!
//! Run with `cargo run --example complexity_profile -- 8`.

use universal_sharing::complexity::{argmax_estimate, sigma_upper, HarmonicTable};
use universal_sharing::fraction_string;

fn main() -> universal_sharing::Result<()> {
    let n_max: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let table = HarmonicTable::new(n_max)?;
    for n in 2..=n_max {
        let row: Vec<String> = (1..=n).map(|i| table.f(n, i).map(|f| fraction_string(&f))).collect::<Result<_, _>>()?;
        let (max, i) = sigma_upper(n)?;
        println!(
            "n={n:<3} f = [{}]  max {} at i={i} (estimated maximizer {:.2})",
            row.join(", "),
            fraction_string(&max),
            argmax_estimate(n)
        );
    }
    Ok(())
}
