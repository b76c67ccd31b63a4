//! Moves a scheme between a universal structure and its normalized form.
//!
//! A structure with two participants in one cell and one in the all-in cell is
//! expanded from U*_3; the result is checked and restricted back.

use universal_sharing::builder::build;
use universal_sharing::schemes::{expand_to_universal, restrict_to_normalized, verify_perfect};
use universal_sharing::fraction_string;
use universal_sharing::structures::{CellCensus, Pattern};

fn main() -> universal_sharing::Result<()> {
    let (scheme, _) = build(3)?;
    let mut counts: Vec<(u64, usize)> = (1..7).map(|bits| (bits, 1)).collect();
    counts[2].1 = 2;
    counts.push((Pattern::new(3, 0b111).bits(), 1));
    let census = CellCensus::new(3, counts)?;
    let (structure, patterns) = census.realize()?;
    let expanded = expand_to_universal(&scheme, &census)?;
    println!("expanded: {} participants, complexity {}", expanded.participants(), fraction_string(&expanded.complexity()));
    for (p, pat) in patterns.iter().enumerate() {
        println!("  participant {p} in cell {pat}: {} bits", expanded.share_size(p));
    }
    println!("perfect: {}", verify_perfect(&expanded, &structure)?.is_perfect());
    let restricted = restrict_to_normalized(&expanded, &census)?;
    println!("restricted back: effective complexity {}", fraction_string(&restricted.effective_complexity()));
    Ok(())
}
