//! Exact entropy-LP lower bounds for U*_2 and U*_3, with their certificates checked.

use universal_sharing::bounds::{entropy_lp, solve_exact, symmetry_reduce, verify_dual_certificate};
use universal_sharing::fraction_string;
use universal_sharing::structures::universal_normalized;

fn main() -> universal_sharing::Result<()> {
    for n in 2..=3 {
        let structure = universal_normalized(n)?;
        let model = entropy_lp(&structure)?;
        let reduction = symmetry_reduce(&model, &structure)?;
        let solution = solve_exact(&reduction.model)?;
        let lifted = reduction.lift_dual(&model, &solution.dual)?;
        let proven = verify_dual_certificate(&model, &lifted)?;
        println!(
            "U*_{n}: {} variables / {} rows, reduced to {} / {}; optimum {} ({} multipliers, re-checked on the full model: {})",
            model.num_vars(),
            model.num_rows(),
            reduction.model.num_vars(),
            reduction.model.num_rows(),
            fraction_string(&solution.value),
            lifted.multipliers.len(),
            fraction_string(&proven)
        );
    }
    Ok(())
}
