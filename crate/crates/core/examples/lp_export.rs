//! Writes the U*_3 entropy LP in CPLEX LP format, reads it back, and checks an
//! interior-point solution with the external-solution loader.

use universal_sharing::bounds::{entropy_lp, format_solution, load_solution, parse_lp, solve_float, write_lp};
use universal_sharing::structures::universal_normalized;

fn main() -> universal_sharing::Result<()> {
    let model = entropy_lp(&universal_normalized(3)?)?;
    let mut text = Vec::new();
    write_lp(&model, &mut text)?;
    let text = String::from_utf8(text).expect("LP text is ASCII");
    println!("{} bytes; first lines:", text.len());
    for line in text.lines().take(6) {
        println!("  {line}");
    }
    let parsed = parse_lp(&text)?;
    println!("round trip identical: {}", parsed == model);
    let float = solve_float(&model)?;
    let checked = load_solution(&model, &format_solution(&model, &float.x))?;
    println!("float optimum {:.9}, largest violation {:e}", checked.objective, checked.max_violation);
    Ok(())
}
