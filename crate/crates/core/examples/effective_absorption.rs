//! The nonlinear correction α_eff − α over a range of α for a 3.85 cm cell.

use narrowline::engine::effective_absorption;

fn main() -> narrowline::Result<()> {
    let x = 3.85;
    println!(
        "{:>10} {:>12} {:>12} {:>12}",
        "alpha", "b=0.01", "b=0.1", "b=1"
    );
    for k in -12..=1 {
        let alpha = 10f64.powi(k);
        print!("{alpha:>10.0e}");
        for b in [0.01, 0.1, 1.0] {
            print!(" {:>12.5e}", effective_absorption(alpha, b, x)? - alpha);
        }
        println!();
    }
    Ok(())
}
