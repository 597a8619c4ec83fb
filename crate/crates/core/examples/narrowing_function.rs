//! Tabulate Γ(Δ) for the builtin parameter sets.
//!
//! ```text
//! cargo run --example narrowing_function [gamma_c/gamma_s]
//! ```

use narrowline::narrowing::{NarrowingParams, NarrowingShape};

fn main() -> narrowline::Result<()> {
    let ratio: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("ratio must be a number"))
        .unwrap_or(1.0);
    let gamma_s = 4.7028;
    let sets = [
        ("nu3", NarrowingParams::nu3()),
        ("nu2 Q", NarrowingParams::nu2_q_branch()),
        ("3nu3 P", NarrowingParams::three_nu3_p_branch()),
        ("3nu3 R", NarrowingParams::three_nu3_r_branch()),
    ];
    let shapes = sets
        .iter()
        .map(|(_, p)| NarrowingShape::above_critical(ratio * gamma_s, gamma_s, p))
        .collect::<Result<Vec<_>, _>>()?;

    print!("{:>8}", "D/gs");
    for (name, _) in &sets {
        print!(" {name:>9}");
    }
    println!();
    for k in 0..=40 {
        let x = 0.25 * k as f64;
        print!("{x:>8.2}");
        for s in &shapes {
            print!(" {:>9.5}", s.eval(x * gamma_s));
        }
        println!();
    }
    Ok(())
}
