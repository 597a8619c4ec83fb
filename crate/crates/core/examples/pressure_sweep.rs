//! Peak narrowed/Lorentzian ratio of the comb as the helium pressure crosses
//! the critical pressure.

use narrowline::cli::peak_summary;
use narrowline::scenario::{builtin, RunOptions};

fn main() -> narrowline::Result<()> {
    let base = builtin("comb_demo").expect("builtin comb");
    println!(
        "{:>8} {:>13} {:>13} {:>7}",
        "p/atm", "peak lorentz", "peak narrowed", "ratio"
    );
    for p in [25.0, 50.0, 100.0, 135.8, 200.0, 400.0, 657.1] {
        let mut s = base.clone();
        s.apply_override("pressure", &p.to_string())?;
        let summary = peak_summary(&s.run(&RunOptions::default())?);
        println!(
            "{p:>8.1} {:>13.5e} {:>13.5e} {:>7.3}",
            summary.peak_lorentz, summary.peak_narrowed, summary.peak_ratio
        );
    }
    Ok(())
}
