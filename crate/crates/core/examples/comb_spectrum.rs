//! The synthetic comb scenario: super-Lorentzian band centre, sub-Lorentzian
//! wings.

use narrowline::scenario::{builtin, RunOptions};

fn main() -> narrowline::Result<()> {
    let scenario = builtin("comb_demo").expect("builtin comb");
    let s = scenario.run(&RunOptions::default())?;
    for i in (0..s.len()).step_by(100) {
        let (l, n) = (s.alpha_lorentz[i], s.alpha_narrowed[i]);
        println!("{:>8.2} {l:>12.5e} {n:>12.5e} {:>7.3}", s.omega(i), n / l);
    }
    let peak = narrowline::cli::peak_summary(&s);
    println!(
        "peak at {:.2} cm-1: narrowed/lorentz = {:.3}",
        peak.omega_peak, peak.peak_ratio
    );
    Ok(())
}
