//! Halfwidth of a ν₃ line in helium as the pressure rises, in each of the
//! three width modes.
//!
//! ```text
//! cargo run --example halfwidth_saturation
//! ```

use narrowline::halfwidth::{
    conventional_halfwidth, critical_pressure, effective_halfwidth, BroadenerSpec, HalfwidthMode,
    HalfwidthModel,
};
use narrowline::linelist::SpectralLine;

fn main() -> narrowline::Result<()> {
    let line = SpectralLine::new(2349.143, 3.5e-18, 0.07);
    let t = 298.0;
    let base = HalfwidthModel::new(1.2);
    let gs = base.saturated_halfwidth();
    let ps = critical_pressure(&line, &BroadenerSpec::helium(0.52, 1.0), t, &base)?;
    println!("gamma_s = {gs:.4} cm-1, p_s = {ps:.1} atm");
    println!(
        "{:>8} {:>10} {:>10} {:>10} {:>10}",
        "p/atm", "linear", "tanh", "clamp", "combined"
    );

    let mut clamp = base.clone().with_mode(HalfwidthMode::Saturating);
    clamp.shape = narrowline::halfwidth::SaturationShape::HardClamp;
    let tanh = base.clone().with_mode(HalfwidthMode::Saturating);
    let combined = base.clone().with_mode(HalfwidthMode::Combined);

    for p in [1.0, 10.0, 50.0, 100.0, 135.8, 200.0, 400.0, 657.1, 1000.0] {
        let gc = conventional_halfwidth(&line, &BroadenerSpec::helium(0.52, p), t, &base)?;
        println!(
            "{p:>8.1} {gc:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            effective_halfwidth(gc, &tanh)?,
            effective_halfwidth(gc, &clamp)?,
            effective_halfwidth(gc, &combined)?,
        );
    }
    Ok(())
}
