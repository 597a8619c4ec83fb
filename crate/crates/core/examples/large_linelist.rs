//! Time a large synthetic line list: lines spread evenly over a band,
//! a 10⁵-point grid and the 600 cm⁻¹ cutoff.
//!
//! cargo run --release --example large_linelist -- [LINES] [POINTS] [SPAN]

use std::time::Instant;

use narrowline::engine::{
    absorption_spectrum, AbsorberAmount, EngineOptions, GasConditions, NarrowingMap,
    NonlinearCoefficient, SpectralGrid,
};
use narrowline::halfwidth::{BroadenerSpec, HalfwidthModel};
use narrowline::linelist::{LineTable, SpectralLine};
use narrowline::narrowing::NarrowingParams;
use narrowline::profile::ProfileHooks;

fn main() -> narrowline::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let lines = args.first().copied().unwrap_or(1e5) as usize;
    let points = args.get(1).copied().unwrap_or(1e5) as usize;
    let span = args.get(2).copied().unwrap_or(2000.0);
    let start = 1000.0;

    let table = LineTable::new(
        (0..lines)
            .map(|i| {
                let w = start + span * (i as f64 + 0.5) / lines as f64;
                SpectralLine::new(w, 1e-20 * (1.0 + (i % 7) as f64), 0.07)
            })
            .collect(),
        "synthetic",
    );
    let step = span / (points - 1) as f64;
    let grid = SpectralGrid::new(start, start + span, step)?;
    let cond = GasConditions {
        temperature: 296.0,
        absorber: AbsorberAmount::Amagat(1e-3),
        broadener: BroadenerSpec::helium(0.52, 200.0),
        path_length: 1.0,
        nonlinear: NonlinearCoefficient::default(),
    };
    let t = Instant::now();
    let s = absorption_spectrum(
        &table,
        &cond,
        &HalfwidthModel::new(1.2),
        &NarrowingMap::uniform(NarrowingParams::nu3()),
        &ProfileHooks::default(),
        &grid,
        &EngineOptions::default(),
    )?;
    let secs = t.elapsed().as_secs_f64();
    println!(
        "{} lines x {} points over {span} cm-1: {secs:.2} s (peak narrowed {:e})",
        table.len(),
        s.len(),
        s.alpha_narrowed.iter().cloned().fold(0.0, f64::max)
    );
    Ok(())
}
