//! One line above the critical pressure: conventional Lorentzian, narrowed
//! profile and their ratio across core and wing.

use narrowline::engine::{
    absorption_spectrum, setup_line, AbsorberAmount, EngineOptions, GasConditions, NarrowingMap,
    NonlinearCoefficient, SpectralGrid,
};
use narrowline::halfwidth::{BroadenerSpec, HalfwidthModel};
use narrowline::linelist::{LineTable, SpectralLine};
use narrowline::narrowing::NarrowingParams;
use narrowline::profile::ProfileHooks;

fn main() -> narrowline::Result<()> {
    let center = 2349.0;
    let table = LineTable::new(vec![SpectralLine::new(center, 1e-19, 0.07)], "single line");
    let cond = GasConditions {
        temperature: 296.0,
        absorber: AbsorberAmount::Amagat(1.63e-5),
        broadener: BroadenerSpec::helium(0.52, 657.1),
        path_length: 1.0,
        nonlinear: NonlinearCoefficient::default(),
    };
    let hw = HalfwidthModel::new(1.2);
    let map = NarrowingMap::uniform(NarrowingParams::nu3());
    let setup = setup_line(&table.lines()[0], &cond, &hw, &map, Default::default())?;
    println!(
        "gamma_c = {:.3}, gamma_s = {:.4}, p_s = {:.1} atm, regime {:?}",
        setup.gamma_conventional, setup.gamma_saturated, setup.critical_pressure, setup.regime
    );

    let grid = SpectralGrid::new(center - 200.0, center + 200.0, 0.5)?;
    let s = absorption_spectrum(
        &table,
        &cond,
        &hw,
        &map,
        &ProfileHooks::default(),
        &grid,
        &EngineOptions::default(),
    )?;
    println!(
        "{:>9} {:>12} {:>12} {:>8}",
        "detuning", "lorentz", "narrowed", "ratio"
    );
    for i in (0..s.len()).filter(|i| i % 20 == 0 && s.omega(*i) >= center) {
        let (l, n) = (s.alpha_lorentz[i], s.alpha_narrowed[i]);
        println!(
            "{:>9.1} {l:>12.4e} {n:>12.4e} {:>8.4}",
            s.omega(i) - center,
            n / l
        );
    }
    Ok(())
}
