//! Dump a builtin scenario to TOML, edit it and load it back.

use narrowline::scenario::{builtin, builtin_scenarios, Scenario};

fn main() -> narrowline::Result<()> {
    for s in builtin_scenarios() {
        println!("{:<22} {}", s.name, s.description);
    }

    let dir = std::env::temp_dir().join("narrowline-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("comb_dense.toml");

    let mut scenario = builtin("comb_demo").expect("builtin comb");
    scenario.name = "comb_dense".into();
    scenario.apply_overrides(&["comb_spacing=0.6", "comb_count=81", "grid_step=0.02"])?;
    scenario.save(&path)?;
    println!(
        "\nwrote {}:\n{}",
        path.display(),
        std::fs::read_to_string(&path)?
    );

    let back = Scenario::load(&path)?;
    assert_eq!(back, scenario);
    println!("round trip ok");
    Ok(())
}
