//! Frozen outputs of this implementation. Set `NARROWLINE_BLESS=1` to
//! rewrite the snapshots after an intended change.

mod common;

use std::path::Path;

use narrowline::cli::{peak_summary, spectrum_csv};
use narrowline::engine::{compare_to_reference, Curve, Spectrum};
use narrowline::scenario::{builtin, RunOptions};

use common::data_dir;

const TOLERANCE: f64 = 1e-12;

fn bless() -> bool {
    std::env::var_os("NARROWLINE_BLESS").is_some()
}

/// Column `k` (1-based after ω) of a spectrum CSV.
fn column(text: &str, k: usize) -> Curve {
    let mut omega = Vec::new();
    let mut alpha = Vec::new();
    for row in text.lines().skip(1) {
        let fields: Vec<&str> = row.split(',').collect();
        omega.push(fields[0].parse().unwrap());
        alpha.push(fields[k].parse().unwrap());
    }
    Curve::new(omega, alpha).unwrap()
}

fn check_snapshot(spectrum: &Spectrum, file: &str) {
    let path = data_dir().join(file);
    let text = spectrum_csv(spectrum);
    if bless() {
        std::fs::write(&path, &text).unwrap();
        return;
    }
    let frozen =
        std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(text.lines().count(), frozen.lines().count());
    for (k, name) in [
        (1, "lorentz"),
        (2, "narrowed"),
        (3, "effective"),
        (4, "gamma"),
    ] {
        let report = compare_to_reference(&column(&text, k), &column(&frozen, k)).unwrap();
        assert_eq!(report.omega.len(), spectrum.len());
        assert!(
            report.max_abs_rel_deviation <= TOLERANCE,
            "{file} {name}: max deviation {:e}",
            report.max_abs_rel_deviation
        );
    }
}

#[test]
fn comb_demo_snapshot() {
    let s = builtin("comb_demo")
        .unwrap()
        .run(&RunOptions::default())
        .unwrap();
    check_snapshot(&s, "comb_demo.csv");
}

#[test]
fn nu3_with_synthetic_band_snapshot() {
    for name in ["nu3_135atm", "nu3_657atm"] {
        let opts = RunOptions {
            linelist: Some(data_dir().join("nu3_synthetic.par")),
            threads: None,
        };
        let s = builtin(name).unwrap().run(&opts).unwrap();
        assert_eq!(s.omega(0), 2200.0);
        assert_eq!(s.omega(s.len() - 1), 2500.0);
        check_snapshot(&s, &format!("{name}_synthetic.csv"));
    }
}

#[test]
fn comb_sweep_across_critical_pressure() {
    let base = builtin("comb_demo").unwrap();
    // p_s for the comb lines: 3.919·1.2 / (0.52·0.07) at 296 K.
    let ps = 3.919 * 1.2 / (0.52 * 0.07);
    let mut rows = String::from("factor,peak_ratio\n");
    let mut ratios = Vec::new();
    for factor in [0.5, 1.0, 2.0] {
        let mut s = base.clone();
        s.apply_override("pressure", &(factor * ps).to_string())
            .unwrap();
        let r = peak_summary(&s.run(&RunOptions::default()).unwrap()).peak_ratio;
        rows.push_str(&format!("{factor},{r}\n"));
        ratios.push(r);
    }
    assert!(ratios.windows(2).all(|w| w[0] <= w[1]), "{ratios:?}");
    assert!(ratios[0] < 1.1 && ratios[1] > 2.0, "{ratios:?}");

    let path = data_dir().join("comb_sweep.csv");
    if bless() {
        std::fs::write(&path, &rows).unwrap();
        return;
    }
    let frozen = std::fs::read_to_string(Path::new(&path)).unwrap();
    for (got, want) in rows.lines().skip(1).zip(frozen.lines().skip(1)) {
        let g: f64 = got.split(',').nth(1).unwrap().parse().unwrap();
        let w: f64 = want.split(',').nth(1).unwrap().parse().unwrap();
        assert!(common::rel(g, w) <= TOLERANCE, "{got} vs {want}");
    }
}
