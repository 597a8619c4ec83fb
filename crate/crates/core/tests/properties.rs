//! Invariants across modules, checked on random inputs.

mod common;

use narrowline::engine::{
    absorption_spectrum, compare_to_reference, effective_absorption, AbsorberAmount, Curve,
    EngineOptions, GasConditions, NarrowingMap, NonlinearCoefficient, SpectralGrid, Variant,
};
use narrowline::halfwidth::{effective_halfwidth, BroadenerSpec, HalfwidthMode, HalfwidthModel};
use narrowline::linelist::{LineTable, SpectralLine};
use narrowline::narrowing::{NarrowingParams, NarrowingShape};
use narrowline::profile::{lorentz, population_factor, wing_factor_fermi, ProfileHooks};
use proptest::prelude::*;

/// Adaptive Simpson quadrature.
fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    step(
        f,
        a,
        b,
        fa,
        fm,
        fb,
        (b - a) / 6.0 * (fa + 4.0 * fm + fb),
        tol,
        60,
    )
}

#[test]
fn lorentz_integrates_to_intensity() {
    for (gamma, s) in [(1.0, 1.0), (0.07, 3.5e-18), (4.7028, 2.0)] {
        let f = |w: f64| lorentz(w, 0.0, gamma, s);
        let span = 1e4 * gamma;
        // Split at the centre so the peak sits on a node.
        let integral = simpson(&f, -span, 0.0, 1e-12 * s) + simpson(&f, 0.0, span, 1e-12 * s);
        assert!(
            (integral / s - 1.0).abs() < 1e-4,
            "gamma {gamma}: {integral}"
        );
        let truncated = 2.0 / std::f64::consts::PI * 1e4f64.atan();
        assert!(
            (integral / s - truncated).abs() < 1e-9,
            "gamma {gamma}: {integral}"
        );
    }
}

#[test]
fn combined_width_checkpoints() {
    let model = HalfwidthModel::new(1.2).with_mode(HalfwidthMode::Combined);
    let gs = model.saturated_halfwidth();
    assert_eq!(effective_halfwidth(gs, &model).unwrap(), gs / 2.0);
    let far = effective_halfwidth(1e9 * gs, &model).unwrap();
    assert!(((far - gs) / gs).abs() < 1e-8);
}

fn small_spectrum(positions: &[f64], p: f64, b: f64) -> narrowline::engine::Spectrum {
    let lines = positions
        .iter()
        .map(|&w| SpectralLine::new(w, 1e-19, 0.07))
        .collect();
    let cond = GasConditions {
        temperature: 296.0,
        absorber: AbsorberAmount::Amagat(1e-3),
        broadener: BroadenerSpec::helium(0.52, p),
        path_length: 3.85,
        nonlinear: NonlinearCoefficient::Constant(b),
    };
    absorption_spectrum(
        &LineTable::new(lines, "p"),
        &cond,
        &HalfwidthModel::new(1.2),
        &NarrowingMap::uniform(NarrowingParams::nu3()),
        &ProfileHooks::default(),
        &SpectralGrid::new(2300.0, 2400.0, 0.5).unwrap(),
        &EngineOptions::default(),
    )
    .unwrap()
}

#[test]
fn comparison_against_a_doubled_spectrum() {
    let s = small_spectrum(&[2340.0, 2350.0, 2361.5], 200.0, 0.0);
    let a = s.curve(Variant::Narrowed);
    let doubled = Curve::new(a.omega.clone(), a.alpha.iter().map(|x| 2.0 * x).collect()).unwrap();
    let report = compare_to_reference(&a, &doubled).unwrap();
    assert!(report.ratio.iter().all(|&r| r == 0.5));
    let same = compare_to_reference(&a, &a).unwrap();
    assert!(same.ratio.iter().all(|&r| r == 1.0));
    assert_eq!(same.max_abs_rel_deviation, 0.0);
}

fn any_params() -> impl Strategy<Value = NarrowingParams> {
    prop_oneof![
        Just(NarrowingParams::nu3()),
        Just(NarrowingParams::nu2_q_branch()),
        Just(NarrowingParams::three_nu3_p_branch()),
        Just(NarrowingParams::three_nu3_r_branch()),
    ]
}

proptest! {
    #[test]
    fn lorentz_is_symmetric_and_positive(d in 0.0f64..1e3, g in 1e-3f64..50.0, s in 1e-25f64..1.0) {
        let right = lorentz(2349.0 + d, 2349.0, g, s);
        let left = lorentz(2349.0 - d, 2349.0, g, s);
        prop_assert!(right > 0.0);
        prop_assert!(common::rel(left, right) < 1e-9);
        prop_assert!(right <= s / (std::f64::consts::PI * g) * (1.0 + 1e-15));
    }

    #[test]
    fn population_is_identity_at_reference(e in 0.0f64..5000.0, w in 1.0f64..10_000.0, n in 1e10f64..1e22) {
        let line = SpectralLine::new(w, 1e-20, 0.07).with_lower_state_energy(e);
        prop_assert_eq!(population_factor(&line, 296.0, n).unwrap(), n);
    }

    #[test]
    fn fermi_factor_is_a_damping(d in -500.0f64..500.0, m in 0.1f64..20.0, w in 0.01f64..10.0) {
        let f = wing_factor_fermi(2349.0 + d, 2349.0, m, w);
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert!(f <= wing_factor_fermi(2349.0, 2349.0, m, w));
    }

    #[test]
    fn effective_absorption_dominates(alpha in 0.0f64..10.0, b1 in 0.0f64..5.0, b2 in 0.0f64..5.0, x in 0.01f64..100.0) {
        let (lo, hi) = if b1 <= b2 { (b1, b2) } else { (b2, b1) };
        let a_lo = effective_absorption(alpha, lo, x).unwrap();
        let a_hi = effective_absorption(alpha, hi, x).unwrap();
        prop_assert!(a_lo >= alpha);
        prop_assert!(a_hi >= a_lo);
        prop_assert_eq!(effective_absorption(alpha, 0.0, x).unwrap(), alpha);
    }

    #[test]
    fn narrowing_is_symmetric_and_bounded(p in any_params(), ratio in 0.3f64..9.0, d in 0.0f64..60.0) {
        let gs = 4.7028;
        let shape = NarrowingShape::above_critical(ratio * gs, gs, &p).unwrap();
        let g = shape.eval(d);
        prop_assert!(g <= 4.0 + 1e-12);
        prop_assert!(g >= shape.wing_value - 1e-12);
        prop_assert!(g > 0.0);
    }

    #[test]
    fn spectra_are_finite_and_ordered(
        positions in proptest::collection::vec(2250.0f64..2450.0, 0..30),
        p in 1.0f64..800.0,
        b in 0.0f64..1.0,
    ) {
        let s = small_spectrum(&positions, p, b);
        prop_assert_eq!(s.len(), s.grid.len());
        for k in 0..s.len() {
            prop_assert!(s.alpha_lorentz[k].is_finite() && s.alpha_lorentz[k] >= 0.0);
            prop_assert!(s.alpha_narrowed[k].is_finite() && s.alpha_narrowed[k] >= 0.0);
            prop_assert!(s.alpha_effective[k] >= s.alpha_narrowed[k]);
            if b == 0.0 {
                prop_assert_eq!(s.alpha_effective[k], s.alpha_narrowed[k]);
            }
        }
    }
}
