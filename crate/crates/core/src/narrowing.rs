//! The narrowing factor-function Γ.
//!
//! Above the critical pressure the Lorentzian of each line (evaluated with the
//! saturated width γ_s) is multiplied by `Γ = base^x`, where the exponent `x`
//! depends on the detuning `Δ = |ω − ω_i|`:
//!
//! ```text
//!   x = x_min                               Δ ≤ aγ
//!   x = x_min·(cγ − Δ)/((c − a)γ)           aγ < Δ ≤ cγ
//!   x = x_max·(Δ − cγ)/((b − c)γ)           cγ < Δ < bγ
//!   x = x_max                               Δ ≥ bγ
//! ```
//!
//! with `γ = γ_s` in the region boundaries. The defaults `base = 1/4`,
//! `x_min = −1` give a core enhancement of 4. The wing exponent
//! `x_max = ln(wing_floor·γ_c/γ_s)/ln(base)` makes the far wing equal to
//! `wing_floor` times the Lorentzian with the conventional width γ_c.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NarrowingParams {
    pub a: f64,
    pub c: f64,
    pub b: f64,
    #[serde(default = "default_x_min")]
    pub x_min: f64,
    #[serde(default = "default_base")]
    pub base: f64,
    #[serde(default = "default_wing_floor")]
    pub wing_floor: f64,
}

fn default_x_min() -> f64 {
    -1.0
}
fn default_base() -> f64 {
    0.25
}
fn default_wing_floor() -> f64 {
    0.1
}

impl NarrowingParams {
    pub fn new(a: f64, c: f64, b: f64) -> Self {
        NarrowingParams {
            a,
            c,
            b,
            x_min: default_x_min(),
            base: default_base(),
            wing_floor: default_wing_floor(),
        }
    }

    /// ν₃ band (4.3 µm): a = 0.72, c = 1.2, b = 3.92.
    pub fn nu3() -> Self {
        Self::new(0.72, 1.2, 3.92)
    }

    /// ν₂ Q-branch (14 µm): a = 0.6, c = 1.2, b = 8.
    pub fn nu2_q_branch() -> Self {
        Self::new(0.6, 1.2, 8.0)
    }

    /// 3ν₃ P-branch: c = 1.6, b = 8; `a` follows the ν₃ value.
    pub fn three_nu3_p_branch() -> Self {
        Self::new(0.72, 1.6, 8.0)
    }

    /// 3ν₃ R-branch: c = 1.2, b = 8; `a` follows the ν₃ value.
    pub fn three_nu3_r_branch() -> Self {
        Self::new(0.72, 1.2, 8.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.a && self.a < self.c && self.c < self.b && self.b.is_finite()) {
            return Err(Error::config(format!(
                "narrowing bounds must satisfy 0 < a < c < b (a = {}, c = {}, b = {})",
                self.a, self.c, self.b
            )));
        }
        if !(0.0 < self.base && self.base < 1.0) {
            return Err(Error::config(format!("base {} outside (0, 1)", self.base)));
        }
        if !(0.0 < self.wing_floor && self.wing_floor < 1.0) {
            return Err(Error::config(format!(
                "wing floor {} outside (0, 1)",
                self.wing_floor
            )));
        }
        if !(self.x_min < 0.0) {
            return Err(Error::config(format!(
                "x_min = {} is not negative",
                self.x_min
            )));
        }
        Ok(())
    }

    /// Core value `base^x_min`.
    pub fn core_factor(&self) -> f64 {
        self.base.powf(self.x_min)
    }
}

/// Which side of the critical pressure a line is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    AbovePs,
    BelowPs,
}

/// `x_max = ln(wing_floor·γ/γ_s) / ln(base)`.
///
/// Fails when `wing_floor·γ/γ_s > 1`, where Γ would amplify the far wing.
/// The boundary case `= 1` gives a flat wing (`x_max = 0`).
pub fn wing_exponent(gamma: f64, gamma_s: f64, params: &NarrowingParams) -> Result<f64> {
    if !(gamma > 0.0 && gamma_s > 0.0) {
        return Err(Error::domain(format!(
            "halfwidths must be positive (gamma = {gamma}, gamma_s = {gamma_s})"
        )));
    }
    let ratio = params.wing_floor * gamma / gamma_s;
    if ratio > 1.0 {
        return Err(Error::DegenerateWing { ratio });
    }
    Ok(ratio.ln() / params.base.ln())
}

/// Piecewise exponent `x(Δ)` with region boundaries at multiples of `gamma`.
pub fn narrowing_exponent(delta: f64, gamma: f64, x_max: f64, params: &NarrowingParams) -> f64 {
    let NarrowingParams { a, c, b, x_min, .. } = *params;
    if delta <= a * gamma {
        x_min
    } else if delta <= c * gamma {
        x_min * (c * gamma - delta) / ((c - a) * gamma)
    } else if delta < b * gamma {
        x_max * (delta - c * gamma) / ((b - c) * gamma)
    } else {
        x_max
    }
}

/// Γ for one line, with all width-dependent quantities resolved.
///
/// Built once per line and evaluated per grid point; the core and far-wing
/// plateaus are precomputed so only the two transition regions call `powf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NarrowingShape {
    /// `a·γ_s`
    pub core_edge: f64,
    /// `b·γ_s`
    pub wing_edge: f64,
    pub core_value: f64,
    pub wing_value: f64,
    boundary_width: f64,
    x_max: f64,
    params: NarrowingParams,
}

impl NarrowingShape {
    /// Shape for a line with conventional width `gamma` above the critical
    /// pressure, with region boundaries at multiples of `gamma_s`.
    pub fn above_critical(gamma: f64, gamma_s: f64, params: &NarrowingParams) -> Result<Self> {
        let x_max = wing_exponent(gamma, gamma_s, params)?;
        Ok(NarrowingShape {
            core_edge: params.a * gamma_s,
            wing_edge: params.b * gamma_s,
            core_value: params.core_factor(),
            wing_value: params.base.powf(x_max),
            boundary_width: gamma_s,
            x_max,
            params: *params,
        })
    }

    /// Γ ≡ 1.
    pub fn neutral() -> Self {
        NarrowingShape {
            core_edge: f64::INFINITY,
            wing_edge: f64::INFINITY,
            core_value: 1.0,
            wing_value: 1.0,
            boundary_width: 1.0,
            x_max: 0.0,
            params: NarrowingParams::nu3(),
        }
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    #[inline]
    pub fn eval(&self, delta: f64) -> f64 {
        if delta <= self.core_edge {
            self.core_value
        } else if delta >= self.wing_edge {
            self.wing_value
        } else {
            self.transition(delta)
        }
    }

    #[cold]
    fn transition(&self, delta: f64) -> f64 {
        let x = narrowing_exponent(delta, self.boundary_width, self.x_max, &self.params);
        self.params.base.powf(x)
    }
}

/// `Γ_i(ω)` for a line at `omega_i` with conventional width `gamma` and
/// saturated width `gamma_s`. Below the critical pressure Γ ≡ 1.
pub fn narrowing_factor(
    omega: f64,
    omega_i: f64,
    gamma: f64,
    gamma_s: f64,
    params: &NarrowingParams,
    regime: Regime,
) -> Result<f64> {
    match regime {
        Regime::BelowPs => Ok(1.0),
        Regime::AbovePs => {
            Ok(NarrowingShape::above_critical(gamma, gamma_s, params)?
                .eval((omega - omega_i).abs()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const XMAX_REF: f64 = 1.660_964_047_443_681; // ln 0.1 / ln 0.25

    #[test]
    fn wing_exponent_examples() {
        let p = NarrowingParams::nu3();
        assert!((wing_exponent(4.7, 4.7, &p).unwrap() - 1.660964).abs() < 1e-6);
        assert_eq!(wing_exponent(10.0, 1.0, &p).unwrap(), 0.0);
        assert!((wing_exponent(2.0, 1.0, &p).unwrap() - 1.160964).abs() < 1e-6);
        assert!(matches!(
            wing_exponent(11.0, 1.0, &p),
            Err(Error::DegenerateWing { .. })
        ));
        assert!(wing_exponent(0.0, 1.0, &p).is_err());
    }

    #[test]
    fn exponent_examples() {
        let p = NarrowingParams::nu3();
        let g = 2.5;
        assert_eq!(narrowing_exponent(0.5 * g, g, XMAX_REF, &p), -1.0);
        assert_eq!(narrowing_exponent(1.2 * g, g, XMAX_REF, &p), 0.0);
        let mid = narrowing_exponent(2.56 * g, g, XMAX_REF, &p);
        assert!((mid - 0.830482).abs() < 1e-6, "{mid}");
        assert_eq!(narrowing_exponent(3.92 * g, g, XMAX_REF, &p), XMAX_REF);
        assert_eq!(narrowing_exponent(100.0 * g, g, XMAX_REF, &p), XMAX_REF);
    }

    #[test]
    fn factor_examples() {
        let p = NarrowingParams::nu3();
        let gs = 4.7028;
        let f = |d: f64| narrowing_factor(2349.0 + d, 2349.0, gs, gs, &p, Regime::AbovePs).unwrap();
        assert_eq!(f(0.0), 4.0);
        assert!((f(3.92 * gs) - 0.1).abs() < 1e-12);
        assert!((f(50.0 * gs) - 0.1).abs() < 1e-12);
        assert!((f(0.96 * gs) - 2.0).abs() < 1e-12);
        assert!((f(-0.96 * gs) - 2.0).abs() < 1e-12);
        assert!((f(1.2 * gs) - 1.0).abs() < 1e-12);
        let below = narrowing_factor(2349.0, 2349.0, gs, gs, &p, Regime::BelowPs).unwrap();
        assert_eq!(below, 1.0);
    }

    #[test]
    fn wing_plateau_tracks_conventional_width() {
        let p = NarrowingParams::nu3();
        let s = NarrowingShape::above_critical(2.0, 1.0, &p).unwrap();
        assert!((s.eval(1e3) - 0.2).abs() < 1e-14);
    }

    #[test]
    fn params_validation() {
        assert!(NarrowingParams::nu3().validate().is_ok());
        assert!(NarrowingParams::new(1.2, 0.72, 3.92).validate().is_err());
        assert!(NarrowingParams::new(0.0, 1.2, 3.92).validate().is_err());
        let mut p = NarrowingParams::nu3();
        p.base = 1.5;
        assert!(p.validate().is_err());
        let mut p = NarrowingParams::nu3();
        p.x_min = 0.5;
        assert!(p.validate().is_err());
    }

    fn scenario_params() -> impl Strategy<Value = NarrowingParams> {
        prop_oneof![
            Just(NarrowingParams::nu3()),
            Just(NarrowingParams::nu2_q_branch()),
            Just(NarrowingParams::three_nu3_p_branch()),
            Just(NarrowingParams::three_nu3_r_branch()),
        ]
    }

    proptest! {
        #[test]
        fn bounded_and_monotone(
            p in scenario_params(),
            gs in 0.1f64..10.0,
            ratio in 0.2f64..5.0,
            d1 in 0.0f64..20.0,
            d2 in 0.0f64..20.0,
        ) {
            let s = NarrowingShape::above_critical(ratio * gs, gs, &p).unwrap();
            let (lo, hi) = if d1 <= d2 { (d1 * gs, d2 * gs) } else { (d2 * gs, d1 * gs) };
            let (g_lo, g_hi) = (s.eval(lo), s.eval(hi));
            let floor = p.wing_floor * ratio;
            let tol = 1e-14;
            prop_assert!(g_hi <= g_lo * (1.0 + tol));
            prop_assert!(g_hi >= floor * (1.0 - tol) && g_lo <= 4.0 * (1.0 + tol));
        }

        #[test]
        fn depends_only_on_detuning(p in scenario_params(), d in -40.0f64..40.0) {
            let a = narrowing_factor(2349.0 + d, 2349.0, 5.0, 4.7, &p, Regime::AbovePs).unwrap();
            let b = narrowing_factor(2349.0 - d, 2349.0, 5.0, 4.7, &p, Regime::AbovePs).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a);
        }

        #[test]
        fn neutral_at_c(p in scenario_params(), gs in 0.1f64..10.0, ratio in 0.2f64..5.0) {
            let s = NarrowingShape::above_critical(ratio * gs, gs, &p).unwrap();
            prop_assert_eq!(s.eval(p.c * gs), 1.0);
        }
    }
}
