//! Pressure-dependent Lorentz halfwidths.
//!
//! The conventional width grows linearly with broadener pressure. At high
//! pressure it is assumed to saturate at `γ_s = k·Δω_rot`, the mean rotational
//! line separation scaled by `k` (3.919 by default). Three regimes are
//! available: the linear law, a smooth saturating clamp, and the harmonic
//! combination `γ_c·γ_s / (γ_c + γ_s)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linelist::SpectralLine;
use crate::units::{SPEED_OF_LIGHT, T_REF};

pub const DEFAULT_SATURATION_MULTIPLIER: f64 = 3.919;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum HalfwidthMode {
    Linear,
    #[default]
    Saturating,
    Combined,
}

impl std::str::FromStr for HalfwidthMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(HalfwidthMode::Linear),
            "saturating" => Ok(HalfwidthMode::Saturating),
            "combined" => Ok(HalfwidthMode::Combined),
            _ => Err(Error::config(format!(
                "unknown halfwidth mode `{s}` (linear|saturating|combined)"
            ))),
        }
    }
}

/// How the saturating mode approaches γ_s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SaturationShape {
    /// `γ_s·tanh(γ_c/γ_s)`
    #[default]
    Tanh,
    /// `min(γ_c, γ_s)`
    HardClamp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfwidthModel {
    #[serde(default)]
    pub mode: HalfwidthMode,
    #[serde(default)]
    pub shape: SaturationShape,
    /// Zero-pressure width floor γ_0 (cm⁻¹).
    #[serde(default)]
    pub gamma0: f64,
    /// Mean rotational line separation Δω_rot (cm⁻¹).
    pub delta_omega_rot: f64,
    /// `k` in `γ_s = k·Δω_rot`.
    #[serde(default = "default_multiplier")]
    pub saturation_multiplier: f64,
    /// Quasi-linear pressure interval `[p_D, p_L]` (atm). Informational.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear_bounds: Option<[f64; 2]>,
    /// Critical pressure p_s (atm) used instead of the per-line derived value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub critical_pressure: Option<f64>,
}

fn default_multiplier() -> f64 {
    DEFAULT_SATURATION_MULTIPLIER
}

impl HalfwidthModel {
    pub fn new(delta_omega_rot: f64) -> Self {
        HalfwidthModel {
            mode: HalfwidthMode::default(),
            shape: SaturationShape::default(),
            gamma0: 0.0,
            delta_omega_rot,
            saturation_multiplier: DEFAULT_SATURATION_MULTIPLIER,
            linear_bounds: None,
            critical_pressure: None,
        }
    }

    pub fn with_mode(mut self, mode: HalfwidthMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta_omega_rot > 0.0) || !(self.saturation_multiplier > 0.0) {
            return Err(Error::config(format!(
                "saturated halfwidth must be positive (k = {}, delta_omega_rot = {})",
                self.saturation_multiplier, self.delta_omega_rot
            )));
        }
        if !(self.gamma0 >= 0.0) {
            return Err(Error::config(format!(
                "gamma0 = {} is negative",
                self.gamma0
            )));
        }
        if let Some([lo, hi]) = self.linear_bounds {
            if !(0.0 <= lo && lo <= hi) {
                return Err(Error::config(format!("bad linear bounds [{lo}, {hi}]")));
            }
        }
        if let Some(p) = self.critical_pressure {
            if !(p >= 0.0 && p.is_finite()) {
                return Err(Error::config(format!("critical pressure {p} is negative")));
            }
        }
        Ok(())
    }

    /// `γ_s = k·Δω_rot`.
    pub fn saturated_halfwidth(&self) -> f64 {
        self.saturation_multiplier * self.delta_omega_rot
    }

    /// Width actually used by a Lorentzian for conventional width `gamma_c`.
    pub fn effective_halfwidth(&self, gamma_c: f64) -> Result<f64> {
        effective_halfwidth(gamma_c, self)
    }
}

/// Identity of the perturbing gas.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BroadenerId {
    N2,
    He,
    #[serde(rename = "self")]
    SelfBroadening,
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BroadenerSpec {
    pub id: BroadenerId,
    /// Width coefficient relative to N₂ (He: 0.52).
    pub scale_vs_n2: f64,
    /// Partial pressure (atm).
    pub partial_pressure: f64,
    /// Partial density (amagat), when quoted alongside the pressure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partial_density: Option<f64>,
}

impl BroadenerSpec {
    pub fn helium(scale_vs_n2: f64, partial_pressure: f64) -> Self {
        BroadenerSpec {
            id: BroadenerId::He,
            scale_vs_n2,
            partial_pressure,
            partial_density: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale_vs_n2 > 0.0 && self.scale_vs_n2 <= 2.0) {
            return Err(Error::config(format!(
                "broadener scale {} outside (0, 2]",
                self.scale_vs_n2
            )));
        }
        if !(self.partial_pressure >= 0.0) {
            return Err(Error::config(format!(
                "negative partial pressure {}",
                self.partial_pressure
            )));
        }
        Ok(())
    }

    /// Reference width coefficient of `line` for this broadener.
    fn reference_width(&self, line: &SpectralLine) -> f64 {
        match self.id {
            BroadenerId::SelfBroadening => line.gamma_self_ref,
            _ => line.gamma_foreign_ref,
        }
    }

    /// `dγ/dp` at temperature `t` (cm⁻¹/atm).
    pub fn pressure_slope(&self, line: &SpectralLine, t: f64) -> Result<f64> {
        check_temperature(t)?;
        Ok(self.scale_vs_n2 * self.reference_width(line) * (T_REF / t).powf(line.temp_exponent))
    }
}

fn check_temperature(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("temperature {t} K is not positive")))
    }
}

/// Linear-law width `γ_0 + scale·γ_ref·(T_ref/T)^n·p`.
pub fn conventional_halfwidth(
    line: &SpectralLine,
    broadener: &BroadenerSpec,
    t: f64,
    model: &HalfwidthModel,
) -> Result<f64> {
    if !(broadener.partial_pressure >= 0.0) {
        return Err(Error::domain(format!(
            "partial pressure {} is negative",
            broadener.partial_pressure
        )));
    }
    Ok(model.gamma0 + broadener.pressure_slope(line, t)? * broadener.partial_pressure)
}

/// Linear-law width for a mixture: the per-broadener contributions add.
pub fn mixture_halfwidth(
    line: &SpectralLine,
    broadeners: &[BroadenerSpec],
    t: f64,
    model: &HalfwidthModel,
) -> Result<f64> {
    let mut gamma = model.gamma0;
    for b in broadeners {
        gamma += conventional_halfwidth(line, b, t, model)? - model.gamma0;
    }
    Ok(gamma)
}

pub fn saturated_halfwidth(model: &HalfwidthModel) -> f64 {
    model.saturated_halfwidth()
}

pub fn effective_halfwidth(gamma_c: f64, model: &HalfwidthModel) -> Result<f64> {
    if !(gamma_c >= 0.0) {
        return Err(Error::domain(format!(
            "conventional halfwidth {gamma_c} is negative"
        )));
    }
    let gs = model.saturated_halfwidth();
    Ok(match model.mode {
        HalfwidthMode::Linear => gamma_c,
        HalfwidthMode::Saturating => match model.shape {
            SaturationShape::Tanh => gs * (gamma_c / gs).tanh(),
            SaturationShape::HardClamp => gamma_c.min(gs),
        },
        HalfwidthMode::Combined => {
            if gamma_c == 0.0 {
                0.0
            } else if gamma_c.is_infinite() {
                gs
            } else {
                gamma_c * gs / (gamma_c + gs)
            }
        }
    })
}

/// Broadener pressure at which the linear law reaches γ_s:
/// `p_s = (γ_s − γ_0) / slope`, or zero if `γ_0` is already saturated.
pub fn critical_pressure(
    line: &SpectralLine,
    broadener: &BroadenerSpec,
    t: f64,
    model: &HalfwidthModel,
) -> Result<f64> {
    let slope = broadener.pressure_slope(line, t)?;
    critical_pressure_for_slope(slope, model)
}

pub fn critical_pressure_for_slope(slope: f64, model: &HalfwidthModel) -> Result<f64> {
    let gs = model.saturated_halfwidth();
    if model.gamma0 >= gs {
        return Ok(0.0);
    }
    if !(slope > 0.0) {
        return Err(Error::NoSaturation { slope });
    }
    Ok((gs - model.gamma0) / slope)
}

/// Relaxation time `τ = 1/(2cγ)` in seconds for a halfwidth in cm⁻¹.
pub fn relaxation_time(gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::domain(format!("halfwidth {gamma} is not positive")));
    }
    Ok(1.0 / (2.0 * SPEED_OF_LIGHT * gamma))
}
