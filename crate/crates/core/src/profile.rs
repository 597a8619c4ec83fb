//! Single-line profile pieces: the full Lorentzian, the lower-state
//! population factor and the pluggable far-wing factor.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linelist::SpectralLine;
use crate::units::{C2, T_REF};

/// Default slope parameter of the wing factor.
pub const DEFAULT_WING_SLOPE: f64 = 5.0;

/// Lorentzian of intensity `s` and halfwidth `gamma`, normalized to `s`.
#[inline]
pub fn lorentz(omega: f64, omega_i: f64, gamma: f64, s: f64) -> f64 {
    let d = omega - omega_i;
    s * (gamma / PI) / (d * d + gamma * gamma)
}

/// Absorber number density scaled from 296 K to `t`: Boltzmann factor of the
/// lower state, stimulated emission, and a linear-rotor partition function
/// `Q(T) ∝ T`. Returns `number_density` unchanged at 296 K.
pub fn population_factor(line: &SpectralLine, t: f64, number_density: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("temperature {t} K is not positive")));
    }
    if t == T_REF {
        return Ok(number_density);
    }
    let boltzmann = (-C2 * line.lower_state_energy * (1.0 / t - 1.0 / T_REF)).exp();
    let stimulated = (-C2 * line.position / t).exp_m1() / (-C2 * line.position / T_REF).exp_m1();
    let partition = T_REF / t;
    Ok(number_density * boltzmann * stimulated * partition)
}

/// Fermi-type wing damping `1/(1 + exp((|Δ| − M·w)/w))`.
///
/// This is a stand-in of the right general shape, not a calibrated model; it
/// is off unless explicitly selected.
pub fn wing_factor_fermi(omega: f64, omega_i: f64, m: f64, width_scale: f64) -> f64 {
    let d = (omega - omega_i).abs();
    1.0 / (1.0 + ((d - m * width_scale) / width_scale).exp())
}

/// User-supplied wing factor `f(ω, ω_i, T, M)`, expected in `[0, 1]` and
/// equal to 1 at the line center.
pub type WingFn = Arc<dyn Fn(f64, f64, f64, f64) -> f64 + Send + Sync>;

#[derive(Clone, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum WingHook {
    #[default]
    Identity,
    Fermi {
        width_scale: f64,
    },
    #[serde(skip)]
    Custom(WingFn),
}

impl fmt::Debug for WingHook {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WingHook::Identity => f.write_str("Identity"),
            WingHook::Fermi { width_scale } => f
                .debug_struct("Fermi")
                .field("width_scale", width_scale)
                .finish(),
            WingHook::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl PartialEq for WingHook {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (WingHook::Identity, WingHook::Identity) => true,
            (WingHook::Fermi { width_scale: a }, WingHook::Fermi { width_scale: b }) => a == b,
            (WingHook::Custom(a), WingHook::Custom(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

/// Per-line multiplicative hooks applied on top of the Lorentzian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileHooks {
    #[serde(default)]
    pub wing: WingHook,
    /// Slope parameter `M`.
    #[serde(default = "default_slope")]
    pub m: f64,
}

fn default_slope() -> f64 {
    DEFAULT_WING_SLOPE
}

impl Default for ProfileHooks {
    fn default() -> Self {
        ProfileHooks {
            wing: WingHook::Identity,
            m: DEFAULT_WING_SLOPE,
        }
    }
}

impl ProfileHooks {
    pub fn fermi(width_scale: f64) -> Self {
        ProfileHooks {
            wing: WingHook::Fermi { width_scale },
            m: DEFAULT_WING_SLOPE,
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.wing, WingHook::Identity)
    }

    pub fn validate(&self) -> Result<()> {
        if let WingHook::Fermi { width_scale } = self.wing {
            if !(self.m > 0.0 && width_scale > 0.0) {
                return Err(Error::config(format!(
                    "Fermi wing factor needs M > 0 and width_scale > 0 (M = {}, width_scale = {width_scale})",
                    self.m
                )));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn wing_factor(&self, omega: f64, omega_i: f64, t: f64) -> f64 {
        match &self.wing {
            WingHook::Identity => 1.0,
            WingHook::Fermi { width_scale } => {
                wing_factor_fermi(omega, omega_i, self.m, *width_scale)
            }
            WingHook::Custom(f) => f(omega, omega_i, t, self.m),
        }
    }
}
