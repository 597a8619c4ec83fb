//! Physical constants, unit conversions and the wavenumber interval type.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reference temperature of line-list intensities and widths (K).
pub const T_REF: f64 = 296.0;

/// Speed of light in cm/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e10;

/// Second radiation constant hc/k in cm·K.
pub const C2: f64 = 1.438_776_9;

/// Loschmidt number: molecules per cm³ in one amagat.
pub const AMAGAT: f64 = 2.686_781_1e19;

/// Temperature defining the amagat (K).
pub const T_AMAGAT: f64 = 273.15;

pub const TORR_PER_ATM: f64 = 760.0;

pub fn torr_to_atm(torr: f64) -> f64 {
    torr / TORR_PER_ATM
}

/// Ideal-gas density in amagat of a gas at `pressure_atm` and `temperature`.
pub fn atm_to_amagat(pressure_atm: f64, temperature: f64) -> f64 {
    pressure_atm * T_AMAGAT / temperature
}

pub fn amagat_to_atm(density: f64, temperature: f64) -> f64 {
    density * temperature / T_AMAGAT
}

pub fn amagat_to_number_density(density: f64) -> f64 {
    density * AMAGAT
}

/// Closed wavenumber interval `[lo, hi]` in cm⁻¹.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        let w = Window { lo, hi };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.lo > self.hi {
            return Err(Error::config(format!(
                "invalid window [{}, {}]",
                self.lo, self.hi
            )));
        }
        Ok(())
    }

    pub fn contains(&self, omega: f64) -> bool {
        self.lo <= omega && omega <= self.hi
    }

    /// Grow the window by `margin` on both sides.
    pub fn widen(&self, margin: f64) -> Window {
        Window {
            lo: self.lo - margin,
            hi: self.hi + margin,
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

impl FromStr for Window {
    type Err = Error;

    /// Parses `LO:HI`.
    fn from_str(s: &str) -> Result<Self> {
        let (lo, hi) = s
            .split_once(':')
            .ok_or_else(|| Error::config(format!("window `{s}` is not of the form LO:HI")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::config(format!("window bound `{t}` is not a number")))
        };
        Window::new(parse(lo)?, parse(hi)?)
    }
}
