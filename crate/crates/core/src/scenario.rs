//! Declarative run configurations: builtin experimental setups, synthetic
//! line combs, scenario files and `key=value` overrides.
//!
//! Scenario files are TOML (or JSON when the extension is `.json`):
//!
//! ```toml
//! name = "my_run"
//! window = { lo = 2300.0, hi = 2400.0 }
//! grid = { start = 2300.0, stop = 2400.0, step = 0.05 }
//!
//! [conditions]
//! temperature = 296.0
//! absorber = { amagat = 1.63e-5 }
//! path_length = 1.0
//! broadener = { id = "he", scale_vs_n2 = 0.52, partial_pressure = 135.8 }
//!
//! [halfwidth]
//! delta_omega_rot = 1.2
//!
//! [[narrowing]]
//! lo = 2300.0
//! hi = 2400.0
//! params = { a = 0.72, c = 1.2, b = 3.92 }
//!
//! [linelist]
//! kind = "comb"
//! center = 2349.0
//! count = 41
//! spacing = 1.2
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::engine::{
    absorption_spectrum, AbsorberAmount, EngineOptions, GasConditions, NarrowingMap,
    NarrowingRegion, NonlinearCoefficient, RegimeSelection, SpectralGrid, Spectrum,
    SpectrumMetadata, DEFAULT_CUTOFF,
};
use crate::error::{Error, Result};
use crate::halfwidth::{BroadenerSpec, HalfwidthModel, SaturationShape};
use crate::linelist::{read_linelist, LineTable, SpectralLine};
use crate::narrowing::NarrowingParams;
use crate::profile::{ProfileHooks, WingHook};
use crate::units::{torr_to_atm, Window, T_REF};

/// Intensity envelope across a comb.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "shape", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Envelope {
    #[default]
    Flat,
    /// Gaussian in position with the given FWHM (cm⁻¹).
    GaussianEnvelope { fwhm: f64 },
}

/// Equally spaced synthetic lines with identical width coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombRecipe {
    pub center: f64,
    pub count: usize,
    pub spacing: f64,
    #[serde(default)]
    pub envelope: Envelope,
    /// Peak line intensity (cm⁻¹/(molecule·cm⁻²)).
    #[serde(default = "default_intensity")]
    pub intensity: f64,
    /// Foreign (N₂) width coefficient at 296 K (cm⁻¹/atm).
    #[serde(default = "default_gamma")]
    pub gamma_foreign: f64,
    #[serde(default = "default_temp_exponent")]
    pub temp_exponent: f64,
}

fn default_intensity() -> f64 {
    1e-19
}

fn default_gamma() -> f64 {
    0.07
}

fn default_temp_exponent() -> f64 {
    0.75
}

impl CombRecipe {
    pub fn flat(center: f64, count: usize, spacing: f64) -> Self {
        CombRecipe {
            center,
            count,
            spacing,
            envelope: Envelope::Flat,
            intensity: default_intensity(),
            gamma_foreign: default_gamma(),
            temp_exponent: default_temp_exponent(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::config("comb needs at least one line"));
        }
        if !(self.spacing > 0.0) {
            return Err(Error::config(format!(
                "comb spacing {} is not positive",
                self.spacing
            )));
        }
        if !(self.center > 0.0 && self.intensity >= 0.0 && self.gamma_foreign > 0.0) {
            return Err(Error::config(
                "comb needs a positive center, non-negative intensity and positive width",
            ));
        }
        if self.center - self.half_span() <= 0.0 {
            return Err(Error::config("comb extends to non-positive wavenumbers"));
        }
        if let Envelope::GaussianEnvelope { fwhm } = self.envelope {
            if !(fwhm > 0.0) {
                return Err(Error::config(format!(
                    "envelope FWHM {fwhm} is not positive"
                )));
            }
        }
        Ok(())
    }

    fn half_span(&self) -> f64 {
        (self.count as f64 - 1.0) / 2.0 * self.spacing
    }

    pub fn positions(&self) -> Vec<f64> {
        let mid = (self.count as f64 - 1.0) / 2.0;
        (0..self.count)
            .map(|k| self.center + (k as f64 - mid) * self.spacing)
            .collect()
    }
}

/// Lines at `center + (k − (count−1)/2)·spacing`, sorted.
pub fn generate_comb(recipe: &CombRecipe) -> Result<LineTable> {
    recipe.validate()?;
    let lines = recipe
        .positions()
        .into_iter()
        .map(|w| {
            let s = match recipe.envelope {
                Envelope::Flat => recipe.intensity,
                Envelope::GaussianEnvelope { fwhm } => {
                    let sigma = fwhm / (2.0 * (2.0 * 2f64.ln()).sqrt());
                    let d = (w - recipe.center) / sigma;
                    recipe.intensity * (-0.5 * d * d).exp()
                }
            };
            SpectralLine::new(w, s, recipe.gamma_foreign).with_temp_exponent(recipe.temp_exponent)
        })
        .collect();
    Ok(LineTable::new(
        lines,
        format!("comb:{}x{}@{}", recipe.count, recipe.spacing, recipe.center),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LinelistSource {
    /// Fixed-width records or CSV (optionally gzipped).
    File {
        path: PathBuf,
    },
    Comb(CombRecipe),
    /// Must be supplied at run time (`--linelist`).
    External,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineSettings {
    #[serde(default = "default_cutoff")]
    pub cutoff: f64,
    #[serde(default)]
    pub regime: RegimeSelection,
}

fn default_cutoff() -> f64 {
    DEFAULT_CUTOFF
}

impl Default for EngineSettings {
    fn default() -> Self {
        EngineSettings {
            cutoff: DEFAULT_CUTOFF,
            regime: RegimeSelection::Auto,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub window: Window,
    pub grid: SpectralGrid,
    #[serde(default)]
    pub engine: EngineSettings,
    pub conditions: GasConditions,
    pub halfwidth: HalfwidthModel,
    pub narrowing: NarrowingMap,
    #[serde(default)]
    pub hooks: ProfileHooks,
    pub linelist: LinelistSource,
}

/// Run-time inputs that are not part of the scenario itself.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Replaces the scenario's line-list source.
    pub linelist: Option<PathBuf>,
    pub threads: Option<usize>,
}

/// Keys accepted by [`Scenario::apply_override`].
pub const OVERRIDE_KEYS: &[&str] = &[
    "window",
    "grid_step",
    "cutoff",
    "regime",
    "temperature",
    "pressure",
    "broadener_scale",
    "absorber_amagat",
    "absorber_atm",
    "absorber_torr",
    "path_length",
    "nonlinear_b",
    "halfwidth_mode",
    "saturation_shape",
    "gamma0",
    "delta_omega_rot",
    "saturation_multiplier",
    "critical_pressure",
    "a",
    "b",
    "c",
    "wing",
    "wing_m",
    "comb_count",
    "comb_spacing",
    "comb_center",
];

fn number(key: &str, value: &str) -> Result<f64> {
    value
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::config(format!("override `{key}` needs a number, got `{value}`")))
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::config("scenario name is empty"));
        }
        self.window.validate()?;
        self.grid.validate()?;
        let g = self.grid.window();
        let slack = 1e-9 * self.window.hi.abs().max(1.0);
        if g.lo < self.window.lo - slack || g.hi > self.window.hi + slack {
            return Err(Error::config(format!(
                "grid {}..{} leaves the spectral window {}",
                g.lo, g.hi, self.window
            )));
        }
        if !(self.engine.cutoff > 0.0) {
            return Err(Error::config(format!(
                "cutoff {} is not positive",
                self.engine.cutoff
            )));
        }
        self.conditions.validate()?;
        self.halfwidth.validate()?;
        self.narrowing.validate()?;
        self.narrowing.check_covers(self.window)?;
        self.hooks.validate()?;
        if let LinelistSource::Comb(recipe) = &self.linelist {
            recipe.validate()?;
        }
        Ok(())
    }

    /// Read a scenario file; `.json` is JSON, anything else TOML.
    pub fn load(path: &Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let scenario: Scenario = if is_json(path) {
            serde_json::from_str(&text)
                .map_err(|e| Error::config(format!("{}: {e}", path.display())))?
        } else {
            toml::from_str(&text).map_err(|e| Error::config(format!("{}: {e}", path.display())))?
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = if is_json(path) {
            self.to_json()?
        } else {
            self.to_toml()?
        };
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))
    }

    /// Apply one `key=value` override. Unknown keys list the valid ones.
    pub fn apply_override(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim();
        match key {
            "window" => {
                let w: Window = value.parse()?;
                self.window = w;
                self.grid.start = w.lo;
                self.grid.stop = w.hi;
            }
            "grid_step" => self.grid.step = number(key, value)?,
            "cutoff" => self.engine.cutoff = number(key, value)?,
            "regime" => self.engine.regime = value.trim().parse()?,
            "temperature" => self.conditions.temperature = number(key, value)?,
            "pressure" => {
                self.conditions.broadener.partial_pressure = number(key, value)?;
                self.conditions.broadener.partial_density = None;
            }
            "broadener_scale" => self.conditions.broadener.scale_vs_n2 = number(key, value)?,
            "absorber_amagat" => {
                self.conditions.absorber = AbsorberAmount::Amagat(number(key, value)?)
            }
            "absorber_atm" => {
                self.conditions.absorber = AbsorberAmount::PressureAtm(number(key, value)?)
            }
            "absorber_torr" => {
                self.conditions.absorber =
                    AbsorberAmount::PressureAtm(torr_to_atm(number(key, value)?))
            }
            "path_length" => self.conditions.path_length = number(key, value)?,
            "nonlinear_b" => {
                self.conditions.nonlinear = NonlinearCoefficient::Constant(number(key, value)?)
            }
            "halfwidth_mode" => self.halfwidth.mode = value.trim().parse()?,
            "saturation_shape" => {
                self.halfwidth.shape = match value.trim() {
                    "tanh" => SaturationShape::Tanh,
                    "hard-clamp" | "clamp" => SaturationShape::HardClamp,
                    other => {
                        return Err(Error::config(format!(
                            "unknown saturation shape `{other}` (tanh|hard-clamp)"
                        )))
                    }
                }
            }
            "gamma0" => self.halfwidth.gamma0 = number(key, value)?,
            "delta_omega_rot" => self.halfwidth.delta_omega_rot = number(key, value)?,
            "saturation_multiplier" => self.halfwidth.saturation_multiplier = number(key, value)?,
            "critical_pressure" => {
                self.halfwidth.critical_pressure = match value.trim() {
                    "derived" | "none" => None,
                    _ => Some(number(key, value)?),
                }
            }
            "a" => self
                .narrowing
                .set_bounds(Some(number(key, value)?), None, None),
            "b" => self
                .narrowing
                .set_bounds(None, None, Some(number(key, value)?)),
            "c" => self
                .narrowing
                .set_bounds(None, Some(number(key, value)?), None),
            "wing" => {
                self.hooks.wing = match value.trim() {
                    "identity" | "off" => WingHook::Identity,
                    v => match v.strip_prefix("fermi:") {
                        Some(w) => WingHook::Fermi {
                            width_scale: number(key, w)?,
                        },
                        None => {
                            return Err(Error::config(format!(
                                "unknown wing hook `{v}` (identity|fermi:WIDTH)"
                            )))
                        }
                    },
                }
            }
            "wing_m" => self.hooks.m = number(key, value)?,
            "comb_count" | "comb_spacing" | "comb_center" => {
                let LinelistSource::Comb(recipe) = &mut self.linelist else {
                    return Err(Error::config(format!(
                        "override `{key}` needs a comb line list"
                    )));
                };
                match key {
                    "comb_count" => {
                        recipe.count = value.trim().parse().map_err(|_| {
                            Error::config(format!(
                                "override `{key}` needs an integer, got `{value}`"
                            ))
                        })?
                    }
                    "comb_spacing" => recipe.spacing = number(key, value)?,
                    _ => recipe.center = number(key, value)?,
                }
            }
            _ => {
                return Err(Error::config(format!(
                    "unknown override key `{key}`; valid keys: {}",
                    OVERRIDE_KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    /// Apply `key=value` strings in order, then validate.
    pub fn apply_overrides<S: AsRef<str>>(&mut self, overrides: &[S]) -> Result<()> {
        for o in overrides {
            let o = o.as_ref();
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| Error::config(format!("override `{o}` is not key=value")))?;
            self.apply_override(k, v)?;
        }
        self.validate()
    }

    /// Lines that can reach the grid: the window widened by the cutoff.
    pub fn read_window(&self) -> Window {
        self.grid.window().widen(self.engine.cutoff)
    }

    pub fn load_lines(&self, linelist: Option<&Path>) -> Result<LineTable> {
        let window = Some(self.read_window());
        match (linelist, &self.linelist) {
            (Some(path), _) => read_linelist(path, window),
            (None, LinelistSource::File { path }) => read_linelist(path, window),
            (None, LinelistSource::Comb(recipe)) => generate_comb(recipe),
            (None, LinelistSource::External) => Err(Error::config(format!(
                "scenario `{}` needs a line list; pass --linelist PATH",
                self.name
            ))),
        }
    }

    pub fn engine_options(&self, threads: Option<usize>) -> EngineOptions {
        EngineOptions {
            cutoff: self.engine.cutoff,
            regime: self.engine.regime,
            threads,
            nearest_gamma: true,
        }
    }

    /// Compute the spectrum for an already loaded line table.
    pub fn compute(&self, table: &LineTable, threads: Option<usize>) -> Result<Spectrum> {
        self.validate()?;
        let mut spectrum = absorption_spectrum(
            table,
            &self.conditions,
            &self.halfwidth,
            &self.narrowing,
            &self.hooks,
            &self.grid,
            &self.engine_options(threads),
        )?;
        spectrum.metadata = SpectrumMetadata {
            scenario: self.name.clone(),
            parameters: serde_json::to_value(self).map_err(|e| Error::Format(e.to_string()))?,
        };
        Ok(spectrum)
    }

    pub fn run(&self, opts: &RunOptions) -> Result<Spectrum> {
        let table = self.load_lines(opts.linelist.as_deref())?;
        self.compute(&table, opts.threads)
    }
}

fn is_json(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

/// Helium mixture at temperature `t` with absorber amount and broadener pressure.
fn helium(
    t: f64,
    absorber: AbsorberAmount,
    scale: f64,
    p: f64,
    density: Option<f64>,
    x: f64,
) -> GasConditions {
    let mut broadener = BroadenerSpec::helium(scale, p);
    broadener.partial_density = density;
    GasConditions {
        temperature: t,
        absorber,
        broadener,
        path_length: x,
        nonlinear: NonlinearCoefficient::default(),
    }
}

fn single_region(window: Window, params: NarrowingParams) -> NarrowingMap {
    NarrowingMap {
        regions: vec![NarrowingRegion::new(window.lo, window.hi, params)],
    }
}

const NU3_WINDOW: Window = Window {
    lo: 2200.0,
    hi: 2500.0,
};
const NU2_WINDOW: Window = Window {
    lo: 620.0,
    hi: 700.0,
};
const THREE_NU3_WINDOW: Window = Window {
    lo: 6800.0,
    hi: 7100.0,
};
/// P/R split of the 3ν₃ region at the band origin.
const THREE_NU3_ORIGIN: f64 = 6972.58;
const THREE_NU3_CRITICAL: f64 = 131.86;
/// Q-branch critical pressure from the fitted width 0.35γ_N2.
const NU2_Q_CRITICAL: f64 = 37.2;
/// Δω_rot giving γ_s = 0.52·0.07·37.2 atm for the Q branch.
const NU2_Q_DELTA_ROT: f64 = 0.52 * 0.07 * NU2_Q_CRITICAL / 3.919;

fn grid_for(window: Window, step: f64) -> SpectralGrid {
    SpectralGrid {
        start: window.lo,
        stop: window.hi,
        step,
    }
}

fn nu3(name: &str, n_co2: f64, n_he: f64, p: f64) -> Scenario {
    Scenario {
        name: name.into(),
        description: format!("nu3 band in He at {p} atm, 298 K; line list supplied by the user"),
        window: NU3_WINDOW,
        grid: grid_for(NU3_WINDOW, 0.1),
        engine: EngineSettings::default(),
        conditions: helium(
            298.0,
            AbsorberAmount::Amagat(n_co2),
            0.52,
            p,
            Some(n_he),
            1.0,
        ),
        halfwidth: HalfwidthModel::new(1.2),
        narrowing: single_region(NU3_WINDOW, NarrowingParams::nu3()),
        hooks: ProfileHooks::default(),
        linelist: LinelistSource::External,
    }
}

fn nu2_q(name: &str, p_co2_torr: f64, scale: f64, p: f64) -> Scenario {
    let mut halfwidth = HalfwidthModel::new(NU2_Q_DELTA_ROT);
    halfwidth.critical_pressure = Some(NU2_Q_CRITICAL);
    Scenario {
        name: name.into(),
        description: format!(
            "nu2 Q branch in He at {p} atm (gamma_He = {scale} gamma_N2), 296 K, 3.85 cm path"
        ),
        window: NU2_WINDOW,
        grid: grid_for(NU2_WINDOW, 0.02),
        engine: EngineSettings::default(),
        conditions: helium(
            T_REF,
            AbsorberAmount::PressureAtm(torr_to_atm(p_co2_torr)),
            scale,
            p,
            None,
            3.85,
        ),
        halfwidth,
        narrowing: single_region(NU2_WINDOW, NarrowingParams::nu2_q_branch()),
        hooks: ProfileHooks::default(),
        linelist: LinelistSource::External,
    }
}

fn three_nu3(name: &str, n_co2: f64, n_he: f64, p: f64) -> Scenario {
    let w = THREE_NU3_WINDOW;
    let mut p_branch = NarrowingRegion::new(
        w.lo,
        THREE_NU3_ORIGIN,
        NarrowingParams::three_nu3_p_branch(),
    );
    p_branch.critical_pressure = Some(THREE_NU3_CRITICAL);
    let mut r_branch = NarrowingRegion::new(
        THREE_NU3_ORIGIN,
        w.hi,
        NarrowingParams::three_nu3_r_branch(),
    );
    r_branch.broadener_scale = Some(0.2);
    r_branch.critical_pressure = Some(THREE_NU3_CRITICAL * 0.2 / 0.52);
    Scenario {
        name: name.into(),
        description: format!(
            "3nu3 region in He at {p} atm, 297 K; P and R branches parameterized separately"
        ),
        window: w,
        grid: grid_for(w, 0.1),
        engine: EngineSettings::default(),
        conditions: helium(
            297.0,
            AbsorberAmount::Amagat(n_co2),
            0.52,
            p,
            Some(n_he),
            1.0,
        ),
        halfwidth: HalfwidthModel::new(1.2),
        narrowing: NarrowingMap {
            regions: vec![p_branch, r_branch],
        },
        hooks: ProfileHooks::default(),
        linelist: LinelistSource::External,
    }
}

fn comb_demo() -> Scenario {
    let window = Window {
        lo: 2300.0,
        hi: 2400.0,
    };
    Scenario {
        name: "comb_demo".into(),
        description: "41 equal lines spaced 1.2 cm-1 about 2349 cm-1 in He at 135.8 atm".into(),
        window,
        grid: grid_for(window, 0.05),
        engine: EngineSettings::default(),
        conditions: helium(
            T_REF,
            AbsorberAmount::Amagat(1.63e-5),
            0.52,
            135.8,
            None,
            1.0,
        ),
        halfwidth: HalfwidthModel::new(1.2),
        narrowing: single_region(window, NarrowingParams::nu3()),
        hooks: ProfileHooks::default(),
        linelist: LinelistSource::Comb(CombRecipe::flat(2349.0, 41, 1.2)),
    }
}

/// Every builtin scenario.
pub fn builtin_scenarios() -> Vec<Scenario> {
    vec![
        nu3("nu3_135atm", 1.63e-5, 124.3, 135.8),
        nu3("nu3_657atm", 2.73e-5, 603.4, 657.1),
        nu2_q("nu2Q_49atm", 4.2, 0.52, 49.6),
        nu2_q("nu2Q_9.85atm", 1.0, 0.52, 9.85),
        nu2_q("nu2Q_9.85atm_he064", 1.0, 0.64, 9.85),
        three_nu3("3nu3_131atm", 4.62, 121.2, 131.86),
        three_nu3("3nu3_645atm", 4.66, 598.7, 645.41),
        comb_demo(),
    ]
}

pub fn builtin(name: &str) -> Option<Scenario> {
    builtin_scenarios().into_iter().find(|s| s.name == name)
}

/// A builtin name or a path to a scenario file.
pub fn resolve(name_or_path: &str) -> Result<Scenario> {
    match builtin(name_or_path) {
        Some(s) => Ok(s),
        None => {
            let path = Path::new(name_or_path);
            if path.exists() {
                Scenario::load(path)
            } else {
                let names: Vec<String> = builtin_scenarios().into_iter().map(|s| s.name).collect();
                Err(Error::config(format!(
                    "`{name_or_path}` is neither a scenario file nor a builtin ({})",
                    names.join(", ")
                )))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        let all = builtin_scenarios();
        assert!(all.len() >= 7);
        for s in &all {
            s.validate().unwrap_or_else(|e| panic!("{}: {e}", s.name));
        }
        for name in [
            "nu3_135atm",
            "nu3_657atm",
            "nu2Q_49atm",
            "nu2Q_9.85atm",
            "3nu3_131atm",
            "3nu3_645atm",
            "comb_demo",
        ] {
            assert!(builtin(name).is_some(), "{name}");
        }
    }

    #[test]
    fn nu3_135atm_parameters() {
        let s = builtin("nu3_135atm").unwrap();
        assert_eq!(s.conditions.temperature, 298.0);
        assert_eq!(s.conditions.absorber, AbsorberAmount::Amagat(1.63e-5));
        assert_eq!(s.conditions.broadener.partial_density, Some(124.3));
        assert_eq!(s.conditions.broadener.partial_pressure, 135.8);
        assert_eq!(s.conditions.broadener.scale_vs_n2, 0.52);
        assert_eq!(s.halfwidth.delta_omega_rot, 1.2);
        let p = s.narrowing.regions[0].params;
        assert_eq!((p.a, p.b, p.c), (0.72, 3.92, 1.2));
    }

    #[test]
    fn nu2q_49atm_parameters() {
        let s = builtin("nu2Q_49atm").unwrap();
        assert_eq!(s.conditions.temperature, 296.0);
        assert_eq!(
            s.conditions.absorber,
            AbsorberAmount::PressureAtm(4.2 / 760.0)
        );
        assert_eq!(s.conditions.broadener.partial_pressure, 49.6);
        assert_eq!(s.conditions.path_length, 3.85);
        let p = s.narrowing.regions[0].params;
        assert_eq!((p.a, p.b, p.c), (0.6, 8.0, 1.2));
        assert_eq!(s.halfwidth.critical_pressure, Some(37.2));
    }

    #[test]
    fn three_nu3_branches() {
        let s = builtin("3nu3_131atm").unwrap();
        let p = s.narrowing.lookup(6900.0);
        let r = s.narrowing.lookup(7000.0);
        assert_eq!((p.params.c, p.params.b), (1.6, 8.0));
        assert_eq!((r.params.c, r.params.b), (1.2, 8.0));
        assert_eq!(r.broadener_scale, Some(0.2));
        assert!(r.critical_pressure.unwrap() < p.critical_pressure.unwrap());
    }

    #[test]
    fn comb_generation() {
        let one = generate_comb(&CombRecipe::flat(2349.0, 1, 1.2)).unwrap();
        assert_eq!(one.lines()[0].position, 2349.0);
        let three = generate_comb(&CombRecipe::flat(100.0, 3, 1.0)).unwrap();
        let pos: Vec<f64> = three.lines().iter().map(|l| l.position).collect();
        assert_eq!(pos, vec![99.0, 100.0, 101.0]);
        let flat = generate_comb(&CombRecipe::flat(2349.0, 41, 1.2)).unwrap();
        let total: f64 = flat.lines().iter().map(|l| l.intensity_ref).sum();
        assert!((total - 41e-19).abs() < 1e-30);
        assert!(generate_comb(&CombRecipe::flat(2349.0, 0, 1.2)).is_err());
        assert!(generate_comb(&CombRecipe::flat(2349.0, 3, 0.0)).is_err());
    }

    #[test]
    fn gaussian_envelope_peaks_at_center() {
        let mut r = CombRecipe::flat(1000.0, 5, 1.0);
        r.envelope = Envelope::GaussianEnvelope { fwhm: 2.0 };
        let t = generate_comb(&r).unwrap();
        let s: Vec<f64> = t.lines().iter().map(|l| l.intensity_ref).collect();
        assert_eq!(s[2], 1e-19);
        assert!((s[1] - 0.5e-19).abs() < 1e-30);
        assert_eq!(s[0], s[4]);
    }

    #[test]
    fn toml_and_json_round_trip() {
        for s in builtin_scenarios() {
            let back: Scenario = toml::from_str(&s.to_toml().unwrap()).unwrap();
            assert_eq!(back, s);
            let back: Scenario = serde_json::from_str(&s.to_json().unwrap()).unwrap();
            assert_eq!(back, s);
        }
    }

    #[test]
    fn module_doc_example_parses() {
        let text = r#"
name = "my_run"
window = { lo = 2300.0, hi = 2400.0 }
grid = { start = 2300.0, stop = 2400.0, step = 0.05 }

[conditions]
temperature = 296.0
absorber = { amagat = 1.63e-5 }
path_length = 1.0
broadener = { id = "he", scale_vs_n2 = 0.52, partial_pressure = 135.8 }

[halfwidth]
delta_omega_rot = 1.2

[[narrowing]]
lo = 2300.0
hi = 2400.0
params = { a = 0.72, c = 1.2, b = 3.92 }

[linelist]
kind = "comb"
center = 2349.0
count = 41
spacing = 1.2
"#;
        let s: Scenario = toml::from_str(text).unwrap();
        s.validate().unwrap();
        assert_eq!(s.conditions, comb_demo().conditions);
        assert_eq!(s.linelist, comb_demo().linelist);
    }

    #[test]
    fn overrides() {
        let mut s = comb_demo();
        s.apply_overrides(&["cutoff=300", "pressure=200", "a=0.5", "regime=below-ps"])
            .unwrap();
        assert_eq!(s.engine.cutoff, 300.0);
        assert_eq!(s.conditions.broadener.partial_pressure, 200.0);
        assert_eq!(s.narrowing.regions[0].params.a, 0.5);
        assert_eq!(s.engine.regime, RegimeSelection::BelowPs);
        s.apply_overrides(&["window=2340:2360", "grid_step=0.5"])
            .unwrap();
        assert_eq!(s.grid.len(), 41);

        let err = s.apply_overrides(&["bogus=1"]).unwrap_err().to_string();
        assert!(
            err.contains("valid keys") && err.contains("cutoff"),
            "{err}"
        );
        assert!(s.apply_overrides(&["cutoff"]).is_err());
        assert!(s.apply_overrides(&["cutoff=abc"]).is_err());
        assert!(builtin("nu3_135atm")
            .unwrap()
            .apply_override("comb_count", "3")
            .is_err());
    }

    #[test]
    fn overlapping_map_rejected() {
        let mut s = comb_demo();
        s.narrowing
            .regions
            .push(NarrowingRegion::new(2350.0, 2450.0, NarrowingParams::nu3()));
        assert!(s.validate().is_err());
        let mut s = comb_demo();
        s.narrowing.regions[0].hi = 2390.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn external_linelist_required() {
        let s = builtin("nu3_135atm").unwrap();
        assert!(matches!(s.load_lines(None), Err(Error::Config(_))));
    }
}
