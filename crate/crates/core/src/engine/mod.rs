//! Line-by-line absorption spectra.
//!
//! For every grid point ω the engine sums, over all lines with
//! `|ω − ω_i| ≤ cutoff`,
//!
//! ```text
//!   α(ω) = Σ N_i · FL(ω; ω_i, γ, S_i) · Ab(ω, ω_i) · Γ_i(ω)
//! ```
//!
//! and produces three spectra: the conventional Lorentzian reference
//! (conventional width, Γ ≡ 1, no wing hook), the narrowed spectrum, and the
//! effective absorption that adds the nonlinear term.
//!
//! Sums run in ascending line position with compensated accumulation. Grid
//! points are independent, so the output is bit-identical for any number of
//! worker threads.

mod compare;
mod kernel;
mod summation;

use serde::{Deserialize, Serialize};

pub use self::compare::{compare_to_reference, Curve, ResidualReport};
pub use self::summation::CompensatedSum;

use self::kernel::{fill_chunk, ChunkOutput, KernelInput, LineColumns, CHUNK};
use crate::error::{Error, Result};
use crate::halfwidth::{
    conventional_halfwidth, critical_pressure, effective_halfwidth, BroadenerSpec, HalfwidthModel,
};
use crate::linelist::{LineTable, SpectralLine};
use crate::narrowing::{NarrowingParams, NarrowingShape, Regime};
use crate::profile::{population_factor, ProfileHooks};
use crate::units::{amagat_to_number_density, atm_to_amagat, Window};

/// Conventional far-wing cutoff (cm⁻¹).
pub const DEFAULT_CUTOFF: f64 = 600.0;

/// Below this the nonlinear term uses its small-α limit.
const SMALL_ALPHA: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SpectralGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        let g = SpectralGrid { start, stop, step };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(Error::config(format!(
                "grid start {} must be below stop {}",
                self.start, self.stop
            )));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::config(format!(
                "grid step {} is not positive",
                self.step
            )));
        }
        Ok(())
    }

    /// `floor((stop − start)/step) + 1`, tolerant of rounding in the ratio.
    pub fn len(&self) -> usize {
        let n = (self.stop - self.start) / self.step;
        (n + 1e-9 * n.max(1.0)).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }

    pub fn window(&self) -> Window {
        Window {
            lo: self.start,
            hi: self.point(self.len() - 1),
        }
    }
}

/// How the absorber amount is given.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AbsorberAmount {
    Amagat(f64),
    PressureAtm(f64),
}

/// Nonlinear absorption coefficient b(ω) in cm⁻¹.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum NonlinearCoefficient {
    Constant(f64),
    /// `(ω, b)` pairs, ascending in ω, linearly interpolated and held
    /// constant beyond the ends.
    Tabulated(Vec<[f64; 2]>),
}

impl Default for NonlinearCoefficient {
    fn default() -> Self {
        NonlinearCoefficient::Constant(0.0)
    }
}

impl NonlinearCoefficient {
    pub fn eval(&self, omega: f64) -> f64 {
        match self {
            NonlinearCoefficient::Constant(b) => *b,
            NonlinearCoefficient::Tabulated(pts) => {
                let k = pts.partition_point(|p| p[0] < omega);
                match (k.checked_sub(1), pts.get(k)) {
                    (Some(i), Some(hi)) => {
                        let lo = pts[i];
                        let t = (omega - lo[0]) / (hi[0] - lo[0]);
                        lo[1] + t * (hi[1] - lo[1])
                    }
                    (Some(i), None) => pts[i][1],
                    (None, Some(hi)) => hi[1],
                    (None, None) => 0.0,
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            NonlinearCoefficient::Constant(b) => *b == 0.0,
            NonlinearCoefficient::Tabulated(pts) => pts.iter().all(|p| p[1] == 0.0),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            NonlinearCoefficient::Constant(b) if !(*b >= 0.0) => Err(Error::config(format!(
                "nonlinear coefficient {b} is negative"
            ))),
            NonlinearCoefficient::Tabulated(pts) => {
                if pts.windows(2).any(|w| !(w[0][0] < w[1][0])) {
                    return Err(Error::config(
                        "nonlinear coefficient table is not ascending",
                    ));
                }
                if pts.iter().any(|p| !(p[1] >= 0.0)) {
                    return Err(Error::config(
                        "nonlinear coefficient table has negative values",
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasConditions {
    /// Temperature (K).
    pub temperature: f64,
    pub absorber: AbsorberAmount,
    pub broadener: BroadenerSpec,
    /// Optical path (cm).
    pub path_length: f64,
    #[serde(default)]
    pub nonlinear: NonlinearCoefficient,
}

impl GasConditions {
    pub fn validate(&self) -> Result<()> {
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return Err(Error::config(format!(
                "temperature {} K is not positive",
                self.temperature
            )));
        }
        if !(self.path_length > 0.0) {
            return Err(Error::config(format!(
                "path length {} is not positive",
                self.path_length
            )));
        }
        let amount = match self.absorber {
            AbsorberAmount::Amagat(v) | AbsorberAmount::PressureAtm(v) => v,
        };
        if !(amount >= 0.0) {
            return Err(Error::config(format!(
                "absorber amount {amount} is negative"
            )));
        }
        self.broadener.validate()?;
        self.nonlinear.validate()
    }

    /// Absorber molecules per cm³.
    pub fn absorber_number_density(&self) -> f64 {
        let amagat = match self.absorber {
            AbsorberAmount::Amagat(n) => n,
            AbsorberAmount::PressureAtm(p) => atm_to_amagat(p, self.temperature),
        };
        amagat_to_number_density(amagat)
    }

    /// Broadener pressure driving the collisional width (atm).
    pub fn pressure(&self) -> f64 {
        self.broadener.partial_pressure
    }
}

/// Narrowing parameters and width overrides for lines in `[lo, hi)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NarrowingRegion {
    pub lo: f64,
    pub hi: f64,
    pub params: NarrowingParams,
    /// Replaces the broadener's width scale for lines in this region.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub broadener_scale: Option<f64>,
    /// Replaces the halfwidth model's Δω_rot for lines in this region.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_omega_rot: Option<f64>,
    /// Replaces the critical pressure for lines in this region.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub critical_pressure: Option<f64>,
}

impl NarrowingRegion {
    pub fn new(lo: f64, hi: f64, params: NarrowingParams) -> Self {
        NarrowingRegion {
            lo,
            hi,
            params,
            broadener_scale: None,
            delta_omega_rot: None,
            critical_pressure: None,
        }
    }

    fn distance(&self, omega: f64) -> f64 {
        if omega < self.lo {
            self.lo - omega
        } else if omega >= self.hi {
            omega - self.hi
        } else {
            0.0
        }
    }
}

/// Wavenumber intervals mapped to narrowing parameters. Lines outside every
/// interval use the nearest one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NarrowingMap {
    pub regions: Vec<NarrowingRegion>,
}

impl NarrowingMap {
    /// One set of parameters everywhere.
    pub fn uniform(params: NarrowingParams) -> Self {
        NarrowingMap {
            regions: vec![NarrowingRegion::new(
                f64::NEG_INFINITY,
                f64::INFINITY,
                params,
            )],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.regions.is_empty() {
            return Err(Error::config("narrowing map has no regions"));
        }
        for r in &self.regions {
            if !(r.lo < r.hi) {
                return Err(Error::config(format!(
                    "empty narrowing interval [{}, {})",
                    r.lo, r.hi
                )));
            }
            r.params.validate()?;
            if let Some(s) = r.broadener_scale {
                if !(s > 0.0 && s <= 2.0) {
                    return Err(Error::config(format!(
                        "region broadener scale {s} outside (0, 2]"
                    )));
                }
            }
            if let Some(d) = r.delta_omega_rot {
                if !(d > 0.0) {
                    return Err(Error::config(format!(
                        "region delta_omega_rot {d} is not positive"
                    )));
                }
            }
            if let Some(p) = r.critical_pressure {
                if !(p >= 0.0) {
                    return Err(Error::config(format!(
                        "region critical pressure {p} is negative"
                    )));
                }
            }
        }
        let mut sorted: Vec<&NarrowingRegion> = self.regions.iter().collect();
        sorted.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        for w in sorted.windows(2) {
            if w[1].lo < w[0].hi {
                return Err(Error::config(format!(
                    "narrowing intervals [{}, {}) and [{}, {}) overlap",
                    w[0].lo, w[0].hi, w[1].lo, w[1].hi
                )));
            }
        }
        Ok(())
    }

    /// Check that the intervals cover `window` without gaps.
    pub fn check_covers(&self, window: Window) -> Result<()> {
        let mut sorted: Vec<&NarrowingRegion> = self.regions.iter().collect();
        sorted.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut reached = window.lo;
        for r in sorted {
            if r.hi <= reached {
                continue;
            }
            if r.lo > reached {
                break;
            }
            reached = r.hi;
        }
        if reached < window.hi {
            return Err(Error::config(format!(
                "narrowing intervals leave [{}, {}] uncovered from {reached}",
                window.lo, window.hi
            )));
        }
        Ok(())
    }

    pub fn lookup(&self, omega: f64) -> &NarrowingRegion {
        if let Some(r) = self.regions.iter().find(|r| r.lo <= omega && omega < r.hi) {
            return r;
        }
        self.regions
            .iter()
            .min_by(|a, b| a.distance(omega).total_cmp(&b.distance(omega)))
            .expect("validated map is non-empty")
    }

    /// Set a, c, b in every region.
    pub fn set_bounds(&mut self, a: Option<f64>, c: Option<f64>, b: Option<f64>) {
        for r in &mut self.regions {
            if let Some(a) = a {
                r.params.a = a;
            }
            if let Some(c) = c {
                r.params.c = c;
            }
            if let Some(b) = b {
                r.params.b = b;
            }
        }
    }
}

/// Which lines get the narrowing function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeSelection {
    /// Compare the broadener pressure with each line's critical pressure.
    #[default]
    Auto,
    AbovePs,
    BelowPs,
}

impl std::str::FromStr for RegimeSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(RegimeSelection::Auto),
            "above-ps" => Ok(RegimeSelection::AbovePs),
            "below-ps" => Ok(RegimeSelection::BelowPs),
            _ => Err(Error::config(format!(
                "unknown regime `{s}` (auto|above-ps|below-ps)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineOptions {
    /// Maximum detuning `|ω − ω_i|` that contributes (cm⁻¹).
    pub cutoff: f64,
    pub regime: RegimeSelection,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    /// Fill [`Spectrum::gamma_nearest`].
    pub nearest_gamma: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            cutoff: DEFAULT_CUTOFF,
            regime: RegimeSelection::Auto,
            threads: None,
            nearest_gamma: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct SpectrumMetadata {
    pub scenario: String,
    /// Resolved parameters of the run.
    pub parameters: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub grid: SpectralGrid,
    pub alpha_lorentz: Vec<f64>,
    pub alpha_narrowed: Vec<f64>,
    pub alpha_effective: Vec<f64>,
    /// Γ of the nearest line at each grid point.
    pub gamma_nearest: Option<Vec<f64>>,
    pub metadata: SpectrumMetadata,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Lorentz,
    Narrowed,
    Effective,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lorentz" => Ok(Variant::Lorentz),
            "narrowed" => Ok(Variant::Narrowed),
            "effective" => Ok(Variant::Effective),
            _ => Err(Error::config(format!(
                "unknown variant `{s}` (lorentz|narrowed|effective)"
            ))),
        }
    }
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.alpha_lorentz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha_lorentz.is_empty()
    }

    pub fn omega(&self, i: usize) -> f64 {
        self.grid.point(i)
    }

    pub fn alpha(&self, variant: Variant) -> &[f64] {
        match variant {
            Variant::Lorentz => &self.alpha_lorentz,
            Variant::Narrowed => &self.alpha_narrowed,
            Variant::Effective => &self.alpha_effective,
        }
    }

    pub fn curve(&self, variant: Variant) -> Curve {
        Curve {
            omega: self.grid.points().collect(),
            alpha: self.alpha(variant).to_vec(),
        }
    }
}

/// `α_eff = α + ln(1 + b/(2α)·(1 − e^{−2αx}))/(2x)`.
///
/// For α below 1e-30 the limit `ln(1 + b·x)/(2x)` is used.
pub fn effective_absorption(alpha: f64, b: f64, x: f64) -> Result<f64> {
    if !(b >= 0.0) {
        return Err(Error::domain(format!(
            "nonlinear coefficient {b} is negative"
        )));
    }
    if !(x > 0.0) {
        return Err(Error::domain(format!("path length {x} is not positive")));
    }
    if !(alpha >= 0.0) {
        return Err(Error::domain(format!("absorption {alpha} is negative")));
    }
    if b == 0.0 {
        return Ok(alpha);
    }
    let growth = if alpha < SMALL_ALPHA {
        x
    } else {
        -(-2.0 * alpha * x).exp_m1() / (2.0 * alpha)
    };
    Ok(alpha + (b * growth).ln_1p() / (2.0 * x))
}

/// Resolved widths and narrowing for one line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSetup {
    /// Conventional (linear-law) halfwidth.
    pub gamma_conventional: f64,
    pub gamma_saturated: f64,
    /// Width of the narrowed line's Lorentzian.
    pub gamma_narrowed: f64,
    pub critical_pressure: f64,
    pub regime: Regime,
    pub shape: NarrowingShape,
    /// `N·S(T)`: absorber density times line intensity.
    pub strength: f64,
}

/// Resolve widths, regime and narrowing shape for `line`.
pub fn setup_line(
    line: &SpectralLine,
    cond: &GasConditions,
    hw: &HalfwidthModel,
    map: &NarrowingMap,
    regime: RegimeSelection,
) -> Result<LineSetup> {
    let region = map.lookup(line.position);
    let mut model = hw.clone();
    if let Some(d) = region.delta_omega_rot {
        model.delta_omega_rot = d;
    }
    let mut broadener = cond.broadener.clone();
    if let Some(s) = region.broadener_scale {
        broadener.scale_vs_n2 = s;
    }
    let t = cond.temperature;
    let gamma_c = conventional_halfwidth(line, &broadener, t, &model)?;
    if !(gamma_c > 0.0) {
        return Err(Error::domain(format!(
            "line at {} cm-1 has zero halfwidth; set a positive pressure or gamma0",
            line.position
        )));
    }
    let gamma_s = model.saturated_halfwidth();
    let p_s = match region.critical_pressure.or(hw.critical_pressure) {
        Some(p) => p,
        None => critical_pressure(line, &broadener, t, &model)?,
    };
    let regime = match regime {
        RegimeSelection::AbovePs => Regime::AbovePs,
        RegimeSelection::BelowPs => Regime::BelowPs,
        RegimeSelection::Auto if cond.pressure() >= p_s => Regime::AbovePs,
        RegimeSelection::Auto => Regime::BelowPs,
    };
    let (gamma_n, shape) = match regime {
        Regime::AbovePs => (
            gamma_s,
            NarrowingShape::above_critical(gamma_c, gamma_s, &region.params)?,
        ),
        Regime::BelowPs => (
            effective_halfwidth(gamma_c, &model)?,
            NarrowingShape::neutral(),
        ),
    };
    let density = population_factor(line, t, cond.absorber_number_density())?;
    Ok(LineSetup {
        gamma_conventional: gamma_c,
        gamma_saturated: gamma_s,
        gamma_narrowed: gamma_n,
        critical_pressure: p_s,
        regime,
        shape,
        strength: density * line.intensity_ref,
    })
}

/// Compute the Lorentzian, narrowed and effective spectra on `grid`.
pub fn absorption_spectrum(
    table: &LineTable,
    cond: &GasConditions,
    hw: &HalfwidthModel,
    map: &NarrowingMap,
    hooks: &ProfileHooks,
    grid: &SpectralGrid,
    opts: &EngineOptions,
) -> Result<Spectrum> {
    grid.validate()?;
    cond.validate()?;
    hw.validate()?;
    map.validate()?;
    hooks.validate()?;
    if !(opts.cutoff > 0.0) {
        return Err(Error::config(format!(
            "cutoff {} is not positive",
            opts.cutoff
        )));
    }

    let reach = grid.window().widen(opts.cutoff);
    let range = table.index_range(reach.lo, reach.hi);
    let lines = &table.lines()[range];
    let mut columns = LineColumns::with_capacity(lines.len());
    for line in lines {
        let s = setup_line(line, cond, hw, map, opts.regime)?;
        columns.push(
            line.position,
            s.strength,
            s.gamma_conventional,
            s.gamma_narrowed,
            s.shape,
        );
    }
    let input = KernelInput {
        lines: &columns,
        grid,
        cutoff: opts.cutoff,
        hooks,
        temperature: cond.temperature,
    };

    let n = grid.len();
    let mut lorentz = vec![0.0; n];
    let mut narrowed = vec![0.0; n];
    let mut gamma = (opts.nearest_gamma && !columns.is_empty()).then(|| vec![1.0; n]);

    let mut run = || {
        use rayon::prelude::*;
        let work = lorentz
            .par_chunks_mut(CHUNK)
            .zip(narrowed.par_chunks_mut(CHUNK))
            .enumerate();
        match gamma.as_mut() {
            Some(g) => work
                .zip(g.par_chunks_mut(CHUNK))
                .for_each(|((i, (l, nw)), gc)| {
                    let out = ChunkOutput {
                        lorentz: l,
                        narrowed: nw,
                        gamma_nearest: Some(gc),
                    };
                    fill_chunk(&input, i * CHUNK, out);
                }),
            None => work.for_each(|(i, (l, nw))| {
                let out = ChunkOutput {
                    lorentz: l,
                    narrowed: nw,
                    gamma_nearest: None,
                };
                fill_chunk(&input, i * CHUNK, out);
            }),
        }
    };
    match opts.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .map_err(|e| Error::config(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }

    let effective = if cond.nonlinear.is_zero() {
        narrowed.clone()
    } else {
        narrowed
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                effective_absorption(a, cond.nonlinear.eval(grid.point(i)), cond.path_length)
            })
            .collect::<Result<Vec<_>>>()?
    };

    Ok(Spectrum {
        grid: *grid,
        alpha_lorentz: lorentz,
        alpha_narrowed: narrowed,
        alpha_effective: effective,
        gamma_nearest: gamma,
        metadata: SpectrumMetadata::default(),
    })
}
