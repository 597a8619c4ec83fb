//! Per-line precomputation and the grid × line summation loop.
//!
//! Lines are stored column-wise. Each chunk of grid points walks the lines in
//! cache-sized blocks; inside a block, groups of `LANES` neighbouring grid
//! points share the lines all of them can see, which keeps several
//! independent accumulator chains in flight. Every grid point still receives
//! its terms in ascending line order.

use std::f64::consts::PI;

use super::summation::CompensatedSum;
use super::SpectralGrid;
use crate::narrowing::NarrowingShape;
use crate::profile::ProfileHooks;
use wide::f64x8;

/// Grid points per work item.
pub(crate) const CHUNK: usize = 256;
/// Lines per cache block.
const BLOCK: usize = 2048;
/// Grid points evaluated together.
const LANES: usize = 8;

/// Everything the inner loop needs about the lines, resolved for the current
/// gas conditions.
#[derive(Debug, Default)]
pub(crate) struct LineColumns {
    pub omega: Vec<f64>,
    /// `N·S·γ_c/π` for the conventional Lorentzian.
    lorentz_amp: Vec<f64>,
    lorentz_g2: Vec<f64>,
    /// `N·S·γ_n/π` for the narrowed line (γ_n = γ_s above p_s).
    narrowed_amp: Vec<f64>,
    narrowed_g2: Vec<f64>,
    core_edge: Vec<f64>,
    wing_edge: Vec<f64>,
    core_value: Vec<f64>,
    wing_value: Vec<f64>,
    shape: Vec<NarrowingShape>,
}

impl LineColumns {
    pub fn with_capacity(n: usize) -> Self {
        LineColumns {
            omega: Vec::with_capacity(n),
            lorentz_amp: Vec::with_capacity(n),
            lorentz_g2: Vec::with_capacity(n),
            narrowed_amp: Vec::with_capacity(n),
            narrowed_g2: Vec::with_capacity(n),
            core_edge: Vec::with_capacity(n),
            wing_edge: Vec::with_capacity(n),
            core_value: Vec::with_capacity(n),
            wing_value: Vec::with_capacity(n),
            shape: Vec::with_capacity(n),
        }
    }

    pub fn push(
        &mut self,
        omega: f64,
        strength: f64,
        gamma_c: f64,
        gamma_n: f64,
        shape: NarrowingShape,
    ) {
        self.omega.push(omega);
        self.lorentz_amp.push(strength * gamma_c / PI);
        self.lorentz_g2.push(gamma_c * gamma_c);
        self.narrowed_amp.push(strength * gamma_n / PI);
        self.narrowed_g2.push(gamma_n * gamma_n);
        self.core_edge.push(shape.core_edge);
        self.wing_edge.push(shape.wing_edge);
        self.core_value.push(shape.core_value);
        self.wing_value.push(shape.wing_value);
        self.shape.push(shape);
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// Γ of line `i` at detuning `delta`.
    #[inline(always)]
    fn factor(&self, i: usize, delta: f64) -> f64 {
        let ad = delta.abs();
        if ad <= self.core_edge[i] {
            self.core_value[i]
        } else if ad >= self.wing_edge[i] {
            self.wing_value[i]
        } else {
            self.shape[i].eval(ad)
        }
    }

    /// Conventional and narrowed contributions of line `i` at `omega`. Both
    /// share one division.
    #[inline(always)]
    fn terms(&self, i: usize, omega: f64, wing: f64) -> (f64, f64) {
        let d = omega - self.omega[i];
        let d2 = d * d;
        let a = d2 + self.lorentz_g2[i];
        let b = d2 + self.narrowed_g2[i];
        let r = 1.0 / (a * b);
        let lor = self.lorentz_amp[i] * b * r;
        let nar = self.narrowed_amp[i] * (self.factor(i, d) * wing) * a * r;
        (lor, nar)
    }
}

pub(crate) struct ChunkOutput<'a> {
    pub lorentz: &'a mut [f64],
    pub narrowed: &'a mut [f64],
    pub gamma_nearest: Option<&'a mut [f64]>,
}

/// Read-only inputs shared by every chunk.
pub(crate) struct KernelInput<'a> {
    pub lines: &'a LineColumns,
    pub grid: &'a SpectralGrid,
    pub cutoff: f64,
    pub hooks: &'a ProfileHooks,
    pub temperature: f64,
}

/// Fill one chunk of grid points starting at grid index `first`.
pub(crate) fn fill_chunk(input: &KernelInput<'_>, first: usize, out: ChunkOutput<'_>) {
    let lines = input.lines;
    let n = out.lorentz.len();
    let omegas: Vec<f64> = (0..n).map(|j| input.grid.point(first + j)).collect();
    let bounds: Vec<(usize, usize)> = omegas
        .iter()
        .map(|&w| {
            let lo = lines.omega.partition_point(|&p| p < w - input.cutoff);
            let hi = lines.omega.partition_point(|&p| p <= w + input.cutoff);
            (lo, hi.max(lo))
        })
        .collect();

    let mut lor = vec![CompensatedSum::new(); n];
    let mut nar = vec![CompensatedSum::new(); n];

    if input.hooks.is_identity() {
        sum_chunk(
            lines,
            &omegas,
            &bounds,
            &mut lor,
            &mut nar,
            |_, _| 1.0,
            true,
        );
    } else {
        let (hooks, t) = (input.hooks, input.temperature);
        sum_chunk(
            lines,
            &omegas,
            &bounds,
            &mut lor,
            &mut nar,
            |w, wi| hooks.wing_factor(w, wi, t),
            false,
        );
    }

    for j in 0..n {
        out.lorentz[j] = lor[j].value();
        out.narrowed[j] = nar[j].value();
    }
    if let Some(gamma) = out.gamma_nearest {
        for j in 0..n {
            gamma[j] = nearest_factor(lines, omegas[j]);
        }
    }
}

#[inline(always)]
fn sum_chunk<W: Fn(f64, f64) -> f64>(
    lines: &LineColumns,
    omegas: &[f64],
    bounds: &[(usize, usize)],
    lor: &mut [CompensatedSum],
    nar: &mut [CompensatedSum],
    wing: W,
    identity: bool,
) {
    let union_lo = bounds.iter().map(|b| b.0).min().unwrap_or(0);
    let union_hi = bounds.iter().map(|b| b.1).max().unwrap_or(0);
    let mut block_start = union_lo;
    while block_start < union_hi {
        let block_end = (block_start + BLOCK).min(union_hi);
        let clip = |s: usize, e: usize| (s.max(block_start), e.min(block_end));

        for g in (0..omegas.len()).step_by(LANES) {
            let ge = (g + LANES).min(omegas.len());
            let group = &bounds[g..ge];
            // Lines every point of the group can see.
            let shared_lo = group.iter().map(|b| b.0).max().unwrap_or(0);
            let shared_hi = group.iter().map(|b| b.1).min().unwrap_or(0);
            if ge - g < LANES || shared_lo >= shared_hi {
                for j in g..ge {
                    let (s, e) = clip(bounds[j].0, bounds[j].1);
                    scalar(lines, omegas[j], s, e, &mut lor[j], &mut nar[j], &wing);
                }
                continue;
            }
            for j in g..ge {
                let (s, e) = clip(bounds[j].0, shared_lo);
                scalar(lines, omegas[j], s, e, &mut lor[j], &mut nar[j], &wing);
            }
            let (s, e) = clip(shared_lo, shared_hi);
            if s < e {
                let w: &[f64; LANES] = omegas[g..ge].try_into().expect("full group");
                let l: &mut [CompensatedSum; LANES] =
                    (&mut lor[g..ge]).try_into().expect("full group");
                let r: &mut [CompensatedSum; LANES] =
                    (&mut nar[g..ge]).try_into().expect("full group");
                lanes(lines, w, s, e, l, r, &wing, identity);
            }
            for j in g..ge {
                let (s, e) = clip(shared_hi, bounds[j].1);
                scalar(lines, omegas[j], s, e, &mut lor[j], &mut nar[j], &wing);
            }
        }
        block_start = block_end;
    }
}

#[inline(always)]
fn scalar<W: Fn(f64, f64) -> f64>(
    lines: &LineColumns,
    omega: f64,
    start: usize,
    end: usize,
    lor: &mut CompensatedSum,
    nar: &mut CompensatedSum,
    wing: &W,
) {
    for i in start..end {
        let (l, n) = lines.terms(i, omega, wing(omega, lines.omega[i]));
        lor.add(l);
        nar.add(n);
    }
}

#[inline(always)]
#[allow(clippy::too_many_arguments)]
fn lanes<W: Fn(f64, f64) -> f64>(
    lines: &LineColumns,
    omega: &[f64; LANES],
    start: usize,
    end: usize,
    lor: &mut [CompensatedSum; LANES],
    nar: &mut [CompensatedSum; LANES],
    wing: &W,
    identity: bool,
) {
    if !identity {
        for i in start..end {
            for k in 0..LANES {
                let (l, n) = lines.terms(i, omega[k], wing(omega[k], lines.omega[i]));
                lor[k].add(l);
                nar[k].add(n);
            }
        }
        return;
    }
    let mut acc = VectorSums::load(omega, lor, nar);
    for i in start..end {
        acc.add_line(lines, i);
    }
    acc.store(lor, nar);
}

/// Eight grid points with compensated accumulators, updated with exactly the
/// scalar arithmetic of [`LineColumns::terms`] and [`CompensatedSum::add`].
struct VectorSums {
    omega: f64x8,
    lor: (f64x8, f64x8),
    nar: (f64x8, f64x8),
}

#[inline(always)]
fn two_sum(acc: &mut (f64x8, f64x8), value: f64x8) {
    let (sum, comp) = *acc;
    let t = sum + value;
    let v = t - sum;
    *acc = (t, comp + ((sum - (t - v)) + (value - v)));
}

impl VectorSums {
    #[inline(always)]
    fn load(
        omega: &[f64; LANES],
        lor: &[CompensatedSum; LANES],
        nar: &[CompensatedSum; LANES],
    ) -> Self {
        let pack = |src: &[CompensatedSum; LANES]| {
            let p: [(f64, f64); LANES] = std::array::from_fn(|k| src[k].parts());
            (f64x8::new(p.map(|x| x.0)), f64x8::new(p.map(|x| x.1)))
        };
        VectorSums {
            omega: f64x8::new(*omega),
            lor: pack(lor),
            nar: pack(nar),
        }
    }

    #[inline(always)]
    fn store(&self, lor: &mut [CompensatedSum; LANES], nar: &mut [CompensatedSum; LANES]) {
        let (ls, lc) = (self.lor.0.to_array(), self.lor.1.to_array());
        let (ns, nc) = (self.nar.0.to_array(), self.nar.1.to_array());
        for k in 0..LANES {
            lor[k] = CompensatedSum::from_parts(ls[k], lc[k]);
            nar[k] = CompensatedSum::from_parts(ns[k], nc[k]);
        }
    }

    #[inline(always)]
    fn add_line(&mut self, lines: &LineColumns, i: usize) {
        let d = self.omega - f64x8::splat(lines.omega[i]);
        let d2 = d * d;
        let ad = d.abs();
        let a = d2 + f64x8::splat(lines.lorentz_g2[i]);
        let b = d2 + f64x8::splat(lines.narrowed_g2[i]);
        let r = f64x8::splat(1.0) / (a * b);
        let core = ad.simd_le(f64x8::splat(lines.core_edge[i]));
        let wing = ad.simd_ge(f64x8::splat(lines.wing_edge[i]));
        let g = core.select(
            f64x8::splat(lines.core_value[i]),
            f64x8::splat(lines.wing_value[i]),
        );
        let mut nt = f64x8::splat(lines.narrowed_amp[i]) * g * a * r;
        let mut transition = (!(core | wing)).to_bitmask();
        if transition != 0 {
            let om = self.omega.to_array();
            let mut patched = nt.to_array();
            while transition != 0 {
                let k = transition.trailing_zeros() as usize;
                patched[k] = lines.terms(i, om[k], 1.0).1;
                transition &= transition - 1;
            }
            nt = f64x8::new(patched);
        }
        two_sum(&mut self.lor, f64x8::splat(lines.lorentz_amp[i]) * b * r);
        two_sum(&mut self.nar, nt);
    }
}

/// Γ of the line closest to `omega` (lower line on ties).
fn nearest_factor(lines: &LineColumns, omega: f64) -> f64 {
    let positions = &lines.omega;
    let k = positions.partition_point(|&p| p < omega);
    let pick = match (k.checked_sub(1), positions.get(k)) {
        (Some(below), Some(&above)) => {
            if omega - positions[below] <= above - omega {
                below
            } else {
                k
            }
        }
        (Some(below), None) => below,
        (None, Some(_)) => k,
        (None, None) => return 1.0,
    };
    lines.factor(pick, omega - positions[pick])
}
