//! Time-domain synthesis: the truncated SRRC sub-pulse, the DDOP, the
//! general (cyclically extended) DDOP and the reference pulses used for
//! Gabor-limit and TDM/FDM comparisons.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{DdopError, Result};
use crate::grid::{SampleGrid, SampledSignal, SignalOrigin};
use crate::params::DdopParams;

pub const DEFAULT_OVERSAMPLING: usize = 16;

/// Relative slack on the `|t| <= Ta/2` support test, so that grid points
/// computed as `t_k - n*T` land inside the support despite rounding.
const SUPPORT_TOL: f64 = 1e-9;

/// Distance (in zero-ISI units) within which a removable singularity is
/// replaced by its limit.
const SINGULAR_TOL: f64 = 1e-8;

/// Normalized sinc, `sin(pi x)/(pi x)`.
#[inline]
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = PI * x;
        px.sin() / px
    }
}

/// Unit-amplitude SRRC shape at `x` zero-ISI intervals from the center.
fn srrc_shape(x: f64, beta: f64) -> f64 {
    let x = x.abs();
    if beta == 0.0 {
        return sinc(x);
    }
    if x < SINGULAR_TOL {
        return 1.0 - beta + 4.0 * beta / PI;
    }
    let x0 = 1.0 / (4.0 * beta);
    if (x - x0).abs() < SINGULAR_TOL * x0.max(1.0) {
        let arg = PI / (4.0 * beta);
        return beta / 2f64.sqrt() * ((1.0 + 2.0 / PI) * arg.sin() + (1.0 - 2.0 / PI) * arg.cos());
    }
    let num = (PI * x * (1.0 - beta)).sin() + 4.0 * beta * x * (PI * x * (1.0 + beta)).cos();
    let den = PI * x * (1.0 - (4.0 * beta * x).powi(2));
    num / den
}

/// Truncated SRRC sub-pulse `a(t)` with energy close to `1/N`.
///
/// Zero outside `|t| <= Ta/2`. Even in `t` by construction.
pub fn srrc_value(params: &DdopParams, t: f64) -> f64 {
    let at = t.abs();
    if at > 0.5 * params.ta() * (1.0 + SUPPORT_TOL) {
        return 0.0;
    }
    let m = f64::from(params.m());
    let amp = (m / (f64::from(params.n()) * params.t())).sqrt();
    amp * srrc_shape(m * at / params.t(), params.beta())
}

/// Samples the sub-pulse on `grid`, which must cover `[-Ta/2, Ta/2]`.
pub fn srrc_subpulse(params: &DdopParams, grid: &SampleGrid) -> Result<SampledSignal> {
    let half = 0.5 * params.ta();
    if !grid.covers(-half, half) {
        return Err(DdopError::Domain(format!(
            "grid [{}, {}] does not cover the sub-pulse support [{}, {}]",
            grid.start(),
            grid.end(),
            -half,
            half
        )));
    }
    let values = grid
        .points()
        .map(|t| Complex64::new(srrc_value(params, t), 0.0))
        .collect();
    SampledSignal::new(*grid, values, SignalOrigin::SubPulse { params: *params })
}

/// Grid with `dt = T/(oversampling*M)` covering a train of `subpulses`
/// sub-pulses centered at `0, T, ..., (subpulses-1)T`, plus one zero sample
/// beyond each end of the support.
pub fn pulse_train_grid(params: &DdopParams, oversampling: usize, subpulses: u32) -> Result<SampleGrid> {
    if oversampling < 2 {
        return Err(DdopError::InvalidParameter(format!(
            "oversampling must be >= 2, got {oversampling}"
        )));
    }
    if subpulses == 0 {
        return Err(DdopError::InvalidParameter("need at least one sub-pulse".into()));
    }
    let per_symbol = oversampling * params.m() as usize;
    let dt = params.t() / per_symbol as f64;
    // Ta/2 = Qt*T/M spans exactly Qt*oversampling samples.
    let half = params.qt() as usize * oversampling;
    let count = (subpulses as usize - 1) * per_symbol + 2 * half + 3;
    SampleGrid::new(-((half + 1) as f64) * dt, dt, count)
}

fn pulse_train(
    params: &DdopParams,
    grid: &SampleGrid,
    oversampling: usize,
    shifts: impl Iterator<Item = u32>,
) -> Vec<Complex64> {
    let per_symbol = oversampling * params.m() as usize;
    let half = params.qt() as usize * oversampling;
    let mut values = vec![0.0f64; grid.count()];
    for slot in shifts {
        let center = half + 1 + slot as usize * per_symbol;
        let shift = f64::from(slot) * params.t();
        let lo = center.saturating_sub(half + 1);
        let hi = (center + half + 1).min(grid.count() - 1);
        for (k, v) in values.iter_mut().enumerate().take(hi + 1).skip(lo) {
            *v += srrc_value(params, grid.point(k) - shift);
        }
    }
    values.into_iter().map(|v| Complex64::new(v, 0.0)).collect()
}

/// `u(t) = sum_{n=0}^{N-1} a(t - nT)`.
///
/// Requires `2*Qt <= M`; longer sub-pulses need [`synthesize_general_ddop`].
pub fn synthesize_ddop(params: &DdopParams, oversampling: usize) -> Result<SampledSignal> {
    if !params.is_strict() {
        return Err(DdopError::Constraint(format!(
            "2*Qt = {} exceeds M = {}; sub-pulses would overlap, use synthesize_general_ddop",
            2 * params.qt(),
            params.m()
        )));
    }
    let grid = pulse_train_grid(params, oversampling, params.n())?;
    let values = pulse_train(params, &grid, oversampling, 0..params.n());
    SampledSignal::new(grid, values, SignalOrigin::Ddop { params: *params })
}

/// General DDOP with `D` cyclic sub-pulses on each side:
/// `sum_{n=-D}^{N-1+D} a(t - (n+D)T)`.
///
/// Each sub-pulse keeps the `1/N` energy normalization, so the total energy
/// is about `(N+2D)/N`. Overlapping sub-pulses add coherently.
pub fn synthesize_general_ddop(params: &DdopParams, oversampling: usize) -> Result<SampledSignal> {
    let d = i64::from(params.d());
    let count = params.general_subpulse_count();
    let grid = pulse_train_grid(params, oversampling, count)?;
    let slots = (-d..=i64::from(params.n()) - 1 + d).map(|n| (n + d) as u32);
    let values = pulse_train(params, &grid, oversampling, slots);
    SampledSignal::new(grid, values, SignalOrigin::GeneralDdop { params: *params })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceKind {
    /// `exp(-t^2 / (2 s^2))`; attains the Gabor limit.
    Gaussian,
    /// Rectangle of duration `s` (TDM-like, short in time).
    RectangularTime,
    /// `sinc(t/s)`, whose spectrum is a rectangle of width `1/s` (FDM-like).
    RectangularFrequency,
}

/// Unit-energy reference pulse centered on zero.
pub fn reference_pulse(kind: ReferenceKind, scale: f64, grid: &SampleGrid) -> Result<SampledSignal> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(DdopError::InvalidParameter(format!("scale must be > 0, got {scale}")));
    }
    let (lo, hi) = match kind {
        ReferenceKind::Gaussian => (-4.0 * scale, 4.0 * scale),
        ReferenceKind::RectangularTime => (-0.5 * scale, 0.5 * scale),
        ReferenceKind::RectangularFrequency => (-4.0 * scale, 4.0 * scale),
    };
    if !grid.covers(lo, hi) {
        return Err(DdopError::Domain(format!(
            "{kind:?} pulse needs a grid covering [{lo}, {hi}]"
        )));
    }
    let shape = |t: f64| match kind {
        ReferenceKind::Gaussian => (-t * t / (2.0 * scale * scale)).exp(),
        ReferenceKind::RectangularTime => {
            if t.abs() <= 0.5 * scale * (1.0 + SUPPORT_TOL) {
                1.0
            } else {
                0.0
            }
        }
        ReferenceKind::RectangularFrequency => sinc(t / scale),
    };
    let raw: Vec<Complex64> = grid.points().map(|t| Complex64::new(shape(t), 0.0)).collect();
    let unnormalized = SampledSignal::new(*grid, raw, SignalOrigin::Reference)?;
    let gain = unnormalized.energy().sqrt().recip();
    let values = unnormalized.values().iter().map(|v| v * gain).collect();
    SampledSignal::new(*grid, values, SignalOrigin::Reference)
}
