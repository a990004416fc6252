//! Uniform sample grids and the sampled time and frequency containers.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{DdopError, Result};
use crate::params::DdopParams;

/// Uniform grid `start + k*step` for `k` in `[0, count)`.
///
/// Used for both time (`start = t_start`, `step = dt`) and frequency
/// (`start = f_start`, `step = df`) axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    start: f64,
    step: f64,
    count: usize,
}

impl SampleGrid {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(DdopError::InvalidParameter(format!(
                "grid step must be > 0, got {step}"
            )));
        }
        if !start.is_finite() {
            return Err(DdopError::InvalidParameter("grid start must be finite".into()));
        }
        if count < 2 {
            return Err(DdopError::InvalidParameter(format!(
                "grid needs >= 2 points, got {count}"
            )));
        }
        Ok(Self { start, step, count })
    }

    /// Grid with `2*half + 1` points centered on zero.
    pub fn centered(step: f64, half: usize) -> Result<Self> {
        Self::new(-(half as f64) * step, step, 2 * half + 1)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    #[inline]
    pub fn point(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.point(self.count - 1)
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |k| self.point(k))
    }

    /// True when `[lo, hi]` lies inside the grid, up to a small fraction of a step.
    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        let slack = 1e-9 * self.step;
        self.start <= lo + slack && self.end() >= hi - slack
    }
}

/// Trapezoidal rule on uniformly spaced samples.
pub fn trapezoid(samples: &[f64], step: f64) -> f64 {
    match samples {
        [] | [_] => 0.0,
        [first, inner @ .., last] => step * (0.5 * (first + last) + inner.iter().sum::<f64>()),
    }
}

/// Where a sampled signal came from; the analytic spectrum path needs this.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SignalOrigin {
    SubPulse { params: DdopParams },
    Ddop { params: DdopParams },
    GeneralDdop { params: DdopParams },
    Reference,
    External,
}

/// Uniformly sampled complex waveform with its cached energy.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    grid: SampleGrid,
    values: Vec<Complex64>,
    energy: f64,
    origin: SignalOrigin,
}

impl SampledSignal {
    pub fn new(grid: SampleGrid, values: Vec<Complex64>, origin: SignalOrigin) -> Result<Self> {
        if values.len() != grid.count() {
            return Err(DdopError::InvalidParameter(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.count()
            )));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(DdopError::InvalidParameter("non-finite sample".into()));
        }
        let power: Vec<f64> = values.iter().map(|v| v.norm_sqr()).collect();
        let energy = trapezoid(&power, grid.step());
        Ok(Self {
            grid,
            values,
            energy,
            origin,
        })
    }

    /// Wraps caller-provided samples.
    pub fn from_samples(grid: SampleGrid, values: Vec<Complex64>) -> Result<Self> {
        Self::new(grid, values, SignalOrigin::External)
    }

    pub fn grid(&self) -> &SampleGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Trapezoidal integral of `|g(t)|^2`.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn origin(&self) -> SignalOrigin {
        self.origin
    }

    /// Same samples on a grid moved by `tau` seconds.
    pub fn shifted(&self, tau: f64) -> Result<Self> {
        let grid = SampleGrid::new(self.grid.start + tau, self.grid.step, self.grid.count)?;
        Self::new(grid, self.values.clone(), SignalOrigin::External)
    }

    /// Multiplies by `exp(j*2*pi*f0*t)`.
    pub fn modulated(&self, f0: f64) -> Result<Self> {
        let values = self
            .values
            .iter()
            .zip(self.grid.points())
            .map(|(v, t)| v * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * f0 * t))
            .collect();
        Self::new(self.grid, values, SignalOrigin::External)
    }
}

/// Uniformly sampled complex frequency response.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: SampleGrid,
    values: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(grid: SampleGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.count() {
            return Err(DdopError::InvalidParameter(format!(
                "{} bins for a grid of {} points",
                values.len(),
                grid.count()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &SampleGrid {
        &self.grid
    }

    pub fn f_start(&self) -> f64 {
        self.grid.start()
    }

    pub fn df(&self) -> f64 {
        self.grid.step()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Trapezoidal integral of `|G(f)|^2`.
    pub fn energy(&self) -> f64 {
        let power: Vec<f64> = self.values.iter().map(|v| v.norm_sqr()).collect();
        trapezoid(&power, self.grid.step())
    }
}
