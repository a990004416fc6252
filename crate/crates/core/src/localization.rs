//! Energy-weighted time and frequency moments by trapezoidal quadrature.
//!
//! Means are computed first and dispersions as central second moments, which
//! avoids the cancellation of the expanded `E[t^2] - t_mean^2` form when the
//! mean is far from the origin (a DDOP has `t_mean = T(N-1)/2`).

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{DdopError, Result};
use crate::grid::{trapezoid, SampleGrid, SampledSignal, SignalOrigin, Spectrum};
use crate::pulse::DEFAULT_OVERSAMPLING;
use crate::spectrum::{
    ddop_spectrum_analytic, essential_frequency_grid, general_ddop_spectrum_analytic, DEFAULT_SINC_ZEROS,
};

/// Energies below this are treated as an all-zero input.
pub const MIN_ENERGY: f64 = 1e-30;

/// Largest energy fraction tolerated in the outermost bins of a spectrum.
pub const MAX_EDGE_ENERGY_FRACTION: f64 = 1e-4;

/// `1/(4 pi)`.
pub const GABOR_LIMIT: f64 = 0.25 * std::f64::consts::FRAC_1_PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Numeric,
    Analytic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalizationReport {
    pub t_mean: f64,
    pub f_mean: f64,
    pub delta_t: f64,
    pub delta_f: f64,
    pub delta_a: f64,
    pub method: Method,
    pub energy: f64,
}

/// How [`localize`] obtains the frequency response of a signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum SpectrumSource {
    /// Closed-form `U(f)`; only valid for DDOP and general DDOP signals.
    Analytic { sinc_zeros: u32, bins_per_subtone: usize },
    /// Zero-padded DFT of the samples.
    Dft { zero_pad: usize },
}

impl SpectrumSource {
    pub fn analytic() -> Self {
        SpectrumSource::Analytic {
            sinc_zeros: DEFAULT_SINC_ZEROS,
            bins_per_subtone: DEFAULT_OVERSAMPLING,
        }
    }
}

fn weighted_moments(grid: &SampleGrid, power: &[f64]) -> Result<(f64, f64, f64)> {
    let step = grid.step();
    let energy = trapezoid(power, step);
    if energy.is_nan() || energy <= MIN_ENERGY {
        return Err(DdopError::Degenerate(format!(
            "energy {energy:e} is too small to normalize by"
        )));
    }
    let first: Vec<f64> = grid.points().zip(power).map(|(x, w)| x * w).collect();
    let mean = trapezoid(&first, step) / energy;
    let second: Vec<f64> = grid.points().zip(power).map(|(x, w)| (x - mean).powi(2) * w).collect();
    let var = trapezoid(&second, step) / energy;
    Ok((energy, mean, var.max(0.0).sqrt()))
}

/// `(t_mean, delta_t)` of a sampled signal.
pub fn time_moments(signal: &SampledSignal) -> Result<(f64, f64)> {
    let power: Vec<f64> = signal.values().iter().map(|v| v.norm_sqr()).collect();
    let (_, mean, dispersion) = weighted_moments(signal.grid(), &power)?;
    Ok((mean, dispersion))
}

/// `(f_mean, delta_f)` of a sampled spectrum.
///
/// Fails with a domain error when the outer 1% of bins on either side hold
/// more than [`MAX_EDGE_ENERGY_FRACTION`] of the energy, i.e. the grid does
/// not span the essential support.
pub fn freq_moments(spectrum: &Spectrum) -> Result<(f64, f64)> {
    let power: Vec<f64> = spectrum.values().iter().map(|v| v.norm_sqr()).collect();
    let (_, mean, dispersion) = weighted_moments(spectrum.grid(), &power)?;
    let fraction = edge_energy_fraction(&power);
    if fraction > MAX_EDGE_ENERGY_FRACTION {
        return Err(DdopError::Domain(format!(
            "{fraction:.3e} of the spectral energy sits in the boundary bins; widen the frequency grid"
        )));
    }
    Ok((mean, dispersion))
}

fn edge_energy_fraction(power: &[f64]) -> f64 {
    let edge = (power.len() / 100).max(1);
    let total: f64 = power.iter().sum();
    let outer: f64 = power[..edge].iter().chain(&power[power.len() - edge..]).sum();
    outer / total
}

/// Zero-padded DFT of `signal`, on an ascending frequency grid with
/// `df = 1/(zero_pad * count * dt)`.
///
/// The DFT is scaled by `dt` and carries the `exp(-j 2 pi f t_start)` phase of
/// the grid origin, so it approximates the continuous transform. With this
/// scaling the discrete Parseval relation gives `sum |G|^2 df = sum |g|^2 dt`;
/// for signals whose first and last samples vanish that is also the equality
/// of the trapezoidal energies.
pub fn spectrum_dft(signal: &SampledSignal, zero_pad: usize) -> Result<Spectrum> {
    if zero_pad == 0 {
        return Err(DdopError::InvalidParameter("zero_pad_factor must be >= 1".into()));
    }
    let grid = signal.grid();
    let len = grid.count() * zero_pad;
    let dt = grid.step();
    let mut buffer: Vec<Complex64> = Vec::with_capacity(len);
    buffer.extend_from_slice(signal.values());
    buffer.resize(len, Complex64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(len).process(&mut buffer);

    let df = 1.0 / (len as f64 * dt);
    let negative = len / 2;
    let fgrid = SampleGrid::new(-(negative as f64) * df, df, len)?;
    let t0 = grid.start();
    let values = (0..len)
        .map(|i| {
            let bin = (i + len - negative) % len;
            let f = fgrid.point(i);
            buffer[bin] * dt * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * f * t0)
        })
        .collect();
    Spectrum::new(fgrid, values)
}

/// Frequency response of a DDOP or general DDOP from its closed form.
pub fn analytic_spectrum_of(signal: &SampledSignal, sinc_zeros: u32, bins_per_subtone: usize) -> Result<Spectrum> {
    match signal.origin() {
        SignalOrigin::Ddop { params } => {
            let grid = essential_frequency_grid(&params, params.n(), bins_per_subtone)?;
            ddop_spectrum_analytic(&params, &grid, sinc_zeros)
        }
        SignalOrigin::GeneralDdop { params } => {
            let grid = essential_frequency_grid(&params, params.general_subpulse_count(), bins_per_subtone)?;
            general_ddop_spectrum_analytic(&params, &grid, sinc_zeros)
        }
        other => Err(DdopError::InvalidParameter(format!(
            "analytic spectrum is only defined for DDOP signals, got {other:?}"
        ))),
    }
}

/// Time and frequency localization of `signal`, with `delta_a = delta_t * delta_f`.
pub fn localize(signal: &SampledSignal, source: SpectrumSource) -> Result<LocalizationReport> {
    let (t_mean, delta_t) = time_moments(signal)?;
    let spectrum = match source {
        SpectrumSource::Analytic {
            sinc_zeros,
            bins_per_subtone,
        } => analytic_spectrum_of(signal, sinc_zeros, bins_per_subtone)?,
        SpectrumSource::Dft { zero_pad } => spectrum_dft(signal, zero_pad)?,
    };
    let (f_mean, delta_f) = freq_moments(&spectrum)?;
    Ok(LocalizationReport {
        t_mean,
        f_mean,
        delta_t,
        delta_f,
        delta_a: delta_t * delta_f,
        method: Method::Numeric,
        energy: signal.energy(),
    })
}

/// Both sides of the second-moment shift identity
/// `int r^2 |X(a r - b)|^2 dr = int r^2 |X(a r)|^2 dr + (b/a)^2 E`
/// for an even `X`, where `E = int |X(a r)|^2 dr` is the energy of the
/// scaled function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftIdentity {
    pub shifted: f64,
    pub centered_plus_offset: f64,
}

impl ShiftIdentity {
    pub fn relative_error(&self) -> f64 {
        (self.shifted - self.centered_plus_offset).abs() / self.shifted.abs()
    }
}

/// Evaluates both sides of the shift identity by quadrature.
///
/// `support` is a half-width beyond which `x` is negligible; each integral
/// uses `2*half_samples + 1` points over that support mapped through the
/// scale and shift.
pub fn shift_identity<F>(x: F, support: f64, scale: f64, shift: f64, half_samples: usize) -> Result<ShiftIdentity>
where
    F: Fn(f64) -> Complex64,
{
    if scale == 0.0 || !scale.is_finite() || !shift.is_finite() {
        return Err(DdopError::InvalidParameter("scale must be nonzero and finite".into()));
    }
    let step = support / scale.abs() / half_samples as f64;
    let centered_grid = SampleGrid::centered(step, half_samples)?;
    let center = shift / scale;
    let shifted_grid = SampleGrid::new(center - half_samples as f64 * step, step, 2 * half_samples + 1)?;

    let moment = |grid: &SampleGrid, arg: &dyn Fn(f64) -> f64| -> (f64, f64) {
        let power: Vec<f64> = grid.points().map(|r| x(arg(r)).norm_sqr()).collect();
        let second: Vec<f64> = grid.points().zip(&power).map(|(r, w)| r * r * w).collect();
        (trapezoid(&second, step), trapezoid(&power, step))
    };
    let (shifted, _) = moment(&shifted_grid, &|r| scale * r - shift);
    let (centered, energy) = moment(&centered_grid, &|r| scale * r);
    Ok(ShiftIdentity {
        shifted,
        centered_plus_offset: centered + center * center * energy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::DdopParams;
    use crate::pulse::{reference_pulse, synthesize_ddop, ReferenceKind};

    fn gaussian(scale: f64) -> SampledSignal {
        let grid = SampleGrid::centered(scale / 200.0, 2000).unwrap();
        reference_pulse(ReferenceKind::Gaussian, scale, &grid).unwrap()
    }

    #[test]
    fn centered_gaussian_moments() {
        let g = gaussian(0.3);
        let (mean, dt) = time_moments(&g).unwrap();
        assert!(mean.abs() < 1e-12);
        // |g|^2 = exp(-t^2/s^2) has standard deviation s/sqrt(2)
        assert!((dt - 0.3 / 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn zero_signal_is_degenerate() {
        let grid = SampleGrid::new(0.0, 0.1, 10).unwrap();
        let z = SampledSignal::from_samples(grid, vec![Complex64::new(0.0, 0.0); 10]).unwrap();
        assert!(matches!(time_moments(&z), Err(DdopError::Degenerate(_))));
        let s = Spectrum::new(grid, vec![Complex64::new(0.0, 0.0); 10]).unwrap();
        assert!(matches!(freq_moments(&s), Err(DdopError::Degenerate(_))));
    }

    #[test]
    fn ddop_time_mean_is_center_of_train() {
        let p = DdopParams::new(32, 16, 1.0, 0.1, 2).unwrap();
        let u = synthesize_ddop(&p, 16).unwrap();
        let (mean, _) = time_moments(&u).unwrap();
        assert!((mean - 7.5).abs() < 1e-12);
    }

    #[test]
    fn shift_moves_mean_only() {
        let p = DdopParams::new(32, 8, 1.0, 0.3, 2).unwrap();
        let u = synthesize_ddop(&p, 16).unwrap();
        let (m0, d0) = time_moments(&u).unwrap();
        let (m1, d1) = time_moments(&u.shifted(2.75).unwrap()).unwrap();
        assert!((m1 - m0 - 2.75).abs() < 1e-10);
        assert!((d1 - d0).abs() / d0 < 1e-10);
    }

    #[test]
    fn rectangular_spectrum_dispersion() {
        let width = 3.0;
        let grid = SampleGrid::centered(width / 4000.0, 2400).unwrap();
        let values = grid
            .points()
            .map(|f| {
                if f.abs() <= width / 2.0 + 1e-12 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        let s = Spectrum::new(grid, values).unwrap();
        let (mean, df) = freq_moments(&s).unwrap();
        assert!(mean.abs() < 1e-12);
        assert!((df - width / 12f64.sqrt()).abs() / df < 1e-3);
    }

    #[test]
    fn narrow_frequency_grid_is_rejected() {
        let grid = SampleGrid::centered(0.01, 100).unwrap();
        let values = grid.points().map(|_| Complex64::new(1.0, 0.0)).collect();
        let s = Spectrum::new(grid, values).unwrap();
        assert!(matches!(freq_moments(&s), Err(DdopError::Domain(_))));
    }

    #[test]
    fn dft_parseval_and_shift_invariance() {
        let p = DdopParams::new(32, 8, 1.0, 0.3, 2).unwrap();
        let u = synthesize_ddop(&p, 8).unwrap();
        let s = spectrum_dft(&u, 2).unwrap();
        assert!((s.energy() - u.energy()).abs() / u.energy() < 1e-6);
        let shifted = spectrum_dft(&u.shifted(-1.3).unwrap(), 2).unwrap();
        for (a, b) in s.values().iter().zip(shifted.values()) {
            assert!((a.norm() - b.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_reaches_gabor_limit() {
        let g = gaussian(0.05);
        let r = localize(&g, SpectrumSource::Dft { zero_pad: 4 }).unwrap();
        assert!((r.delta_a - GABOR_LIMIT).abs() / GABOR_LIMIT < 1e-3, "{}", r.delta_a);
        assert!(r.f_mean.abs() < 1e-9);
    }

    #[test]
    fn analytic_source_requires_ddop() {
        let g = gaussian(0.05);
        assert!(localize(&g, SpectrumSource::analytic()).is_err());
    }

    #[test]
    fn shift_identity_on_gaussian() {
        let x = |r: f64| Complex64::new((-r * r).exp(), 0.0);
        let id = shift_identity(x, 7.0, 2.5, 3.0, 4000).unwrap();
        assert!(id.relative_error() < 1e-10, "{:?}", id);
        let id = shift_identity(x, 7.0, -0.4, -1.0, 4000).unwrap();
        assert!(id.relative_error() < 1e-10, "{:?}", id);
    }
}
