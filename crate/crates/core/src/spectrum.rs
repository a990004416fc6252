//! Closed-form frequency response of the SRRC sub-pulse and of the DDOP,
//! written as a train of truncated `sinc` sub-tones weighted by `A(f)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{DdopError, Result};
use crate::grid::{SampleGrid, Spectrum};
use crate::params::DdopParams;
use crate::pulse::sinc;

/// Sub-tone truncation used by the reference simulations (zero crossings).
pub const DEFAULT_SINC_ZEROS: u32 = 100;

/// Extra sub-tones kept beyond the SRRC band edge on each side.
const SUBTONE_MARGIN: i64 = 2;

/// SRRC frequency response `A(f)`: flat at `sqrt(T/(MN))` inside
/// `M(1-beta)/(2T)`, raised-cosine taper up to `M(1+beta)/(2T)`, zero beyond.
pub fn srrc_frequency_response(params: &DdopParams, f: f64) -> f64 {
    let m = f64::from(params.m());
    let n = f64::from(params.n());
    let t = params.t();
    let beta = params.beta();
    let af = f.abs();
    let flat_edge = m * (1.0 - beta) / (2.0 * t);
    let band_edge = m * (1.0 + beta) / (2.0 * t);
    if af <= flat_edge {
        (t / (m * n)).sqrt()
    } else if af <= band_edge {
        let taper = 1.0 + (PI * t / (beta * m) * (af - flat_edge)).cos();
        (t / (2.0 * m * n) * taper).sqrt()
    } else {
        0.0
    }
}

/// Frequency grid on which the analytic spectrum of a train of `subpulses`
/// is resolved: `df = 1/(bins_per_subtone * subpulses * T)`, symmetric about
/// zero and spanning one sub-tone spacing past the band edge.
pub fn essential_frequency_grid(params: &DdopParams, subpulses: u32, bins_per_subtone: usize) -> Result<SampleGrid> {
    if bins_per_subtone == 0 || subpulses == 0 {
        return Err(DdopError::InvalidParameter(
            "bins_per_subtone and subpulses must be >= 1".into(),
        ));
    }
    let df = 1.0 / (bins_per_subtone as f64 * f64::from(subpulses) * params.t());
    let span = params.band_edge() + 1.0 / params.t();
    let half = (span / df).ceil() as usize;
    SampleGrid::centered(df, half)
}

/// Analytic spectrum `U(f)` of the strict DDOP (N sub-tones per unit `1/T`).
pub fn ddop_spectrum_analytic(params: &DdopParams, grid: &SampleGrid, sinc_zeros: u32) -> Result<Spectrum> {
    subtone_train_spectrum(params, params.n(), grid, sinc_zeros)
}

/// Analytic spectrum of the general DDOP, a train of `N + 2D` sub-pulses
/// starting at `t = 0`; each sub-pulse keeps `A(f)` with its `1/N` scaling.
pub fn general_ddop_spectrum_analytic(params: &DdopParams, grid: &SampleGrid, sinc_zeros: u32) -> Result<Spectrum> {
    subtone_train_spectrum(params, params.general_subpulse_count(), grid, sinc_zeros)
}

/// `count * exp(-j pi (count-1) T f) * A(f) * sum_m exp(j pi (count-1) m) sinc(count T f - m count)`
/// with each sinc cut at its `sinc_zeros`-th zero crossing and `m` limited to
/// the sub-tones that can overlap the support of `A(f)`.
fn subtone_train_spectrum(params: &DdopParams, count: u32, grid: &SampleGrid, sinc_zeros: u32) -> Result<Spectrum> {
    if sinc_zeros == 0 {
        return Err(DdopError::InvalidParameter("sinc_zeros must be >= 1".into()));
    }
    let edge = params.band_edge();
    if !grid.covers(-edge, edge) {
        return Err(DdopError::Domain(format!(
            "frequency grid [{}, {}] does not span the band [-{edge}, {edge}]",
            grid.start(),
            grid.end()
        )));
    }
    let t = params.t();
    let max_df = 1.0 / (8.0 * f64::from(count) * t);
    if grid.step() > max_df * (1.0 + 1e-12) {
        return Err(DdopError::Domain(format!(
            "frequency step {} cannot resolve sub-tones of width 1/({count}T); need <= {max_df}",
            grid.step()
        )));
    }

    let k = f64::from(count);
    let zeros = f64::from(sinc_zeros);
    let m_max = (f64::from(params.m()) * (1.0 + params.beta()) / 2.0).ceil() as i64 + SUBTONE_MARGIN;
    // only sub-tones with |count*(Tf - m)| <= zeros contribute
    let reach = zeros / k;
    let alternating = count.is_multiple_of(2); // (count-1) odd

    let values = grid
        .points()
        .map(|f| {
            let a = srrc_frequency_response(params, f);
            if a == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let tf = t * f;
            let lo = ((tf - reach).ceil() as i64).max(-m_max);
            let hi = ((tf + reach).floor() as i64).min(m_max);
            let mut sum = 0.0;
            for m in lo..=hi {
                let x = k * (tf - m as f64);
                if x.abs() > zeros {
                    continue;
                }
                let sign = if alternating && m.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
                sum += sign * sinc(x);
            }
            Complex64::from_polar(k * a * sum, -PI * (k - 1.0) * tf)
        })
        .collect();
    Spectrum::new(*grid, values)
}
