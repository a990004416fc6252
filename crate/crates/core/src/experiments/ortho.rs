//! Numerical orthogonality of the DDOP on the delay-Doppler grid.
//!
//! `I(m, n) = int u(t) conj(u(t - m T/M)) exp(-j 2 pi n t / (N T)) dt`
//! vanishes for `(m, n) != (0, 0)` when the sub-pulse is an untruncated
//! square-root Nyquist pulse; truncation leaves a residual that shrinks as
//! `Qt` grows.

use std::ops::RangeInclusive;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{DdopError, Result};
use crate::grid::trapezoid;
use crate::params::DdopParams;
use crate::pulse::synthesize_ddop;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    /// `I(0, 0)`.
    pub energy: f64,
    /// Largest `|I(m, n)| / I(0, 0)` over `(m, n) != (0, 0)`.
    pub max_residual: f64,
    pub worst_delay: i32,
    pub worst_doppler: i32,
    /// Largest normalized residual restricted to pure Doppler offsets (`m = 0`).
    pub max_doppler_residual: f64,
    pub pairs: usize,
}

/// Full delay and Doppler ranges `[-(M-1), M-1] x [-(N-1), N-1]`.
pub fn full_ranges(params: &DdopParams) -> (RangeInclusive<i32>, RangeInclusive<i32>) {
    let m = params.m() as i32 - 1;
    let n = params.n() as i32 - 1;
    (-m..=m, -n..=n)
}

pub fn orthogonality_check(
    params: &DdopParams,
    oversampling: usize,
    delays: RangeInclusive<i32>,
    dopplers: RangeInclusive<i32>,
) -> Result<OrthogonalityReport> {
    let (full_delay, full_doppler) = full_ranges(params);
    let within = |r: &RangeInclusive<i32>, full: &RangeInclusive<i32>| {
        !r.is_empty() && full.contains(r.start()) && full.contains(r.end())
    };
    if !within(&delays, &full_delay) || !within(&dopplers, &full_doppler) {
        return Err(DdopError::Domain(format!(
            "ranges {delays:?} x {dopplers:?} must be non-empty and lie within {full_delay:?} x {full_doppler:?}"
        )));
    }

    let u = synthesize_ddop(params, oversampling)?;
    let grid = *u.grid();
    let values = u.values();
    let len = values.len();
    let step = grid.step();
    let period = f64::from(params.n()) * params.t();

    let phasors: Vec<(i32, Vec<Complex64>)> = dopplers
        .clone()
        .map(|n| {
            let w = -2.0 * std::f64::consts::PI * f64::from(n) / period;
            (n, grid.points().map(|t| Complex64::from_polar(1.0, w * t)).collect())
        })
        .collect();

    let inner = |lagged: &[Complex64], phasor: &[Complex64]| -> Complex64 {
        let re: Vec<f64> = lagged.iter().zip(phasor).map(|(p, e)| (p * e).re).collect();
        let im: Vec<f64> = lagged.iter().zip(phasor).map(|(p, e)| (p * e).im).collect();
        Complex64::new(trapezoid(&re, step), trapezoid(&im, step))
    };

    let energy = u.energy();
    let per_delay: Vec<(f64, i32, i32, f64, usize)> = delays
        .clone()
        .into_par_iter()
        .map(|m| {
            let shift = m as isize * oversampling as isize;
            let lagged: Vec<Complex64> = (0..len as isize)
                .map(|k| {
                    let j = k - shift;
                    if (0..len as isize).contains(&j) {
                        values[k as usize] * values[j as usize].conj()
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            let mut worst = (0.0, m, 0, 0.0, 0usize);
            for (n, phasor) in &phasors {
                if m == 0 && *n == 0 {
                    continue;
                }
                let residual = inner(&lagged, phasor).norm() / energy;
                worst.4 += 1;
                if m == 0 {
                    worst.3 = f64::max(worst.3, residual);
                }
                if residual > worst.0 {
                    worst.0 = residual;
                    worst.2 = *n;
                }
            }
            worst
        })
        .collect();

    let mut report = OrthogonalityReport {
        energy,
        max_residual: 0.0,
        worst_delay: 0,
        worst_doppler: 0,
        max_doppler_residual: 0.0,
        pairs: 0,
    };
    for (residual, m, n, doppler_only, pairs) in per_delay {
        report.pairs += pairs;
        report.max_doppler_residual = report.max_doppler_residual.max(doppler_only);
        if residual > report.max_residual {
            report.max_residual = residual;
            report.worst_delay = m;
            report.worst_doppler = n;
        }
    }
    Ok(report)
}
