//! Invariant suite run by `ddop selftest`.

use std::fmt;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::closed_form::{delta_a_analytic, delta_f_analytic, delta_t_analytic, spectral_second_moment};
use crate::grid::SampleGrid;
use crate::localization::{analytic_spectrum_of, localize, shift_identity, spectrum_dft, SpectrumSource, GABOR_LIMIT};
use crate::params::DdopParams;
use crate::pulse::{reference_pulse, synthesize_ddop, ReferenceKind, DEFAULT_OVERSAMPLING};
use crate::spectrum::{srrc_frequency_response, DEFAULT_SINC_ZEROS};

const SEED: u64 = 20_231_015;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SelftestConfig {
    pub oversampling: usize,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self {
            oversampling: DEFAULT_OVERSAMPLING,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<28} measured={:<12.4e} tol={:<10.3e} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.tolerance,
            self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestSummary {
    pub checks: Vec<CheckOutcome>,
}

impl SelftestSummary {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for SelftestSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

/// Measured value must not exceed `tolerance`.
fn at_most(
    name: &'static str,
    measured: crate::Result<f64>,
    tolerance: f64,
    detail: impl Into<String>,
) -> CheckOutcome {
    match measured {
        Ok(v) => CheckOutcome {
            name,
            measured: v,
            tolerance,
            passed: v <= tolerance,
            detail: detail.into(),
        },
        Err(e) => CheckOutcome {
            name,
            measured: f64::NAN,
            tolerance,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn default_params() -> DdopParams {
    DdopParams::with_default_qt(32, 16, 1.0, 0.1).expect("default parameters are valid")
}

fn shift_identity_check(rng: &mut StdRng) -> crate::Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let width: f64 = rng.gen_range(0.5..2.0);
        let chirp: f64 = rng.gen_range(-1.0..1.0);
        let scale = rng.gen_range(0.25..4.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let shift = rng.gen_range(-5.0..5.0);
        let x = move |r: f64| Complex64::new(1.0, chirp * r * r) * (-width * r * r).exp();
        let support = (40.0 / width).sqrt() + 1.0;
        worst = worst.max(shift_identity(x, support, scale, shift, 3000)?.relative_error());
    }
    Ok(worst)
}

fn factorization_check(rng: &mut StdRng) -> crate::Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let p = DdopParams::new(
            rng.gen_range(1..=1024),
            rng.gen_range(2..=1024),
            rng.gen_range(1e-6..1e3),
            rng.gen_range(0.0..=1.0),
            rng.gen_range(1..=64),
        )?;
        let product = delta_t_analytic(&p) * delta_f_analytic(&p);
        worst = worst.max((delta_a_analytic(&p) - product).abs() / delta_a_analytic(&p));
    }
    Ok(worst)
}

/// Composite Simpson quadrature of `N int f^2 |A(f)|^2 df`, split at the
/// taper breakpoints so every panel integrates a smooth function.
pub fn spectral_second_moment_quadrature(params: &DdopParams, panels: usize) -> f64 {
    let flat = f64::from(params.m()) * (1.0 - params.beta()) / (2.0 * params.t());
    let edge = params.band_edge();
    let integrand = |f: f64| f * f * srrc_frequency_response(params, f).powi(2);
    let simpson = |a: f64, b: f64| {
        if b <= a {
            return 0.0;
        }
        let n = panels + panels % 2;
        let h = (b - a) / n as f64;
        let inner: f64 = (1..n)
            .map(|k| integrand(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 })
            .sum();
        h / 3.0 * (integrand(a) + integrand(b) + inner)
    };
    // the integrand is even
    2.0 * f64::from(params.n()) * (simpson(0.0, flat) + simpson(flat, edge))
}

fn second_moment_oracle_check() -> crate::Result<f64> {
    let mut worst: f64 = 0.0;
    for beta in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let p = default_params().with_beta(beta)?;
        let closed = spectral_second_moment(&p);
        worst = worst.max((spectral_second_moment_quadrature(&p, 2000) - closed).abs() / closed);
    }
    Ok(worst)
}

fn gabor_catalog(oversampling: usize) -> crate::Result<(f64, f64)> {
    let grid = SampleGrid::centered(1e-3, 4000)?;
    let dft = SpectrumSource::Dft { zero_pad: 2 };
    let gaussian = localize(&reference_pulse(ReferenceKind::Gaussian, 0.2, &grid)?, dft)?.delta_a;
    let mut ratio = gaussian / GABOR_LIMIT;
    for kind in [ReferenceKind::RectangularTime, ReferenceKind::RectangularFrequency] {
        let r = localize(&reference_pulse(kind, 0.2, &grid)?, dft)?;
        ratio = ratio.min(r.delta_a / GABOR_LIMIT);
    }
    let ddop = synthesize_ddop(&default_params(), oversampling)?;
    ratio = ratio.min(localize(&ddop, SpectrumSource::analytic())?.delta_a / GABOR_LIMIT);
    Ok((gaussian, ratio))
}

fn grid_convergence(oversampling: usize) -> crate::Result<f64> {
    let p = default_params();
    let at = |os: usize| {
        let source = SpectrumSource::Analytic {
            sinc_zeros: DEFAULT_SINC_ZEROS,
            bins_per_subtone: os,
        };
        localize(&synthesize_ddop(&p, os)?, source)
    };
    let coarse = at(oversampling)?;
    let fine = at(2 * oversampling)?;
    let dt = (coarse.delta_t - fine.delta_t).abs() / fine.delta_t;
    let df = (coarse.delta_f - fine.delta_f).abs() / fine.delta_f;
    Ok(100.0 * dt.max(df))
}

/// Runs every check; never panics on a failing check.
pub fn run_selftest(config: &SelftestConfig) -> SelftestSummary {
    let mut rng = StdRng::seed_from_u64(SEED);
    let os = config.oversampling;
    let mut checks = Vec::new();

    checks.push(at_most(
        "shift identity",
        shift_identity_check(&mut rng),
        1e-8,
        "max relative gap over 100 random (X, scale, shift)",
    ));

    checks.push(at_most(
        "factorization",
        factorization_check(&mut rng),
        1e-12,
        "dA - dT*dF relative, 1000 random parameter sets",
    ));

    checks.push(at_most(
        "spectral second moment",
        second_moment_oracle_check(),
        1e-4,
        "closed form vs Simpson quadrature, beta in {0,..,1}",
    ));

    let parseval_dft = synthesize_ddop(&default_params(), os).and_then(|u| {
        let s = spectrum_dft(&u, 2)?;
        Ok((s.energy() - u.energy()).abs() / u.energy())
    });
    checks.push(at_most("parseval (dft)", parseval_dft, 1e-6, "M=32 N=16 beta=0.1 Qt=2"));

    let parseval_analytic = default_params().with_qt(8).and_then(|p| {
        let u = synthesize_ddop(&p, os)?;
        let s = analytic_spectrum_of(&u, DEFAULT_SINC_ZEROS, DEFAULT_OVERSAMPLING)?;
        Ok((s.energy() - u.energy()).abs() / u.energy())
    });
    checks.push(at_most(
        "parseval (analytic)",
        parseval_analytic,
        5e-3,
        "M=32 N=16 beta=0.1 Qt=8",
    ));

    let symmetry = synthesize_ddop(&default_params(), os).and_then(|u| {
        let s = analytic_spectrum_of(&u, DEFAULT_SINC_ZEROS, DEFAULT_OVERSAMPLING)?;
        let v = s.values();
        let peak = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
        Ok((0..v.len())
            .map(|k| (v[k].norm() - v[v.len() - 1 - k].norm()).abs())
            .fold(0.0, f64::max)
            / peak)
    });
    checks.push(at_most(
        "spectrum symmetry",
        symmetry,
        1e-12,
        "max ||U(f)|-|U(-f)|| / peak",
    ));

    match gabor_catalog(os) {
        Ok((gaussian, ratio)) => {
            let lo = 0.0795;
            let hi = 0.0797;
            checks.push(CheckOutcome {
                name: "gabor limit (gaussian)",
                measured: gaussian,
                tolerance: hi,
                passed: (lo..=hi).contains(&gaussian),
                detail: format!("expected in [{lo}, {hi}], 1/(4pi) = {GABOR_LIMIT:.7}"),
            });
            checks.push(CheckOutcome {
                name: "gabor bound",
                measured: ratio,
                tolerance: 1.0 - 1e-3,
                passed: ratio >= 1.0 - 1e-3,
                detail: "min dA/(1/(4pi)) over reference pulses and default DDOP".into(),
            });
        }
        Err(e) => checks.push(at_most("gabor limit", Err(e), 0.0, "")),
    }

    checks.push(at_most(
        "grid convergence",
        grid_convergence(os),
        0.05,
        format!("percent change of dT, dF from oversampling {os} to {}", 2 * os),
    ));

    SelftestSummary { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_matches_closed_form() {
        let p = DdopParams::new(32, 16, 1.0, 0.1, 2).unwrap();
        let rel = (spectral_second_moment_quadrature(&p, 2000) - spectral_second_moment(&p)).abs()
            / spectral_second_moment(&p);
        assert!(rel < 1e-8);
    }
}
