//! Closed-form dispersions and time-frequency area of the DDOP and of the
//! general DDOP with SRRC sub-pulses.
//!
//! All expressions assume a large number of sub-pulses; reports built for
//! `N < 8` carry `low_n = true` and numeric quadrature should be preferred.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::localization::{LocalizationReport, Method};
use crate::params::DdopParams;

/// Below this many sub-pulses the closed forms are flagged as approximate.
pub const LOW_N_THRESHOLD: u32 = 8;

/// `(pi^2 - 8) / (4 pi^2)`, the roll-off coefficient of the squared frequency dispersion.
fn rolloff_coefficient() -> f64 {
    (PI * PI - 8.0) / (4.0 * PI * PI)
}

/// `sqrt(1 + 3 (pi^2 - 8) beta^2 / pi^2)`.
pub fn rolloff_factor(beta: f64) -> f64 {
    (1.0 + 3.0 * (PI * PI - 8.0) * beta * beta / (PI * PI)).sqrt()
}

/// `N T / sqrt(12)`.
pub fn delta_t_analytic(params: &DdopParams) -> f64 {
    f64::from(params.n()) * params.t() / 12f64.sqrt()
}

/// `(M/T) sqrt(1/12 + (pi^2 - 8) beta^2 / (4 pi^2))`.
pub fn delta_f_analytic(params: &DdopParams) -> f64 {
    let m = f64::from(params.m());
    let beta = params.beta();
    m / params.t() * (1.0 / 12.0 + rolloff_coefficient() * beta * beta).sqrt()
}

/// `N int f^2 |A(f)|^2 df = M^2/(12 T^2) + (pi^2 - 8) M^2 beta^2 / (4 pi^2 T^2)`.
pub fn spectral_second_moment(params: &DdopParams) -> f64 {
    let m = f64::from(params.m());
    let t = params.t();
    let beta = params.beta();
    m * m / (12.0 * t * t) + (PI * PI - 8.0) * m * m * beta * beta / (4.0 * PI * PI * t * t)
}

/// The term `(1/(2 pi^2 T^2)) int |A(f)|^2 df = 1/(2 pi^2 N T^2)` dropped from
/// the squared frequency dispersion; exposed so its size can be checked.
pub fn omitted_spectral_term(params: &DdopParams) -> f64 {
    let t = params.t();
    1.0 / (2.0 * PI * PI * f64::from(params.n()) * t * t)
}

/// `(M N / 12) sqrt(1 + 3 (pi^2 - 8) beta^2 / pi^2)`.
pub fn delta_a_analytic(params: &DdopParams) -> f64 {
    f64::from(params.m()) * f64::from(params.n()) / 12.0 * rolloff_factor(params.beta())
}

/// `(M (N + 2D) / 12) sqrt(1 + 3 (pi^2 - 8) beta^2 / pi^2)` with `D = ceil(2 Qt / M)`.
pub fn delta_a_general_analytic(params: &DdopParams) -> f64 {
    f64::from(params.m()) * f64::from(params.general_subpulse_count()) / 12.0 * rolloff_factor(params.beta())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Strict,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormReport {
    pub delta_t: f64,
    pub delta_f: f64,
    pub delta_a: f64,
    pub spectral_second_moment: f64,
    pub omitted_term: f64,
    pub variant: Variant,
    pub low_n: bool,
}

impl ClosedFormReport {
    pub fn strict(params: &DdopParams) -> Self {
        Self {
            delta_t: delta_t_analytic(params),
            delta_f: delta_f_analytic(params),
            delta_a: delta_a_analytic(params),
            spectral_second_moment: spectral_second_moment(params),
            omitted_term: omitted_spectral_term(params),
            variant: Variant::Strict,
            low_n: params.n() < LOW_N_THRESHOLD,
        }
    }

    /// Only the area is given in closed form for the general pulse; the
    /// dispersions reported here are the factorization `(N+2D)T/sqrt(12)`
    /// and the strict-pulse frequency dispersion.
    pub fn general(params: &DdopParams) -> Self {
        let count = params.general_subpulse_count();
        Self {
            delta_t: f64::from(count) * params.t() / 12f64.sqrt(),
            delta_f: delta_f_analytic(params),
            delta_a: delta_a_general_analytic(params),
            spectral_second_moment: spectral_second_moment(params),
            omitted_term: omitted_spectral_term(params),
            variant: Variant::General,
            low_n: count < LOW_N_THRESHOLD,
        }
    }

    pub fn for_variant(params: &DdopParams, variant: Variant) -> Self {
        match variant {
            Variant::Strict => Self::strict(params),
            Variant::General => Self::general(params),
        }
    }

    /// Expressed as a localization report centered on the train midpoint.
    pub fn to_localization(&self, params: &DdopParams) -> LocalizationReport {
        let count = match self.variant {
            Variant::Strict => params.n(),
            Variant::General => params.general_subpulse_count(),
        };
        let energy = f64::from(count) / f64::from(params.n());
        LocalizationReport {
            t_mean: 0.5 * params.t() * f64::from(count - 1),
            f_mean: 0.0,
            delta_t: self.delta_t,
            delta_f: self.delta_f,
            delta_a: self.delta_a,
            method: Method::Analytic,
            energy,
        }
    }
}
