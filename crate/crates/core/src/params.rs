//! Pulse-defining parameters.

use serde::{Deserialize, Serialize};

use crate::error::{DdopError, Result};

/// Scalars that fully determine a DDOP and its generalized variant.
///
/// * `m` - multicarrier symbols per frame; the zero-ISI interval is `T/M`
/// * `n` - subcarriers; also the number of sub-pulses of the strict pulse
/// * `t` - sub-pulse spacing in seconds
/// * `beta` - SRRC roll-off in `[0, 1]`
/// * `qt` - sub-pulse half-duration in zero-ISI units
///
/// The sub-pulse duration `Ta = 2*Qt*T/M` and the cyclic extension length
/// `D = ceil(2*Qt/M)` are derived once at construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DdopParams {
    m: u32,
    n: u32,
    t: f64,
    beta: f64,
    qt: u32,
    ta: f64,
    d: u32,
}

impl DdopParams {
    pub fn new(m: u32, n: u32, t: f64, beta: f64, qt: u32) -> Result<Self> {
        if m == 0 {
            return Err(DdopError::InvalidParameter("M must be >= 1".into()));
        }
        if n == 0 {
            return Err(DdopError::InvalidParameter("N must be >= 1".into()));
        }
        if !(t.is_finite() && t > 0.0) {
            return Err(DdopError::InvalidParameter(format!(
                "T must be finite and > 0, got {t}"
            )));
        }
        if !(0.0..=1.0).contains(&beta) {
            return Err(DdopError::InvalidParameter(format!(
                "beta must lie in [0, 1], got {beta}"
            )));
        }
        if qt == 0 {
            return Err(DdopError::InvalidParameter("Qt must be >= 1".into()));
        }
        let ta = 2.0 * f64::from(qt) * t / f64::from(m);
        let d = (2 * qt).div_ceil(m);
        Ok(Self {
            m,
            n,
            t,
            beta,
            qt,
            ta,
            d,
        })
    }

    /// Parameters with `Qt = ceil(0.05 * M)`.
    pub fn with_default_qt(m: u32, n: u32, t: f64, beta: f64) -> Result<Self> {
        Self::new(m, n, t, beta, default_qt(m))
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn qt(&self) -> u32 {
        self.qt
    }

    /// Sub-pulse duration `2*Qt*T/M`.
    pub fn ta(&self) -> f64 {
        self.ta
    }

    /// Number of cyclic-prefix (and cyclic-suffix) sub-pulses of the general pulse.
    pub fn d(&self) -> u32 {
        self.d
    }

    /// Zero-ISI interval (delay resolution).
    pub fn delay_resolution(&self) -> f64 {
        self.t / f64::from(self.m)
    }

    /// Doppler resolution `1/(N*T)`.
    pub fn doppler_resolution(&self) -> f64 {
        1.0 / (f64::from(self.n) * self.t)
    }

    /// True when adjacent sub-pulses of the strict pulse do not overlap.
    pub fn is_strict(&self) -> bool {
        2 * self.qt <= self.m
    }

    /// One-sided band edge `M(1+beta)/(2T)` of the SRRC response.
    pub fn band_edge(&self) -> f64 {
        f64::from(self.m) * (1.0 + self.beta) / (2.0 * self.t)
    }

    /// Sub-pulse count of the general pulse, `N + 2D`.
    pub fn general_subpulse_count(&self) -> u32 {
        self.n + 2 * self.d
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.m, self.n, self.t, beta, self.qt)
    }

    pub fn with_qt(&self, qt: u32) -> Result<Self> {
        Self::new(self.m, self.n, self.t, self.beta, qt)
    }
}

/// `ceil(0.05 * M)`, computed in integers so that e.g. `M = 60` yields 3.
pub fn default_qt(m: u32) -> u32 {
    m.div_ceil(20).max(1)
}
