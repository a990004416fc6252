//! Parameter sweeps comparing numeric localization with the closed forms.

use std::cmp::Ordering;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_form::{ClosedFormReport, Variant};
use crate::error::{DdopError, Result};
use crate::localization::{localize, LocalizationReport, SpectrumSource};
use crate::params::{default_qt, DdopParams};
use crate::pulse::{synthesize_ddop, synthesize_general_ddop, DEFAULT_OVERSAMPLING};
use crate::spectrum::DEFAULT_SINC_ZEROS;

pub const CSV_HEADER: &str =
    "M,N,T,beta,Qt,D,dt_num,df_num,da_num,dt_ana,df_ana,da_ana,err_dt_pct,err_df_pct,err_da_pct";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QtSelection {
    /// `Qt = ceil(0.05 M)`.
    FivePercent,
    /// Every `Qt` in `1..=2M`.
    UpToTwiceM,
    Values(Vec<u32>),
}

impl QtSelection {
    fn values_for(&self, m: u32) -> Vec<u32> {
        match self {
            QtSelection::FivePercent => vec![default_qt(m)],
            QtSelection::UpToTwiceM => (1..=2 * m).collect(),
            QtSelection::Values(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub m_values: Vec<u32>,
    pub n_values: Vec<u32>,
    pub beta_values: Vec<f64>,
    pub qt: QtSelection,
    pub t: f64,
    pub oversampling: usize,
    pub sinc_zeros: u32,
}

impl Default for SweepConfig {
    /// M in {32, 64}, N in {16, 32}, beta in {0.1, 0.3, 0.5, 0.7, 0.9},
    /// `Qt = ceil(0.05 M)`, `T = 1`.
    fn default() -> Self {
        Self {
            m_values: vec![32, 64],
            n_values: vec![16, 32],
            beta_values: vec![0.1, 0.3, 0.5, 0.7, 0.9],
            qt: QtSelection::FivePercent,
            t: 1.0,
            oversampling: DEFAULT_OVERSAMPLING,
            sinc_zeros: DEFAULT_SINC_ZEROS,
        }
    }
}

impl SweepConfig {
    /// Sweep of `Qt` over `1..=2M` for `M = 32`, `N = 16`, `beta = 0.1`.
    pub fn qt_default() -> Self {
        Self {
            m_values: vec![32],
            n_values: vec![16],
            beta_values: vec![0.1],
            qt: QtSelection::UpToTwiceM,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_values.is_empty() || self.n_values.is_empty() || self.beta_values.is_empty() {
            return Err(DdopError::InvalidParameter("sweep lists must be non-empty".into()));
        }
        if let QtSelection::Values(v) = &self.qt {
            if v.is_empty() {
                return Err(DdopError::InvalidParameter("Qt list must be non-empty".into()));
            }
        }
        if self.oversampling < 2 {
            return Err(DdopError::InvalidParameter("oversampling must be >= 2".into()));
        }
        if self.sinc_zeros == 0 {
            return Err(DdopError::InvalidParameter("sinc_zeros must be >= 1".into()));
        }
        for &m in &self.m_values {
            for &n in &self.n_values {
                for &beta in &self.beta_values {
                    for qt in self.qt.values_for(m) {
                        DdopParams::new(m, n, self.t, beta, qt)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn points(&self) -> Vec<DdopParams> {
        let mut points = Vec::new();
        for &m in &self.m_values {
            for &n in &self.n_values {
                for &beta in &self.beta_values {
                    for qt in self.qt.values_for(m) {
                        if let Ok(p) = DdopParams::new(m, n, self.t, beta, qt) {
                            points.push(p);
                        }
                    }
                }
            }
        }
        points
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub params: DdopParams,
    pub numeric: LocalizationReport,
    pub analytic: ClosedFormReport,
    /// Percent errors relative to the numeric value.
    pub rel_err_dt: f64,
    pub rel_err_df: f64,
    pub rel_err_da: f64,
}

impl SweepRow {
    fn new(params: DdopParams, numeric: LocalizationReport, analytic: ClosedFormReport) -> Self {
        let pct = |num: f64, ana: f64| 100.0 * (num - ana).abs() / num;
        Self {
            params,
            rel_err_dt: pct(numeric.delta_t, analytic.delta_t),
            rel_err_df: pct(numeric.delta_f, analytic.delta_f),
            rel_err_da: pct(numeric.delta_a, analytic.delta_a),
            numeric,
            analytic,
        }
    }

    fn record(&self) -> SweepRecord {
        let p = &self.params;
        SweepRecord {
            m: p.m(),
            n: p.n(),
            t: p.t(),
            beta: p.beta(),
            qt: p.qt(),
            d: p.d(),
            dt_num: self.numeric.delta_t,
            df_num: self.numeric.delta_f,
            da_num: self.numeric.delta_a,
            dt_ana: self.analytic.delta_t,
            df_ana: self.analytic.delta_f,
            da_ana: self.analytic.delta_a,
            err_dt_pct: self.rel_err_dt,
            err_df_pct: self.rel_err_df,
            err_da_pct: self.rel_err_da,
        }
    }
}

/// Flat row as written to CSV and JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    #[serde(rename = "M")]
    pub m: u32,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "T")]
    pub t: f64,
    pub beta: f64,
    #[serde(rename = "Qt")]
    pub qt: u32,
    #[serde(rename = "D")]
    pub d: u32,
    pub dt_num: f64,
    pub df_num: f64,
    pub da_num: f64,
    pub dt_ana: f64,
    pub df_ana: f64,
    pub da_ana: f64,
    pub err_dt_pct: f64,
    pub err_df_pct: f64,
    pub err_da_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedPoint {
    pub params: DdopParams,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub variant: Variant,
    pub rows: Vec<SweepRow>,
    pub skipped: Vec<SkippedPoint>,
}

impl SweepTable {
    /// Largest `(err_dt, err_df, err_da)` over all rows, in percent.
    pub fn max_errors(&self) -> (f64, f64, f64) {
        self.rows.iter().fold((0.0, 0.0, 0.0), |(a, b, c), r| {
            (a.max(r.rel_err_dt), b.max(r.rel_err_df), c.max(r.rel_err_da))
        })
    }

    pub fn records(&self) -> Vec<SweepRecord> {
        self.rows.iter().map(SweepRow::record).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in self.records() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.m,
                r.n,
                r.t,
                r.beta,
                r.qt,
                r.d,
                r.dt_num,
                r.df_num,
                r.da_num,
                r.dt_ana,
                r.df_ana,
                r.da_ana,
                r.err_dt_pct,
                r.err_df_pct,
                r.err_da_pct
            );
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.records())?)
    }
}

fn order(a: &DdopParams, b: &DdopParams) -> Ordering {
    (a.m(), a.n())
        .cmp(&(b.m(), b.n()))
        .then(a.beta().total_cmp(&b.beta()))
        .then(a.qt().cmp(&b.qt()))
}

fn run(config: &SweepConfig, variant: Variant) -> Result<SweepTable> {
    config.validate()?;
    let source = SpectrumSource::Analytic {
        sinc_zeros: config.sinc_zeros,
        bins_per_subtone: config.oversampling,
    };
    let outcomes: Vec<std::result::Result<SweepRow, SkippedPoint>> = config
        .points()
        .into_par_iter()
        .map(|params| {
            let signal = match variant {
                Variant::Strict => synthesize_ddop(&params, config.oversampling),
                Variant::General => synthesize_general_ddop(&params, config.oversampling),
            };
            signal
                .and_then(|s| localize(&s, source))
                .map(|numeric| SweepRow::new(params, numeric, ClosedFormReport::for_variant(&params, variant)))
                .map_err(|e| SkippedPoint {
                    params,
                    reason: e.to_string(),
                })
        })
        .collect();

    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(row) => rows.push(row),
            Err(skip) => skipped.push(skip),
        }
    }
    rows.sort_by(|a, b| order(&a.params, &b.params));
    skipped.sort_by(|a, b| order(&a.params, &b.params));
    Ok(SweepTable { variant, rows, skipped })
}

/// Strict DDOP over every `(M, N, beta, Qt)`; points with `2 Qt > M` are skipped.
pub fn sweep_beta(config: &SweepConfig) -> Result<SweepTable> {
    run(config, Variant::Strict)
}

/// General DDOP over every `(M, N, beta, Qt)`, compared with the general closed form.
pub fn sweep_qt(config: &SweepConfig) -> Result<SweepTable> {
    run(config, Variant::General)
}
