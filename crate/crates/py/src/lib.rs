use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ddop::experiments::{self, full_ranges, QtSelection, SelftestConfig, SweepConfig, SweepTable};
use ddop::params::default_qt;
use ddop::pulse::DEFAULT_OVERSAMPLING;
use ddop::spectrum::DEFAULT_SINC_ZEROS;
use ddop::{ClosedFormReport, DdopError, DdopParams, LocalizationReport, SampledSignal, SpectrumSource, Variant};

fn err(e: DdopError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Params", frozen)]
struct Params {
    inner: DdopParams,
}

#[pymethods]
impl Params {
    #[new]
    #[pyo3(signature = (m, n, t=1.0, beta=0.1, qt=None))]
    fn new(m: u32, n: u32, t: f64, beta: f64, qt: Option<u32>) -> PyResult<Self> {
        let qt = qt.unwrap_or_else(|| default_qt(m));
        Ok(Self {
            inner: DdopParams::new(m, n, t, beta, qt).map_err(err)?,
        })
    }

    #[getter]
    fn m(&self) -> u32 {
        self.inner.m()
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn t(&self) -> f64 {
        self.inner.t()
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta()
    }

    #[getter]
    fn qt(&self) -> u32 {
        self.inner.qt()
    }

    #[getter]
    fn ta(&self) -> f64 {
        self.inner.ta()
    }

    #[getter]
    fn d(&self) -> u32 {
        self.inner.d()
    }

    fn is_strict(&self) -> bool {
        self.inner.is_strict()
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "Params(m={}, n={}, t={}, beta={}, qt={})",
            p.m(),
            p.n(),
            p.t(),
            p.beta(),
            p.qt()
        )
    }
}

fn synth(params: &DdopParams, oversampling: usize, general: bool) -> PyResult<SampledSignal> {
    if general {
        ddop::synthesize_general_ddop(params, oversampling).map_err(err)
    } else {
        ddop::synthesize_ddop(params, oversampling).map_err(err)
    }
}

/// Sample times and complex samples of the (general) DDOP.
#[pyfunction]
#[pyo3(signature = (params, oversampling=DEFAULT_OVERSAMPLING, general=false))]
fn synthesize(params: PyRef<'_, Params>, oversampling: usize, general: bool) -> PyResult<(Vec<f64>, Vec<Complex64>)> {
    let s = synth(&params.inner, oversampling, general)?;
    Ok((s.grid().points().collect(), s.values().to_vec()))
}

fn report_dict<'py>(py: Python<'py>, r: &LocalizationReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("t_mean", r.t_mean)?;
    d.set_item("f_mean", r.f_mean)?;
    d.set_item("delta_t", r.delta_t)?;
    d.set_item("delta_f", r.delta_f)?;
    d.set_item("delta_a", r.delta_a)?;
    d.set_item("energy", r.energy)?;
    Ok(d)
}

/// Numeric localization; `source` is "analytic" or "dft".
#[pyfunction]
#[pyo3(signature = (params, oversampling=DEFAULT_OVERSAMPLING, general=false, source="analytic", sinc_zeros=DEFAULT_SINC_ZEROS, zero_pad=2))]
fn localize<'py>(
    py: Python<'py>,
    params: PyRef<'_, Params>,
    oversampling: usize,
    general: bool,
    source: &str,
    sinc_zeros: u32,
    zero_pad: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let source = match source {
        "analytic" => SpectrumSource::Analytic {
            sinc_zeros,
            bins_per_subtone: oversampling,
        },
        "dft" => SpectrumSource::Dft { zero_pad },
        other => return Err(PyValueError::new_err(format!("unknown spectrum source {other:?}"))),
    };
    let s = synth(&params.inner, oversampling, general)?;
    report_dict(py, &ddop::localize(&s, source).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (params, general=false))]
fn closed_form<'py>(py: Python<'py>, params: PyRef<'_, Params>, general: bool) -> PyResult<Bound<'py, PyDict>> {
    let variant = if general { Variant::General } else { Variant::Strict };
    let r = ClosedFormReport::for_variant(&params.inner, variant);
    let d = PyDict::new(py);
    d.set_item("delta_t", r.delta_t)?;
    d.set_item("delta_f", r.delta_f)?;
    d.set_item("delta_a", r.delta_a)?;
    d.set_item("spectral_second_moment", r.spectral_second_moment)?;
    d.set_item("omitted_term", r.omitted_term)?;
    d.set_item("low_n", r.low_n)?;
    Ok(d)
}

fn sweep_config(
    base: SweepConfig,
    m: Option<Vec<u32>>,
    n: Option<Vec<u32>>,
    beta: Option<Vec<f64>>,
    qt: Option<Vec<u32>>,
    oversampling: usize,
) -> SweepConfig {
    SweepConfig {
        m_values: m.unwrap_or(base.m_values),
        n_values: n.unwrap_or(base.n_values),
        beta_values: beta.unwrap_or(base.beta_values),
        qt: qt.map(QtSelection::Values).unwrap_or(base.qt),
        oversampling,
        ..base
    }
}

fn table_text(table: SweepTable, format: &str) -> PyResult<String> {
    match format {
        "csv" => Ok(table.to_csv()),
        "json" => table.to_json().map_err(err),
        other => Err(PyValueError::new_err(format!("unknown format {other:?}"))),
    }
}

/// Strict DDOP sweep, returned as CSV or JSON text.
#[pyfunction]
#[pyo3(signature = (m=None, n=None, beta=None, qt=None, oversampling=DEFAULT_OVERSAMPLING, format="csv"))]
fn sweep_beta(
    m: Option<Vec<u32>>,
    n: Option<Vec<u32>>,
    beta: Option<Vec<f64>>,
    qt: Option<Vec<u32>>,
    oversampling: usize,
    format: &str,
) -> PyResult<String> {
    let config = sweep_config(SweepConfig::default(), m, n, beta, qt, oversampling);
    table_text(experiments::sweep_beta(&config).map_err(err)?, format)
}

/// General DDOP sweep over `Qt`, returned as CSV or JSON text.
#[pyfunction]
#[pyo3(signature = (m=None, n=None, beta=None, qt=None, oversampling=DEFAULT_OVERSAMPLING, format="csv"))]
fn sweep_qt(
    m: Option<Vec<u32>>,
    n: Option<Vec<u32>>,
    beta: Option<Vec<f64>>,
    qt: Option<Vec<u32>>,
    oversampling: usize,
    format: &str,
) -> PyResult<String> {
    let config = sweep_config(SweepConfig::qt_default(), m, n, beta, qt, oversampling);
    table_text(experiments::sweep_qt(&config).map_err(err)?, format)
}

/// Largest normalized delay-Doppler inner product over the full grid.
#[pyfunction]
#[pyo3(signature = (params, oversampling=DEFAULT_OVERSAMPLING))]
fn orthogonality<'py>(py: Python<'py>, params: PyRef<'_, Params>, oversampling: usize) -> PyResult<Bound<'py, PyDict>> {
    let (delays, dopplers) = full_ranges(&params.inner);
    let r = experiments::orthogonality_check(&params.inner, oversampling, delays, dopplers).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("energy", r.energy)?;
    d.set_item("max_residual", r.max_residual)?;
    d.set_item("worst_delay", r.worst_delay)?;
    d.set_item("worst_doppler", r.worst_doppler)?;
    d.set_item("max_doppler_residual", r.max_doppler_residual)?;
    Ok(d)
}

/// `(passed, report)` of the invariant suite.
#[pyfunction]
#[pyo3(signature = (oversampling=DEFAULT_OVERSAMPLING))]
fn selftest(oversampling: usize) -> (bool, String) {
    let summary = experiments::run_selftest(&SelftestConfig { oversampling });
    (summary.passed(), summary.to_string())
}

#[pymodule(name = "ddop")]
fn ddop_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Params>()?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(localize, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_beta, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_qt, m)?)?;
    m.add_function(wrap_pyfunction!(orthogonality, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    m.add("GABOR_LIMIT", ddop::GABOR_LIMIT)?;
    Ok(())
}
