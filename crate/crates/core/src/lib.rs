//! Synthesis and time-frequency localization analysis of the delay-Doppler
//! plane orthogonal pulse (DDOP).
//!
//! * [`pulse`] builds the truncated SRRC sub-pulse, the DDOP, the general
//!   DDOP with cyclic extension, and Gaussian/rectangular reference pulses.
//! * [`spectrum`] evaluates the closed-form frequency response.
//! * [`localization`] measures time/frequency means and dispersions by
//!   quadrature, using either the closed-form spectrum or a DFT.
//! * [`closed_form`] holds the large-N approximations of the dispersions and
//!   of the time-frequency area.
//! * [`experiments`] drives sweeps, orthogonality checks and the self-test.

pub mod closed_form;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod localization;
pub mod params;
pub mod pulse;
pub mod spectrum;

pub use closed_form::{ClosedFormReport, Variant};
pub use error::{DdopError, Result};
pub use grid::{SampleGrid, SampledSignal, SignalOrigin, Spectrum};
pub use localization::{localize, LocalizationReport, Method, SpectrumSource, GABOR_LIMIT};
pub use params::DdopParams;
pub use pulse::{synthesize_ddop, synthesize_general_ddop, ReferenceKind};
