use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ddop::experiments::{
    full_ranges, orthogonality_check, run_selftest, sweep_beta, sweep_qt, QtSelection, SelftestConfig, SweepConfig,
    SweepTable,
};
use ddop::localization::{analytic_spectrum_of, spectrum_dft};
use ddop::params::default_qt;
use ddop::pulse::DEFAULT_OVERSAMPLING;
use ddop::spectrum::DEFAULT_SINC_ZEROS;
use ddop::{
    localize, synthesize_ddop, synthesize_general_ddop, ClosedFormReport, DdopError, DdopParams, SampledSignal,
    SpectrumSource, Variant,
};

#[derive(Parser)]
#[command(
    name = "ddop",
    version,
    about = "DDOP synthesis and time-frequency localization analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sampled DDOP (or general DDOP) as t,re,im
    Synth {
        #[command(flatten)]
        pulse: PulseArgs,
        /// Synthesize the general DDOP with cyclic extension
        #[arg(long)]
        general: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Frequency response as f,re,im
    Spectrum {
        #[command(flatten)]
        pulse: PulseArgs,
        #[arg(long)]
        general: bool,
        #[arg(long, value_enum, default_value_t = Source::Analytic)]
        source: Source,
        /// Zero-padding factor of the DFT path
        #[arg(long, default_value_t = 2)]
        zero_pad: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Numeric localization next to the closed forms
    Localize {
        #[command(flatten)]
        pulse: PulseArgs,
        #[arg(long)]
        general: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Strict DDOP sweep over M, N and beta
    SweepBeta {
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// General DDOP sweep over Qt (default 1..=2M)
    SweepQt {
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Inner products on the delay-Doppler grid
    Ortho {
        #[command(flatten)]
        pulse: PulseArgs,
        #[arg(long, allow_hyphen_values = true)]
        delay_min: Option<i32>,
        #[arg(long, allow_hyphen_values = true)]
        delay_max: Option<i32>,
        #[arg(long, allow_hyphen_values = true)]
        doppler_min: Option<i32>,
        #[arg(long, allow_hyphen_values = true)]
        doppler_max: Option<i32>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the invariant suite
    Selftest {
        #[arg(long, default_value_t = DEFAULT_OVERSAMPLING)]
        oversampling: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct PulseArgs {
    #[arg(long = "M", default_value_t = 32)]
    m: u32,
    #[arg(long = "N", default_value_t = 16)]
    n: u32,
    #[arg(long = "T", default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value_t = 0.1)]
    beta: f64,
    /// Defaults to ceil(0.05 M)
    #[arg(long = "Qt")]
    qt: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_OVERSAMPLING)]
    oversampling: usize,
    #[arg(long, default_value_t = DEFAULT_SINC_ZEROS)]
    sinc_zeros: u32,
}

impl PulseArgs {
    fn params(&self) -> ddop::Result<DdopParams> {
        DdopParams::new(
            self.m,
            self.n,
            self.t,
            self.beta,
            self.qt.unwrap_or_else(|| default_qt(self.m)),
        )
    }

    fn signal(&self, general: bool) -> ddop::Result<SampledSignal> {
        let p = self.params()?;
        if general {
            synthesize_general_ddop(&p, self.oversampling)
        } else {
            synthesize_ddop(&p, self.oversampling)
        }
    }

    fn analytic_source(&self) -> SpectrumSource {
        SpectrumSource::Analytic {
            sinc_zeros: self.sinc_zeros,
            bins_per_subtone: self.oversampling,
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long = "M", value_delimiter = ',')]
    m: Vec<u32>,
    #[arg(long = "N", value_delimiter = ',')]
    n: Vec<u32>,
    #[arg(long = "T", default_value_t = 1.0)]
    t: f64,
    #[arg(long, value_delimiter = ',')]
    beta: Vec<f64>,
    #[arg(long = "Qt", value_delimiter = ',')]
    qt: Vec<u32>,
    #[arg(long, default_value_t = DEFAULT_OVERSAMPLING)]
    oversampling: usize,
    #[arg(long, default_value_t = DEFAULT_SINC_ZEROS)]
    sinc_zeros: u32,
}

impl SweepArgs {
    fn config(&self, base: SweepConfig) -> SweepConfig {
        SweepConfig {
            m_values: pick(&self.m, base.m_values),
            n_values: pick(&self.n, base.n_values),
            beta_values: pick(&self.beta, base.beta_values),
            qt: if self.qt.is_empty() {
                base.qt
            } else {
                QtSelection::Values(self.qt.clone())
            },
            t: self.t,
            oversampling: self.oversampling,
            sinc_zeros: self.sinc_zeros,
        }
    }
}

fn pick<V: Clone>(given: &[V], default: Vec<V>) -> Vec<V> {
    if given.is_empty() {
        default
    } else {
        given.to_vec()
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Analytic,
    Dft,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OutputArgs {
    fn emit(&self, text: &str) -> ddop::Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text)?,
            None => std::io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

fn samples_csv<'a>(header: &str, rows: impl Iterator<Item = (f64, &'a num_complex::Complex64)>) -> String {
    let mut out = format!("{header},re,im\n");
    for (x, v) in rows {
        let _ = writeln!(out, "{x},{},{}", v.re, v.im);
    }
    out
}

fn samples_json<'a>(key: &str, rows: impl Iterator<Item = (f64, &'a num_complex::Complex64)>) -> ddop::Result<String> {
    let (mut xs, mut re, mut im) = (Vec::new(), Vec::new(), Vec::new());
    for (x, v) in rows {
        xs.push(x);
        re.push(v.re);
        im.push(v.im);
    }
    Ok(serde_json::to_string(&json!({ key: xs, "re": re, "im": im }))? + "\n")
}

fn table_output(table: &SweepTable, format: Format) -> ddop::Result<String> {
    for skip in &table.skipped {
        let p = &skip.params;
        eprintln!(
            "skipped M={} N={} beta={} Qt={}: {}",
            p.m(),
            p.n(),
            p.beta(),
            p.qt(),
            skip.reason
        );
    }
    match format {
        Format::Csv => Ok(table.to_csv()),
        Format::Json => Ok(table.to_json()? + "\n"),
    }
}

fn key_values(pairs: &[(&str, String)]) -> String {
    let header: Vec<&str> = pairs.iter().map(|(k, _)| *k).collect();
    let values: Vec<&str> = pairs.iter().map(|(_, v)| v.as_str()).collect();
    format!("{}\n{}\n", header.join(","), values.join(","))
}

fn run(command: Command) -> ddop::Result<bool> {
    match command {
        Command::Synth { pulse, general, output } => {
            let s = pulse.signal(general)?;
            let rows = s.grid().points().zip(s.values());
            let text = match output.format {
                Format::Csv => samples_csv("t", rows),
                Format::Json => samples_json("t", rows)?,
            };
            output.emit(&text)?;
        }
        Command::Spectrum {
            pulse,
            general,
            source,
            zero_pad,
            output,
        } => {
            let s = pulse.signal(general)?;
            let spectrum = match source {
                Source::Analytic => analytic_spectrum_of(&s, pulse.sinc_zeros, pulse.oversampling)?,
                Source::Dft => spectrum_dft(&s, zero_pad)?,
            };
            let rows = spectrum.grid().points().zip(spectrum.values());
            let text = match output.format {
                Format::Csv => samples_csv("f", rows),
                Format::Json => samples_json("f", rows)?,
            };
            output.emit(&text)?;
        }
        Command::Localize { pulse, general, output } => {
            let p = pulse.params()?;
            let numeric = localize(&pulse.signal(general)?, pulse.analytic_source())?;
            let variant = if general { Variant::General } else { Variant::Strict };
            let closed = ClosedFormReport::for_variant(&p, variant);
            let text = match output.format {
                Format::Json => {
                    serde_json::to_string_pretty(&json!({
                        "params": p,
                        "numeric": numeric,
                        "closed_form": closed,
                    }))? + "\n"
                }
                Format::Csv => key_values(&[
                    ("dt_num", numeric.delta_t.to_string()),
                    ("df_num", numeric.delta_f.to_string()),
                    ("da_num", numeric.delta_a.to_string()),
                    ("dt_ana", closed.delta_t.to_string()),
                    ("df_ana", closed.delta_f.to_string()),
                    ("da_ana", closed.delta_a.to_string()),
                ]),
            };
            output.emit(&text)?;
        }
        Command::SweepBeta { sweep, output } => {
            let table = sweep_beta(&sweep.config(SweepConfig::default()))?;
            output.emit(&table_output(&table, output.format)?)?;
        }
        Command::SweepQt { sweep, output } => {
            let table = sweep_qt(&sweep.config(SweepConfig::qt_default()))?;
            output.emit(&table_output(&table, output.format)?)?;
        }
        Command::Ortho {
            pulse,
            delay_min,
            delay_max,
            doppler_min,
            doppler_max,
            output,
        } => {
            let p = pulse.params()?;
            let (delays, dopplers) = full_ranges(&p);
            let delays = delay_min.unwrap_or(*delays.start())..=delay_max.unwrap_or(*delays.end());
            let dopplers = doppler_min.unwrap_or(*dopplers.start())..=doppler_max.unwrap_or(*dopplers.end());
            let r = orthogonality_check(&p, pulse.oversampling, delays, dopplers)?;
            let text = match output.format {
                Format::Json => serde_json::to_string_pretty(&r)? + "\n",
                Format::Csv => key_values(&[
                    ("energy", r.energy.to_string()),
                    ("max_residual", r.max_residual.to_string()),
                    ("worst_delay", r.worst_delay.to_string()),
                    ("worst_doppler", r.worst_doppler.to_string()),
                    ("max_doppler_residual", r.max_doppler_residual.to_string()),
                    ("pairs", r.pairs.to_string()),
                ]),
            };
            output.emit(&text)?;
        }
        Command::Selftest { oversampling, output } => {
            if oversampling == 0 {
                return Err(DdopError::InvalidParameter("oversampling must be >= 1".into()));
            }
            let summary = run_selftest(&SelftestConfig { oversampling });
            let text = match output.format {
                Format::Csv => format!("{summary}\n"),
                Format::Json => serde_json::to_string_pretty(&summary)? + "\n",
            };
            output.emit(&text)?;
            return Ok(summary.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
