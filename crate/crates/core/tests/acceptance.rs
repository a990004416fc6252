//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the
//! process exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ddop::closed_form::{delta_a_analytic, delta_f_analytic, delta_t_analytic, spectral_second_moment};
use ddop::experiments::{full_ranges, orthogonality_check, sweep_beta, sweep_qt, SweepConfig, SweepTable};
use ddop::grid::SampleGrid;
use ddop::localization::{localize, shift_identity, spectrum_dft, SpectrumSource};
use ddop::pulse::{reference_pulse, ReferenceKind};
use ddop::{synthesize_ddop, DdopParams, GABOR_LIMIT};

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn sqrt_rolloff(beta: f64) -> f64 {
    (1.0 + 3.0 * (PI * PI - 8.0) * beta * beta / (PI * PI)).sqrt()
}

// 1. Numeric vs closed-form dispersions over the default sweep grid.
fn closed_form_agreement(table: &SweepTable) -> Verdict {
    let mut oracle_gap: f64 = 0.0;
    for r in &table.rows {
        let p = r.params;
        let (m, n) = (f64::from(p.m()), f64::from(p.n()));
        let dt = n * p.t() / 12f64.sqrt();
        let df = m / p.t() * (1.0 / 12.0 + (PI * PI - 8.0) * p.beta().powi(2) / (4.0 * PI * PI)).sqrt();
        let da = m * n / 12.0 * sqrt_rolloff(p.beta());
        oracle_gap = oracle_gap
            .max(rel(r.analytic.delta_t, dt))
            .max(rel(r.analytic.delta_f, df))
            .max(rel(r.analytic.delta_a, da));
    }
    let (dt, df, da) = table.max_errors();
    let complete = table.rows.len() == 20 && table.skipped.is_empty();
    verdict(
        complete && oracle_gap < 1e-12 && dt <= 0.05 && df <= 1.0 && da <= 1.0,
        format!(
            "max err dT={dt:.4}% (<=0.05) dF={df:.4}% (<=1) dA={da:.4}% (<=1); rows={} closed-form oracle gap={oracle_gap:.1e}",
            table.rows.len()
        ),
    )
}

// 2. Gaussian at the Gabor limit; nothing below it.
fn gabor_limit(table: &SweepTable) -> Verdict {
    let grid = SampleGrid::centered(1e-3, 4000).unwrap();
    let dft = SpectrumSource::Dft { zero_pad: 2 };
    let gaussian = localize(&reference_pulse(ReferenceKind::Gaussian, 0.2, &grid).unwrap(), dft)
        .unwrap()
        .delta_a;
    let gap = rel(gaussian, GABOR_LIMIT);
    let mut lowest = f64::INFINITY;
    for kind in [
        ReferenceKind::Gaussian,
        ReferenceKind::RectangularTime,
        ReferenceKind::RectangularFrequency,
    ] {
        for scale in [0.2, 0.4] {
            let r = localize(&reference_pulse(kind, scale, &grid).unwrap(), dft).unwrap();
            lowest = lowest.min(r.delta_a / GABOR_LIMIT);
        }
    }
    for r in &table.rows {
        lowest = lowest.min(r.numeric.delta_a / GABOR_LIMIT);
    }
    verdict(
        gap <= 1e-3 && lowest >= 1.0 - 1e-3,
        format!("gaussian dA={gaussian:.7} (1/(4pi)={GABOR_LIMIT:.7}, rel {gap:.1e} <= 1e-3); min dA/(1/(4pi))={lowest:.6} >= 0.999"),
    )
}

// 3. Plateau structure of the general pulse area.
fn general_step_structure() -> Verdict {
    let table = sweep_qt(&SweepConfig::qt_default()).unwrap();
    let m = 32u32;
    let mut ok = table.rows.len() == 64 && table.skipped.is_empty();
    let mut worst_err: f64 = 0.0;
    let mut plateaus = Vec::new();
    let mut prev: Option<(u32, f64)> = None;
    for (i, r) in table.rows.iter().enumerate() {
        let qt = i as u32 + 1;
        let d = (2 * qt).div_ceil(m);
        let want = f64::from(m) * f64::from(16 + 2 * d) / 12.0 * sqrt_rolloff(0.1);
        ok &= r.params.qt() == qt && r.params.d() == d && rel(r.analytic.delta_a, want) < 1e-12;
        if let Some((pd, pa)) = prev {
            if pd == d {
                ok &= rel(r.analytic.delta_a, pa) < 1e-12;
            } else {
                ok &= r.analytic.delta_a > pa * (1.0 + 1e-6);
            }
        }
        if plateaus.last() != Some(&d) {
            plateaus.push(d);
        }
        prev = Some((d, r.analytic.delta_a));
        worst_err = worst_err.max(r.rel_err_da);
    }
    ok &= plateaus == vec![1, 2, 3, 4] && worst_err <= 1.5;
    verdict(
        ok,
        format!("Qt=1..64, plateaus D={plateaus:?}, max numeric-vs-analytic dA err={worst_err:.3}% (<=1.5)"),
    )
}

// 4. dA = dT * dF for random parameters.
fn factorization() -> Verdict {
    let mut rng = StdRng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let p = DdopParams::new(
            rng.gen_range(1..=4096),
            rng.gen_range(1..=4096),
            rng.gen_range(1e-6..1e6),
            rng.gen_range(0.0..=1.0),
            rng.gen_range(1..=512),
        )
        .unwrap();
        worst = worst.max(rel(delta_t_analytic(&p) * delta_f_analytic(&p), delta_a_analytic(&p)));
    }
    verdict(
        worst <= 1e-12,
        format!("1000 parameter sets, max rel gap {worst:.2e} (<=1e-12)"),
    )
}

/// Independent SRRC frequency response, from its textbook definition.
fn srrc_response(m: f64, n: f64, t: f64, beta: f64, f: f64) -> f64 {
    let f = f.abs();
    let lo = m * (1.0 - beta) / (2.0 * t);
    let hi = m * (1.0 + beta) / (2.0 * t);
    if f <= lo {
        (t / (m * n)).sqrt()
    } else if f <= hi {
        (t / (2.0 * m * n) * (1.0 + (PI * t / (beta * m) * (f - lo)).cos())).sqrt()
    } else {
        0.0
    }
}

/// 5-point Gauss-Legendre on `panels` equal panels of `[a, b]`.
fn gauss_legendre(g: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    const X: [f64; 5] = [
        0.0,
        0.538_469_310_105_683,
        -0.538_469_310_105_683,
        0.906_179_845_938_664,
        -0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.568_888_888_888_889,
        0.478_628_670_499_366,
        0.478_628_670_499_366,
        0.236_926_885_056_189,
        0.236_926_885_056_189,
    ];
    if b <= a {
        return 0.0;
    }
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let mid = a + (i as f64 + 0.5) * h;
            X.iter().zip(W).map(|(x, w)| w * g(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h
        })
        .sum()
}

// 5. Spectral second moment vs direct quadrature.
fn second_moment_oracle() -> Verdict {
    let (m, n, t) = (32.0, 16.0, 1.0);
    let mut worst: f64 = 0.0;
    for beta in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let p = DdopParams::new(32, 16, t, beta, 2).unwrap();
        let g = |f: f64| f * f * srrc_response(m, n, t, beta, f).powi(2);
        let lo = m * (1.0 - beta) / (2.0 * t);
        let hi = m * (1.0 + beta) / (2.0 * t);
        let quad = 2.0 * n * (gauss_legendre(g, 0.0, lo, 64) + gauss_legendre(g, lo, hi, 64));
        worst = worst.max(rel(spectral_second_moment(&p), quad));
    }
    verdict(
        worst <= 1e-4,
        format!("beta in {{0,0.25,0.5,0.75,1}}, max rel gap {worst:.2e} (<=1e-4)"),
    )
}

// 6. Second-moment shift identity on random even functions.
fn shift_identity_property() -> Verdict {
    let mut rng = StdRng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    let mut oracle_gap: f64 = 0.0;
    for i in 0..120 {
        let w: f64 = rng.gen_range(0.3..3.0);
        let c: f64 = rng.gen_range(-2.0..2.0);
        let a = rng.gen_range(0.2..5.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let b = rng.gen_range(-8.0..8.0);
        let r = match i % 3 {
            0 => {
                let x = move |r: f64| Complex64::new(0.0, c * r * r).exp() * (-w * r * r).exp();
                let r = shift_identity(x, (40.0 / w).sqrt(), a, b, 4000).unwrap();
                // |X|^2 = exp(-2 w r^2): closed-form left side
                let g = (PI / (2.0 * w)).sqrt();
                let exact = (g / (4.0 * w) + b * b * g) / (a * a * a).abs();
                oracle_gap = oracle_gap.max(rel(r.shifted, exact));
                r
            }
            1 => {
                let x = move |r: f64| Complex64::new((w * r).cosh().recip(), 0.0);
                shift_identity(x, 45.0 / w, a, b, 6000).unwrap()
            }
            _ => {
                let x = move |r: f64| Complex64::new((1.0 + c * c * r * r) * (-w * r * r).exp(), 0.0);
                shift_identity(x, (45.0 / w).sqrt(), a, b, 4000).unwrap()
            }
        };
        worst = worst.max(r.relative_error());
    }
    verdict(
        worst <= 1e-8 && oracle_gap <= 1e-8,
        format!("120 random (X, a, b), max rel gap {worst:.2e} (<=1e-8); gaussian closed-form gap {oracle_gap:.2e}"),
    )
}

// 7. Parseval for the DFT path and analytic-vs-DFT frequency dispersion.
fn parseval_and_cross_path() -> Verdict {
    let mut parseval: f64 = 0.0;
    let mut cross: f64 = 0.0;
    for m in [32u32, 64] {
        for beta in [0.1, 0.3, 0.5, 0.9] {
            for qt in [2, 8, 16] {
                let p = DdopParams::new(m, 16, 1.0, beta, qt).unwrap();
                let u = synthesize_ddop(&p, 16).unwrap();
                parseval = parseval.max(rel(spectrum_dft(&u, 2).unwrap().energy(), u.energy()));
                if qt >= 8 {
                    let ana = localize(&u, SpectrumSource::analytic()).unwrap().delta_f;
                    let dft = localize(&u, SpectrumSource::Dft { zero_pad: 2 }).unwrap().delta_f;
                    cross = cross.max(rel(dft, ana));
                }
            }
        }
    }
    verdict(
        parseval <= 1e-6 && cross <= 1e-2,
        format!(
            "max energy gap {parseval:.2e} (<=1e-6); max dF analytic vs dft {:.3}% (<=1) for Qt>=8",
            100.0 * cross
        ),
    )
}

// 8. Delay-Doppler orthogonality residual.
fn orthogonality_trend() -> Verdict {
    let residual = |m: u32, qt: u32| {
        let p = DdopParams::new(m, 16, 1.0, 0.1, qt).unwrap();
        let (delays, dopplers) = full_ranges(&p);
        orthogonality_check(&p, 16, delays, dopplers).unwrap().max_residual
    };
    let at_default: Vec<(u32, f64)> = [32u32, 64].iter().map(|&m| (m, residual(m, m.div_ceil(20)))).collect();
    let trend: Vec<f64> = [2, 4, 8, 16].iter().map(|&qt| residual(32, qt)).collect();
    let decreasing = trend.windows(2).all(|w| w[1] < w[0]);
    let small = at_default.iter().all(|&(_, r)| r <= 1e-2);
    let shown: Vec<String> = at_default.iter().map(|(m, r)| format!("M={m}: {r:.4}")).collect();
    let trend_shown: Vec<String> = trend.iter().map(|r| format!("{r:.4}")).collect();
    verdict(
        small && decreasing,
        format!(
            "residual at Qt=ceil(0.05M) [{}] (<=1e-2); Qt=2,4,8,16 at M=32: [{}] strictly decreasing={decreasing}",
            shown.join(", "),
            trend_shown.join(", ")
        ),
    )
}

// 9. Determinism and grid convergence.
fn determinism_and_convergence(table: &SweepTable) -> Verdict {
    let again = sweep_beta(&SweepConfig::default()).unwrap();
    let identical = again.to_csv() == table.to_csv() && again.to_json().unwrap() == table.to_json().unwrap();
    let fine = sweep_beta(&SweepConfig {
        oversampling: 32,
        ..SweepConfig::default()
    })
    .unwrap();
    let mut worst: f64 = 0.0;
    for (a, b) in table.rows.iter().zip(&fine.rows) {
        worst = worst
            .max(rel(a.numeric.delta_t, b.numeric.delta_t))
            .max(rel(a.numeric.delta_f, b.numeric.delta_f));
    }
    let worst = 100.0 * worst;
    verdict(
        identical && fine.rows.len() == table.rows.len() && worst < 0.05,
        format!("byte-identical rerun={identical}; max dT/dF change 16x -> 32x oversampling {worst:.2e}% (<0.05)"),
    )
}

fn main() -> ExitCode {
    let table = sweep_beta(&SweepConfig::default()).expect("default sweep runs");
    let criteria: Vec<(&str, Verdict)> = vec![
        ("1 closed-form agreement", closed_form_agreement(&table)),
        ("2 gabor limit", gabor_limit(&table)),
        ("3 general step structure", general_step_structure()),
        ("4 factorization", factorization()),
        ("5 spectral second moment", second_moment_oracle()),
        ("6 shift identity", shift_identity_property()),
        ("7 parseval and cross-path", parseval_and_cross_path()),
        ("8 orthogonality trend", orthogonality_trend()),
        ("9 determinism and convergence", determinism_and_convergence(&table)),
    ];
    let mut failed = 0;
    for (name, v) in &criteria {
        println!(
            "{} criterion {name}: {}",
            if v.passed { "PASS" } else { "FAIL" },
            v.detail
        );
        failed += usize::from(!v.passed);
    }
    println!("{} criteria, {failed} failed", criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
