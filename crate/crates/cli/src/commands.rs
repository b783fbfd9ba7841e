use std::io::Write;

use boolezeta_core::dynamics::{orbit as orbit_iter, OrbitConfig};
use boolezeta_core::experiments::{
    self, ordered_map, CompareRow, DistCheck, ErgodicSettings, MeanValueReport, LAURENT_TABLE_RADIUS,
};
use boolezeta_core::special::MAX_STIELTJES_INDEX;
use num_complex::Complex64;

use crate::config::{Format, RunConfig};
use crate::output::{self, complex, opt_real, real, text};
use crate::Failure;

fn settings(cfg: &RunConfig, allow_no_seeds: bool, first_mark: Option<usize>) -> Result<ErgodicSettings, Failure> {
    let n = cfg.n()?;
    Ok(ErgodicSettings {
        params: cfg.params()?,
        n_steps: n,
        seeds: cfg.seeds(allow_no_seeds)?,
        start: cfg.start(),
        checkpoints: first_mark.map(|f| cfg.checkpoint_marks(f, n)).unwrap_or_default(),
    })
}

fn finish(mut w: Box<dyn Write>) -> Result<(), Failure> {
    w.flush()?;
    Ok(())
}

/// Streams `step,value` rows for the first seed.
pub fn orbit(cfg: &RunConfig) -> Result<(), Failure> {
    let seed = cfg.seeds(false)?[0];
    let config = OrbitConfig::new(cfg.params()?, cfg.n()?, seed, cfg.start())?;
    let format = cfg.format(Format::Csv);
    let mut w = output::open(cfg.out.as_deref())?;
    let mut result = Ok(());
    match format {
        Format::Csv => writeln!(w, "step,value")?,
        Format::Json => write!(w, "{{\"seed\":{seed},\"values\":[")?,
    }
    for (step, x) in orbit_iter(&config)?.enumerate() {
        let x = match x {
            Ok(x) => x,
            Err(e) => {
                result = Err(Failure::from(e));
                break;
            }
        };
        match format {
            Format::Csv => writeln!(w, "{step},{}", real(x))?,
            Format::Json => write!(w, "{}{}", if step == 0 { "" } else { "," }, serde_json::to_string(&x)?)?,
        }
    }
    if format == Format::Json {
        writeln!(w, "]}}")?;
    }
    finish(w)?;
    result
}

pub fn distcheck(cfg: &RunConfig) -> Result<(), Failure> {
    let s = settings(cfg, false, None)?;
    let runs: Vec<DistCheck> = ordered_map(&s.seeds, |&seed| experiments::distcheck(&s.orbit_config(seed)?))
        .into_iter()
        .collect::<Result<_, _>>()?;
    let mut w = output::open(cfg.out.as_deref())?;
    match cfg.format(Format::Json) {
        Format::Json => output::json_one_or_many(&mut *w, &runs)?,
        Format::Csv => {
            writeln!(w, "seed,n,alpha,beta,ks_statistic,threshold,pass")?;
            for r in &runs {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{}",
                    r.seed,
                    r.n,
                    real(r.params.alpha),
                    real(r.params.beta),
                    real(r.ks_statistic),
                    real(r.threshold),
                    r.pass
                )?;
            }
        }
    }
    finish(w)
}

pub fn mean(cfg: &RunConfig) -> Result<(), Failure> {
    let target = cfg.target()?;
    let s_values = cfg.points(&[Complex64::new(2.0, 0.0)])?;
    let s = settings(cfg, true, Some(10))?;
    let tol = cfg.tol()?;
    let mut reports: Vec<MeanValueReport> = Vec::new();
    for point in s_values {
        reports.extend(experiments::mean_value_reports(&target, point, &s, tol)?);
    }
    let mut w = output::open(cfg.out.as_deref())?;
    match cfg.format(Format::Json) {
        Format::Json => output::json_one_or_many(&mut *w, &reports)?,
        Format::Csv => {
            writeln!(
                w,
                "target,s_re,s_im,alpha,beta,case,closed_re,closed_im,quadrature_re,quadrature_im,quadrature_error,\
                 seed,N,ergodic_re,ergodic_im,abs_quadrature_closed,abs_ergodic_closed"
            )?;
            for r in &reports {
                let erg = r.ergodic.as_ref();
                writeln!(
                    w,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    text(&r.target.spec()),
                    complex(Some(r.s)),
                    real(r.params.alpha),
                    real(r.params.beta),
                    r.closed_form.case.name(),
                    complex(Some(r.closed_form.value)),
                    complex(Some(r.quadrature.value)),
                    real(r.quadrature.error_estimate),
                    erg.map(|e| e.seed.to_string()).unwrap_or_default(),
                    erg.map(|e| e.n.to_string()).unwrap_or_default(),
                    complex(erg.map(|e| e.estimate)),
                    real(r.discrepancies.quadrature_closed),
                    opt_real(r.discrepancies.ergodic_closed),
                )?;
            }
        }
    }
    finish(w)
}

/// Default grid: the four real points `0, ½, 1, 2`.
const COMPARE_GRID: [Complex64; 4] = [
    Complex64::new(0.0, 0.0),
    Complex64::new(0.5, 0.0),
    Complex64::new(1.0, 0.0),
    Complex64::new(2.0, 0.0),
];

pub fn compare(cfg: &RunConfig) -> Result<(), Failure> {
    let target = cfg.target()?;
    let s_values = cfg.points(&COMPARE_GRID)?;
    let s = settings(cfg, true, None)?;
    let rows: Vec<CompareRow> = experiments::compare(&target, &s_values, &s, cfg.tol()?);
    let mut w = output::open(cfg.out.as_deref())?;
    match cfg.format(Format::Csv) {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &rows)?;
            writeln!(w)?;
        }
        Format::Csv => {
            writeln!(
                w,
                "s_re,s_im,case,closed_re,closed_im,quadrature_re,quadrature_im,quadrature_error,\
                 ergodic_re,ergodic_im,abs_quadrature_closed,abs_ergodic_closed,error"
            )?;
            for r in &rows {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{},{},{}",
                    complex(Some(r.s)),
                    r.case.map(|c| c.name()).unwrap_or_default(),
                    complex(r.closed),
                    complex(r.quadrature),
                    opt_real(r.quadrature_error),
                    complex(r.ergodic),
                    opt_real(r.abs_quadrature_closed),
                    opt_real(r.abs_ergodic_closed),
                    text(r.error.as_deref().unwrap_or("")),
                )?;
            }
        }
    }
    finish(w)
}

pub fn lindelof(cfg: &RunConfig) -> Result<(), Failure> {
    let target = cfg.target()?;
    let ls = cfg.l.clone().unwrap_or_else(|| vec![1]);
    let s = settings(cfg, false, Some(1000))?;
    let report = experiments::lindelof(&target, &ls, &s, cfg.tol()?.max(1e-8))?;
    let mut w = output::open(cfg.out.as_deref())?;
    match cfg.format(Format::Json) {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &report)?;
            writeln!(w)?;
        }
        Format::Csv => {
            for b in &report.moments {
                let reference = b.quadrature_reference;
                writeln!(
                    w,
                    "# l={} reference={} reference_error={} stabilization={}",
                    b.l,
                    opt_real(reference.map(|r| r.value.re)),
                    opt_real(reference.map(|r| r.error_estimate)),
                    real(b.stabilization)
                )?;
            }
            writeln!(w, "l,seed,n,average")?;
            for b in &report.moments {
                for series in &b.series {
                    for (n, a) in report.checkpoints.iter().zip(&series.averages) {
                        writeln!(w, "{},{},{n},{}", b.l, series.seed, real(*a))?;
                    }
                }
            }
        }
    }
    finish(w)
}

pub fn laurent(cfg: &RunConfig) -> Result<(), Failure> {
    let target = cfg.target()?;
    let n_max = cfg.n_max.unwrap_or(4);
    let radius = cfg.radius.unwrap_or(LAURENT_TABLE_RADIUS);
    let l = experiments::laurent_table(&target, n_max, radius)?;
    let mut w = output::open(cfg.out.as_deref())?;
    match cfg.format(Format::Csv) {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &l)?;
            writeln!(w)?;
        }
        Format::Csv => {
            writeln!(
                w,
                "# target={} s0={} m={} n_max={n_max} radius={} method=trapezoid on circle, base family then term-wise derivative",
                target.spec(),
                l.s0,
                l.m,
                real(radius)
            )?;
            writeln!(w, "n,re,im")?;
            for (n, a) in l.iter() {
                writeln!(w, "{n},{}", complex(Some(a)))?;
            }
        }
    }
    finish(w)
}

pub fn stieltjes(cfg: &RunConfig) -> Result<(), Failure> {
    let k_max = cfg.k_max.unwrap_or(10);
    if k_max > MAX_STIELTJES_INDEX {
        return Err(Failure::Usage(format!("k_max must be at most {MAX_STIELTJES_INDEX}")));
    }
    let rows = experiments::stieltjes_table(k_max)?;
    let mut w = output::open(cfg.out.as_deref())?;
    match cfg.format(Format::Csv) {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &rows)?;
            writeln!(w)?;
        }
        Format::Csv => {
            writeln!(w, "k,gamma,gamma_limit,agreement")?;
            for r in &rows {
                writeln!(w, "{},{},{},{}", r.k, real(r.gamma), real(r.gamma_limit), real(r.agreement))?;
            }
        }
    }
    finish(w)
}
