//! Experiment drivers: three-way mean-value comparisons, orbit distribution
//! checks, moment estimators and constant tables.
//!
//! Independent rows and seeds run on a rayon pool whose size is capped by
//! `BOOLEZETA_THREADS`; results always come back in input order.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_form::{classify, closed_form_mean_with_case, MeanValueCase};
use crate::dynamics::{
    birkhoff_average, ks_statistic, orbit, Checkpoint, CompensatedSum, OrbitConfig, StartDistribution, TransformParams,
};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, kernel_weight, mean_value_quadrature, principal_value_quadrature, QuadratureResult};
use crate::special::{
    laurent_extract, stieltjes_gamma, stieltjes_gamma_limit, EvalAccuracy, Family, LaurentExpansion, TargetFunction,
};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "BOOLEZETA_THREADS";

pub fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Maps `f` over `items` concurrently and returns the results in input order.
pub fn ordered_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match rayon::ThreadPoolBuilder::new().num_threads(thread_count()).build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}

/// Orbit settings shared by the ergodic commands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErgodicSettings {
    pub params: TransformParams,
    pub n_steps: usize,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub start: StartDistribution,
    /// Partial-average marks; empty means none.
    #[serde(default)]
    pub checkpoints: Vec<usize>,
}

impl ErgodicSettings {
    pub fn orbit_config(&self, seed: u64) -> Result<OrbitConfig> {
        OrbitConfig::new(self.params, self.n_steps, seed, self.start)
    }
}

/// `(1/N) Σ f^{(k)}(s + i Tⁿx₀)` for one seed.
pub fn ergodic_mean(
    target: &TargetFunction,
    s: Complex64,
    config: &OrbitConfig,
    checkpoints: &[usize],
) -> Result<crate::dynamics::BirkhoffAverage> {
    let c = target.c_abscissa();
    if !(s.re > c) {
        return Err(Error::DomainViolation { s, c });
    }
    let acc = EvalAccuracy::default();
    birkhoff_average(|x| target.value(s + I * x, &acc), config, checkpoints)
}

/// Kernel mean by quadrature, switching to the principal value on the pole line.
pub fn quadrature_mean(target: &TargetFunction, s: Complex64, params: TransformParams, tol: f64) -> Result<QuadratureResult> {
    match classify(target, s, params)? {
        MeanValueCase::OnPoleLine => principal_value_quadrature(target, s, params, tol),
        _ => mean_value_quadrature(target, s, params, tol),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErgodicSummary {
    pub estimate: Complex64,
    #[serde(rename = "N")]
    pub n: usize,
    pub seed: u64,
    pub checkpoints: Vec<Checkpoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSummary {
    pub value: Complex64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormSummary {
    pub value: Complex64,
    pub case: MeanValueCase,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Discrepancies {
    pub ergodic_closed: Option<f64>,
    pub quadrature_closed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanValueReport {
    pub target: TargetFunction,
    pub s: Complex64,
    pub params: TransformParams,
    pub ergodic: Option<ErgodicSummary>,
    pub quadrature: QuadratureSummary,
    pub closed_form: ClosedFormSummary,
    pub discrepancies: Discrepancies,
}

/// One report per seed (or a single report without an ergodic part when
/// there are no seeds). Closed form and quadrature are computed once.
pub fn mean_value_reports(
    target: &TargetFunction,
    s: Complex64,
    settings: &ErgodicSettings,
    tol: f64,
) -> Result<Vec<MeanValueReport>> {
    let params = settings.params;
    let (closed, case) = closed_form_mean_with_case(target, s, params)?;
    let quad = quadrature_mean(target, s, params, tol)?;
    let base = MeanValueReport {
        target: target.clone(),
        s,
        params,
        ergodic: None,
        quadrature: QuadratureSummary { value: quad.value, error_estimate: quad.error_estimate },
        closed_form: ClosedFormSummary { value: closed, case },
        discrepancies: Discrepancies { ergodic_closed: None, quadrature_closed: (quad.value - closed).norm() },
    };
    if settings.seeds.is_empty() {
        return Ok(vec![base]);
    }
    let runs = ordered_map(&settings.seeds, |&seed| {
        let cfg = settings.orbit_config(seed)?;
        ergodic_mean(target, s, &cfg, &settings.checkpoints).map(|b| (seed, b))
    });
    runs.into_iter()
        .map(|run| {
            let (seed, b) = run?;
            let mut r = base.clone();
            r.discrepancies.ergodic_closed = Some((b.estimate - closed).norm());
            r.ergodic = Some(ErgodicSummary { estimate: b.estimate, n: b.n, seed, checkpoints: b.checkpoints });
            Ok(r)
        })
        .collect()
}

/// One row of a comparison grid. Failures are recorded in `error` instead of
/// aborting the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub s: Complex64,
    pub case: Option<MeanValueCase>,
    pub closed: Option<Complex64>,
    pub quadrature: Option<Complex64>,
    pub quadrature_error: Option<f64>,
    /// Mean of the per-seed ergodic estimates.
    pub ergodic: Option<Complex64>,
    pub abs_quadrature_closed: Option<f64>,
    /// Median over seeds of `|ergodic - closed|`.
    pub abs_ergodic_closed: Option<f64>,
    pub error: Option<String>,
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) })
}

fn compare_row(target: &TargetFunction, s: Complex64, settings: &ErgodicSettings, tol: f64) -> CompareRow {
    let mut row = CompareRow {
        s,
        case: None,
        closed: None,
        quadrature: None,
        quadrature_error: None,
        ergodic: None,
        abs_quadrature_closed: None,
        abs_ergodic_closed: None,
        error: None,
    };
    let mut errors = Vec::new();
    match closed_form_mean_with_case(target, s, settings.params) {
        Ok((v, case)) => {
            row.closed = Some(v);
            row.case = Some(case);
        }
        Err(e) => errors.push(format!("closed form: {e}")),
    }
    match quadrature_mean(target, s, settings.params, tol) {
        Ok(q) => {
            row.quadrature = Some(q.value);
            row.quadrature_error = Some(q.error_estimate);
        }
        Err(e) => errors.push(format!("quadrature: {e}")),
    }
    if !settings.seeds.is_empty() {
        let runs: Result<Vec<Complex64>> = settings
            .seeds
            .iter()
            .map(|&seed| ergodic_mean(target, s, &settings.orbit_config(seed)?, &[]).map(|b| b.estimate))
            .collect();
        match runs {
            Ok(est) => {
                row.ergodic = Some(est.iter().sum::<Complex64>() / est.len() as f64);
                if let Some(c) = row.closed {
                    row.abs_ergodic_closed = median(est.iter().map(|e| (e - c).norm()).collect());
                }
            }
            Err(e) => errors.push(format!("ergodic: {e}")),
        }
    }
    if let (Some(q), Some(c)) = (row.quadrature, row.closed) {
        row.abs_quadrature_closed = Some((q - c).norm());
    }
    if !errors.is_empty() {
        row.error = Some(errors.join("; "));
    }
    row
}

/// Closed form, quadrature and ergodic average at each `s`, rows in input order.
pub fn compare(target: &TargetFunction, s_values: &[Complex64], settings: &ErgodicSettings, tol: f64) -> Vec<CompareRow> {
    ordered_map(s_values, |&s| compare_row(target, s, settings, tol))
}

/// KS threshold `0.01` at `n = 10⁶`, scaled like `1/√n`.
pub fn ks_threshold(n: usize) -> f64 {
    0.01 * (1e6 / n as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistCheck {
    pub ks_statistic: f64,
    pub n: usize,
    pub seed: u64,
    pub params: TransformParams,
    pub threshold: f64,
    pub pass: bool,
}

/// Kolmogorov–Smirnov distance between an orbit and the invariant Cauchy law.
pub fn distcheck(config: &OrbitConfig) -> Result<DistCheck> {
    let sample = orbit(config)?.collect::<Result<Vec<f64>>>()?;
    let ks = ks_statistic(&sample, config.params)?;
    let threshold = ks_threshold(sample.len());
    Ok(DistCheck {
        ks_statistic: ks,
        n: sample.len(),
        seed: config.seed,
        params: config.params,
        threshold,
        pass: ks < threshold,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSeries {
    pub seed: u64,
    /// `(1/n) Σ |f(½ + i Tʲx₀)|^{2l}` at each checkpoint.
    pub averages: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentBlock {
    pub l: u32,
    pub series: Vec<MomentSeries>,
    pub quadrature_reference: Option<QuadratureSummary>,
    /// Largest `|A(n) - A(N)| / A(N)` over checkpoints `n ≥ N/10` and seeds.
    /// Diagnostic only.
    pub stabilization: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub target: TargetFunction,
    pub k: u32,
    pub params: TransformParams,
    #[serde(rename = "N")]
    pub n: usize,
    pub seeds: Vec<u64>,
    pub checkpoints: Vec<usize>,
    pub moments: Vec<MomentBlock>,
}

/// Moments up to this `2l` get a quadrature reference.
pub const MOMENT_REFERENCE_MAX_POWER: u32 = 4;

/// Half-width of the reference integration window around β.
const REFERENCE_WINDOW: f64 = 1000.0;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn critical_line(x: f64) -> Complex64 {
    Complex64::new(0.5, x)
}

/// Running `2l`-th moments of `f` on the line `Re s = ½` for every `l` in `ls`.
fn moment_series(target: &TargetFunction, ls: &[u32], config: &OrbitConfig, marks: &[usize]) -> Result<Vec<Vec<f64>>> {
    let acc = EvalAccuracy::default();
    let mut sums = vec![CompensatedSum::default(); ls.len()];
    let mut out = vec![Vec::with_capacity(marks.len()); ls.len()];
    let mut next = marks.iter().peekable();
    for (i, x) in orbit(config)?.enumerate() {
        let sq = target.value(critical_line(x?), &acc)?.norm_sqr();
        for (sum, &l) in sums.iter_mut().zip(ls) {
            sum.add(Complex64::new(sq.powi(l as i32), 0.0));
        }
        let n = i + 1;
        if next.peek() == Some(&&n) {
            next.next();
            for (row, sum) in out.iter_mut().zip(&sums) {
                row.push(sum.value().re / n as f64);
            }
        }
    }
    Ok(out)
}

fn stabilization(averages: &[f64], marks: &[usize], n: usize) -> f64 {
    let Some(&last) = averages.last() else { return 0.0 };
    let mut worst: f64 = 0.0;
    for (a, &m) in averages.iter().zip(marks) {
        if 10 * m >= n {
            let d = (a - last).abs();
            worst = worst.max(if last != 0.0 { d / last.abs() } else { d });
        }
    }
    worst
}

/// `(α/π) ∫ |f(½+iτ)|^{2l} / (α² + (τ-β)²) dτ` over `|τ-β| ≤ 1000`, plus a
/// tail estimate. For `ζ` with `l = 1` the tail uses the mean-square
/// asymptotic `∫_0^T |ζ(½+it)|² dt ~ T ln(T/2π) + (2γ-1)T`; otherwise the
/// sampled average of the integrand near the window edges is continued outward.
pub fn moment_reference(target: &TargetFunction, params: TransformParams, l: u32, tol: f64) -> Result<QuadratureSummary> {
    if l == 0 {
        return Err(Error::InvalidParameter("moment index l must be at least 1".into()));
    }
    if let (Family::ConstantTest { c }, 0) = (target.family(), target.k()) {
        return Ok(QuadratureSummary { value: Complex64::new(c.norm().powi(2 * l as i32), 0.0), error_estimate: 0.0 });
    }
    let acc = EvalAccuracy::default().with_target(1e-10);
    let t = REFERENCE_WINDOW;
    let (lo, hi) = (params.beta - t, params.beta + t);
    let power = |x: f64| -> Result<f64> { Ok(target.value(critical_line(x), &acc)?.norm_sqr().powi(l as i32)) };
    let body = integrate(
        |x| Ok(Complex64::new(kernel_weight(params, x) * power(x)?, 0.0)),
        lo,
        hi,
        &[params.beta, 0.0],
        tol,
    )?;
    let tail = if matches!(target.family(), Family::RiemannZeta) && target.k() == 0 && l == 1 {
        let edge = t - params.beta.abs();
        2.0 * params.alpha / PI * ((edge / (2.0 * PI)).ln() + 2.0 * EULER_GAMMA + 1.0) / edge
    } else {
        let mut m = 0.0;
        let samples = 64;
        for j in 0..samples {
            let u = 0.5 * t + 0.5 * t * (j as f64 + 0.5) / samples as f64;
            m += power(params.beta + u)? + power(params.beta - u)?;
        }
        m /= 2.0 * samples as f64;
        2.0 * params.alpha / PI * m / t
    };
    Ok(QuadratureSummary { value: Complex64::new(body.value.re + tail, 0.0), error_estimate: body.error + 0.5 * tail })
}

/// Moment estimator on `Re s = ½`. Seeds run concurrently.
pub fn lindelof(target: &TargetFunction, ls: &[u32], settings: &ErgodicSettings, tol: f64) -> Result<MomentReport> {
    if ls.is_empty() || ls.contains(&0) {
        return Err(Error::InvalidParameter("moment indices must be a nonempty list of l >= 1".into()));
    }
    if settings.seeds.is_empty() {
        return Err(Error::InvalidParameter("at least one seed is required".into()));
    }
    let c = target.c_abscissa();
    if !(0.5 > c) {
        return Err(Error::DomainViolation { s: Complex64::new(0.5, 0.0), c });
    }
    let n = settings.n_steps;
    let mut marks: Vec<usize> = settings.checkpoints.iter().copied().filter(|&m| m >= 1 && m <= n).collect();
    if marks.is_empty() {
        marks = crate::dynamics::log_checkpoints(1000.min(n), n, 4);
    }
    marks.sort_unstable();
    marks.dedup();
    if marks.last() != Some(&n) {
        marks.push(n);
    }
    let runs = ordered_map(&settings.seeds, |&seed| {
        let cfg = settings.orbit_config(seed)?;
        moment_series(target, ls, &cfg, &marks)
    });
    let runs: Vec<Vec<Vec<f64>>> = runs.into_iter().collect::<Result<_>>()?;
    let references = ordered_map(ls, |&l| {
        (2 * l <= MOMENT_REFERENCE_MAX_POWER).then(|| moment_reference(target, settings.params, l, tol)).transpose()
    });
    let mut moments = Vec::with_capacity(ls.len());
    for (j, (&l, reference)) in ls.iter().zip(references).enumerate() {
        let series: Vec<MomentSeries> = settings
            .seeds
            .iter()
            .zip(&runs)
            .map(|(&seed, run)| MomentSeries { seed, averages: run[j].clone() })
            .collect();
        let stab = series.iter().map(|s| stabilization(&s.averages, &marks, n)).fold(0.0, f64::max);
        moments.push(MomentBlock { l, series, quadrature_reference: reference?, stabilization: stab });
    }
    Ok(MomentReport {
        target: target.clone(),
        k: target.k(),
        params: settings.params,
        n,
        seeds: settings.seeds.clone(),
        checkpoints: marks,
        moments,
    })
}

/// Default extraction radius for Laurent tables.
pub const LAURENT_TABLE_RADIUS: f64 = 0.5;

/// Laurent data of `target` about `s = 1`. For entire targets the principal
/// part is still extracted (and comes out zero) at the order `k + 1` a pole would have.
pub fn laurent_table(target: &TargetFunction, n_max: u32, radius: f64) -> Result<LaurentExpansion> {
    let m = target.pole().map_or(target.k() + 1, |p| p.order);
    let acc = EvalAccuracy::default().with_target(1e-14);
    laurent_extract(target, Complex64::new(1.0, 0.0), m, n_max, radius, &acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StieltjesRow {
    pub k: u32,
    pub gamma: f64,
    pub gamma_limit: f64,
    pub agreement: f64,
}

pub fn stieltjes_table(k_max: u32) -> Result<Vec<StieltjesRow>> {
    let ks: Vec<u32> = (0..=k_max).collect();
    ordered_map(&ks, |&k| {
        let gamma = stieltjes_gamma(k)?;
        let gamma_limit = stieltjes_gamma_limit(k)?;
        Ok(StieltjesRow { k, gamma, gamma_limit, agreement: (gamma - gamma_limit).abs() })
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn settings(n: usize, seeds: Vec<u64>) -> ErgodicSettings {
        ErgodicSettings {
            params: TransformParams::standard(),
            n_steps: n,
            seeds,
            start: StartDistribution::default(),
            checkpoints: vec![],
        }
    }

    #[test]
    fn ordered_map_keeps_order() {
        let v: Vec<u64> = (0..100).collect();
        assert_eq!(ordered_map(&v, |x| x * x), v.iter().map(|x| x * x).collect::<Vec<_>>());
    }

    #[test]
    fn ks_threshold_scaling() {
        assert!((ks_threshold(1_000_000) - 0.01).abs() < 1e-15);
        assert!((ks_threshold(10) - 3.162_277_660_168_379_5).abs() < 1e-12);
    }

    #[test]
    fn compare_constant_target() {
        let t = TargetFunction::new(Family::ConstantTest { c: c(1.5, -2.0) }, 0);
        let rows = compare(&t, &[c(0.0, 0.0), c(2.0, 1.0)], &settings(1000, vec![1, 2]), 1e-10);
        for r in rows {
            assert_eq!(r.error, None);
            assert_eq!(r.case, Some(MeanValueCase::NoPole));
            for v in [r.closed, r.quadrature, r.ergodic] {
                assert!((v.unwrap() - c(1.5, -2.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn compare_records_errors_per_row() {
        let t = TargetFunction::new(Family::RiemannZeta, 1);
        let rows = compare(&t, &[c(1.0, 0.5), c(2.0, 0.0)], &settings(100, vec![]), 1e-8);
        assert!(rows[0].error.is_some());
        assert_eq!(rows[1].error, None);
        assert!(rows[1].abs_quadrature_closed.unwrap() < 1e-7);
    }

    #[test]
    fn nonprincipal_has_no_pole_case() {
        let t = TargetFunction::new(Family::dirichlet(4, 1).unwrap(), 0);
        let rows = compare(&t, &[c(0.25, 0.0)], &settings(100, vec![]), 1e-10);
        assert_eq!(rows[0].case, Some(MeanValueCase::NoPole));
        assert!(rows[0].abs_quadrature_closed.unwrap() < 1e-9);
    }

    #[test]
    fn constant_moments_exact() {
        let t = TargetFunction::new(Family::ConstantTest { c: c(0.6, 0.8) * 2.0 }, 0);
        let r = lindelof(&t, &[1, 2, 3], &settings(500, vec![3]), 1e-8).unwrap();
        for b in &r.moments {
            let exact = 4f64.powi(b.l as i32);
            for v in &b.series[0].averages {
                assert!((v - exact).abs() <= 1e-12 * exact);
            }
            assert!(b.stabilization <= 1e-12);
        }
        assert_eq!(r.moments[0].quadrature_reference.unwrap().value.re, 4.0);
        assert!(r.moments[2].quadrature_reference.is_none());
    }

    #[test]
    fn reports_round_trip() {
        let t = TargetFunction::new(Family::RiemannZeta, 0);
        let reps = mean_value_reports(&t, c(2.0, 0.0), &settings(200, vec![7]), 1e-10).unwrap();
        let json = serde_json::to_string(&reps).unwrap();
        let back: Vec<MeanValueReport> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, reps);
        assert!(reps[0].discrepancies.quadrature_closed < 1e-9);
    }

    #[test]
    fn stabilization_uses_last_decade() {
        let marks = [10, 100, 1000];
        assert!((stabilization(&[5.0, 1.1, 1.0], &marks, 1000) - 0.1).abs() < 1e-12);
    }
}
