//! Affine Boolean transformations and their invariant Cauchy measure.
//!
//! `T(x) = (α/2)((x+β)/α − α/(x−β))` with the fixed point `T(β) = β`. It is the
//! conjugate of the classical Boolean map `x ↦ (x − 1/x)/2` by `φ(x) = αx + β`
//! and preserves the Cauchy law with location `β` and scale `α`.
//!
//! Floating-point orbits of a chaotic map drift away from true orbits after a
//! few dozen steps, so everything built on [`Orbit`] relies on distributional
//! behaviour only.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The pair `(α, β)` selecting the transformation and its invariant measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformParams {
    pub alpha: f64,
    pub beta: f64,
}

impl TransformParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha must be positive and finite, got {alpha}")));
        }
        if !beta.is_finite() {
            return Err(Error::InvalidParameter(format!("beta must be finite, got {beta}")));
        }
        Ok(Self { alpha, beta })
    }

    /// The classical Boolean transformation, `α = 1`, `β = 0`.
    pub fn standard() -> Self {
        Self { alpha: 1.0, beta: 0.0 }
    }
}

impl Default for TransformParams {
    fn default() -> Self {
        Self::standard()
    }
}

/// One step of the transformation.
pub fn apply(params: TransformParams, x: f64) -> Result<f64> {
    let TransformParams { alpha, beta } = params;
    if x == beta {
        return Ok(beta);
    }
    let y = 0.5 * alpha * ((x + beta) / alpha - alpha / (x - beta));
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::NonFinite(format!("T({x}) overflowed for alpha = {alpha}, beta = {beta}")))
    }
}

/// `φ(x) = αx + β`, which conjugates the classical map onto `T_{α,β}`.
pub fn affine_map(params: TransformParams, x: f64) -> f64 {
    params.alpha * x + params.beta
}

pub fn affine_map_inverse(params: TransformParams, y: f64) -> f64 {
    (y - params.beta) / params.alpha
}

/// How the starting point of an orbit is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StartDistribution {
    FixedPoint { x0: f64 },
    UniformInterval { lo: f64, hi: f64 },
    /// Draw from the invariant measure itself.
    CauchyInvariant,
}

impl Default for StartDistribution {
    fn default() -> Self {
        StartDistribution::UniformInterval { lo: -10.0, hi: 10.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitConfig {
    pub params: TransformParams,
    pub n_steps: usize,
    pub seed: u64,
    #[serde(default)]
    pub start: StartDistribution,
}

impl OrbitConfig {
    pub fn new(params: TransformParams, n_steps: usize, seed: u64, start: StartDistribution) -> Result<Self> {
        let cfg = Self { params, n_steps, seed, start };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        TransformParams::new(self.params.alpha, self.params.beta)?;
        if self.n_steps == 0 {
            return Err(Error::InvalidParameter("n_steps must be at least 1".into()));
        }
        match self.start {
            StartDistribution::FixedPoint { x0 } if !x0.is_finite() => {
                Err(Error::InvalidParameter(format!("starting point must be finite, got {x0}")))
            }
            StartDistribution::UniformInterval { lo, hi } if !(lo < hi && lo.is_finite() && hi.is_finite()) => {
                Err(Error::InvalidParameter(format!("uniform start needs finite lo < hi, got [{lo}, {hi}]")))
            }
            _ => Ok(()),
        }
    }

    /// Resolves the starting point. The generator is ChaCha8 seeded through
    /// `seed_from_u64`, so a seed fixes the start on every platform.
    pub fn starting_point(&self) -> f64 {
        match self.start {
            StartDistribution::FixedPoint { x0 } => x0,
            StartDistribution::UniformInterval { lo, hi } => {
                let u: f64 = ChaCha8Rng::seed_from_u64(self.seed).random();
                lo + (hi - lo) * u
            }
            StartDistribution::CauchyInvariant => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                // u in (0, 1) keeps tan away from its poles
                let u: f64 = loop {
                    let u: f64 = rng.random();
                    if u > 0.0 {
                        break u;
                    }
                };
                self.params.beta + self.params.alpha * (PI * (u - 0.5)).tan()
            }
        }
    }
}

/// Streaming orbit `x0, T(x0), T²(x0), …` of length `n_steps`.
///
/// Yields an error (and then stops) if an iterate becomes non-finite.
#[derive(Debug, Clone)]
pub struct Orbit {
    params: TransformParams,
    current: f64,
    emitted: usize,
    n_steps: usize,
    failed: bool,
}

impl Iterator for Orbit {
    type Item = Result<f64>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed || self.emitted >= self.n_steps {
            return None;
        }
        if self.emitted > 0 {
            match apply(self.params, self.current) {
                Ok(x) => self.current = x,
                Err(_) => {
                    self.failed = true;
                    return Some(Err(Error::NonFiniteIterate { step: self.emitted, previous: self.current }));
                }
            }
        }
        self.emitted += 1;
        Some(Ok(self.current))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = if self.failed { 0 } else { self.n_steps - self.emitted };
        (0, Some(rest))
    }
}

pub fn orbit(config: &OrbitConfig) -> Result<Orbit> {
    config.validate()?;
    Ok(Orbit {
        params: config.params,
        current: config.starting_point(),
        emitted: 0,
        n_steps: config.n_steps,
        failed: false,
    })
}

pub fn cauchy_density(params: TransformParams, x: f64) -> f64 {
    let d = x - params.beta;
    params.alpha / (PI * (params.alpha * params.alpha + d * d))
}

pub fn cauchy_cdf(params: TransformParams, x: f64) -> f64 {
    0.5 + ((x - params.beta) / params.alpha).atan() / PI
}

/// Invariant measure of the interval `(a, b)`; infinite endpoints are allowed.
pub fn measure_interval(params: TransformParams, a: f64, b: f64) -> Result<f64> {
    if a > b {
        return Err(Error::ArgumentOrder { a, b });
    }
    Ok((cauchy_cdf(params, b) - cauchy_cdf(params, a)).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }
}

// w - sqrt(w^2 + 1) and w + sqrt(w^2 + 1) without cancellation; ±inf map to the limits.
fn lower_branch(w: f64) -> f64 {
    if w == f64::INFINITY {
        0.0
    } else if w > 0.0 {
        -1.0 / (w + w.hypot(1.0))
    } else {
        w - w.hypot(1.0)
    }
}

fn upper_branch(w: f64) -> f64 {
    if w == f64::NEG_INFINITY {
        0.0
    } else if w < 0.0 {
        1.0 / (w.hypot(1.0) - w)
    } else {
        w + w.hypot(1.0)
    }
}

/// The two branch preimages of `(a, b)` under `T`: `[left of β, right of β]`.
///
/// When `β ∈ (a, b)` the full preimage also contains the fixed point `β`
/// itself, a null set that is not represented here.
///
/// Each branch of `T` is strictly increasing, with inverse
/// `y ↦ β + α(w ± √(w²+1))`, `w = (y − β)/α`.
pub fn preimage_intervals(params: TransformParams, a: f64, b: f64) -> Result<[Interval; 2]> {
    if !(a < b) {
        return Err(Error::ArgumentOrder { a, b });
    }
    let TransformParams { alpha, beta } = params;
    let wa = (a - beta) / alpha;
    let wb = (b - beta) / alpha;
    let left = Interval { lo: beta + alpha * lower_branch(wa), hi: beta + alpha * lower_branch(wb) };
    let right = Interval { lo: beta + alpha * upper_branch(wa), hi: beta + alpha * upper_branch(wb) };
    Ok([left, right])
}

/// Kolmogorov–Smirnov distance between the empirical CDF of `sample` and the
/// invariant Cauchy CDF.
pub fn ks_statistic(sample: &[f64], params: TransformParams) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut sorted = sample.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cauchy_cdf(params, x);
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        d = d.max(above).max(below);
    }
    Ok(d)
}

/// Neumaier-compensated complex accumulator; Birkhoff sums run to 10⁷ terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: Complex64) {
        self.sum.re = neumaier(self.sum.re, x.re, &mut self.comp.re);
        self.sum.im = neumaier(self.sum.im, x.im, &mut self.comp.im);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

fn neumaier(sum: f64, x: f64, comp: &mut f64) -> f64 {
    let t = sum + x;
    if sum.abs() >= x.abs() {
        *comp += (sum - t) + x;
    } else {
        *comp += (x - t) + sum;
    }
    t
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n: usize,
    pub average: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BirkhoffAverage {
    pub estimate: Complex64,
    pub n: usize,
    pub checkpoints: Vec<Checkpoint>,
}

/// `(1/N) Σ_{n<N} f(Tⁿx₀)` along the orbit described by `config`, with partial
/// averages recorded after each `checkpoints[i]` terms (values above `N` are ignored).
pub fn birkhoff_average<F>(mut f: F, config: &OrbitConfig, checkpoints: &[usize]) -> Result<BirkhoffAverage>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let mut marks: Vec<usize> = checkpoints.iter().copied().filter(|&c| c >= 1 && c <= config.n_steps).collect();
    marks.sort_unstable();
    marks.dedup();
    let mut marks = marks.into_iter().peekable();

    let mut acc = CompensatedSum::default();
    let mut recorded = Vec::new();
    for (i, x) in orbit(config)?.enumerate() {
        acc.add(f(x?)?);
        let n = i + 1;
        if marks.peek() == Some(&n) {
            marks.next();
            recorded.push(Checkpoint { n, average: acc.value() / n as f64 });
        }
    }
    Ok(BirkhoffAverage { estimate: acc.value() / config.n_steps as f64, n: config.n_steps, checkpoints: recorded })
}

/// `count` log-spaced checkpoints from `first` to `last` inclusive.
pub fn log_checkpoints(first: usize, last: usize, per_decade: usize) -> Vec<usize> {
    let first = first.clamp(1, last.max(1));
    let mut out = Vec::new();
    let lo = (first as f64).log10();
    let hi = (last as f64).log10();
    let steps = ((hi - lo) * per_decade as f64).round() as usize;
    for i in 0..=steps {
        let v = if steps == 0 { last as f64 } else { 10f64.powf(lo + (hi - lo) * i as f64 / steps as f64) };
        out.push(v.round() as usize);
    }
    out.push(last);
    out.sort_unstable();
    out.dedup();
    out
}

pub fn linear_checkpoints(step: usize, last: usize) -> Vec<usize> {
    let step = step.max(1);
    let mut out: Vec<usize> = (1..=last / step).map(|i| i * step).collect();
    if out.last() != Some(&last) {
        out.push(last);
    }
    out
}
