//! Numerical evaluation of the Cauchy-kernel mean
//! `l(s) = (α/π) ∫ f(s+iτ) / (α² + (τ-β)²) dτ`.
//!
//! The real line is cut at `β ± T`. The central segment is integrated
//! adaptively. Outside it the integrand is split into the leading Dirichlet
//! term and the remainder. A constant leading term integrates exactly against
//! the kernel. A leading term `a^{-w}` with `a < 1` decays in the upper half
//! τ-plane, and the remainder decays in the lower half plane, so each tail ray
//! is rotated onto a vertical ray where the integrand falls off exponentially.

mod gk;

pub use gk::{integrate, Integral, EVALUATION_BUDGET};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::TransformParams;
use crate::error::{Error, Result};
use crate::special::{growth_exponent, EvalAccuracy, Family, TargetFunction};

/// Distance from the pole line (or special point) treated as lying on it.
pub const PROXIMITY_TOLERANCE: f64 = 1e-12;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub panels: usize,
    #[serde(rename = "truncation_T")]
    pub truncation_t: f64,
}

/// Cauchy density `α / (π (α² + (τ-β)²))`.
pub fn kernel_weight(params: TransformParams, tau: f64) -> f64 {
    let d = tau - params.beta;
    params.alpha / (PI * (params.alpha * params.alpha + d * d))
}

fn kernel_complex(params: TransformParams, tau: Complex64) -> Complex64 {
    let d = tau - params.beta;
    params.alpha / (PI * (d * d + params.alpha * params.alpha))
}

/// Growth offset used with the convexity exponent.
const GROWTH_EPSILON: f64 = 0.01;
/// Safety factor on the sampled growth constant.
const GROWTH_SAFETY: f64 = 1.5;

/// Upper bound for the kernel-weighted mass of `|f^{(k)}(s+iτ)|` over `|τ - β| > T`,
/// from `|f^{(k)}(σ+iu)| ≤ C (1+|u|)^{ν(σ)+ε}`. For constants `C = |c|` and `ε = 0`;
/// otherwise `C` is 1.5 times the largest ratio seen on 64 sample heights up to `T`.
pub fn tail_bound(target: &TargetFunction, s: Complex64, params: TransformParams, t_cut: f64) -> Result<f64> {
    let (alpha, beta) = (params.alpha, params.beta);
    if !(t_cut >= alpha + beta.abs() + s.im.abs() + 1.0) {
        return Err(Error::InvalidParameter(format!(
            "truncation T = {t_cut} must be at least alpha + |beta| + |Im s| + 1"
        )));
    }
    let nu = growth_exponent(target, s.re)?;
    let (c, p) = match (target.family(), target.k()) {
        (Family::ConstantTest { c }, 0) => (c.norm(), 0.0),
        (Family::ConstantTest { .. }, _) => (0.0, 0.0),
        _ => {
            let p = nu + GROWTH_EPSILON;
            let acc = EvalAccuracy::default().with_target(1e-8);
            let mut c: f64 = 0.0;
            for j in 0..64 {
                let u = (1.0 + t_cut).powf(j as f64 / 63.0) - 1.0;
                for u in [u, -u] {
                    let v = target.value(Complex64::new(s.re, u), &acc)?;
                    c = c.max(v.norm() / (1.0 + u.abs()).powf(p));
                }
            }
            (GROWTH_SAFETY * c, p)
        }
    };
    if p >= 1.0 {
        return Ok(f64::INFINITY);
    }
    let kappa = 1.0 + (1.0 + s.im.abs()) / t_cut;
    let shrink = 1.0 - beta.abs() / t_cut;
    Ok(c * (alpha / PI) * kappa.powf(p) / (shrink * shrink) * 2.0 * t_cut.powf(p - 1.0) / (1.0 - p))
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

fn check_domain(target: &TargetFunction, s: Complex64) -> Result<()> {
    let c = target.c_abscissa();
    if !(s.re > c) || !s.im.is_finite() {
        return Err(Error::DomainViolation { s, c });
    }
    Ok(())
}

fn eval_accuracy(tol: f64) -> EvalAccuracy {
    EvalAccuracy::default().with_target((0.01 * tol).min(1e-12))
}

/// Half-width of the directly integrated segment around `β`.
fn truncation(s: Complex64, params: TransformParams, pole: Option<Complex64>) -> f64 {
    let mut t = (params.alpha + params.beta.abs() + 1.0).max(s.im.abs() + params.beta.abs() + 2.0);
    if let Some(p) = pole {
        t = t.max((p.im - s.im - params.beta).abs() + 2.0);
    }
    t
}

struct Tally {
    value: Complex64,
    error: f64,
    panels: usize,
}

impl Tally {
    fn new() -> Self {
        Self { value: Complex64::new(0.0, 0.0), error: 0.0, panels: 0 }
    }

    fn add(&mut self, r: Integral) {
        self.value += r.value;
        self.error += r.error;
        self.panels += r.panels;
    }
}

/// Smallest `Y ≥ 4` (doubling) at which `|F(Y)| / rate` falls below `goal`.
fn decay_horizon<F>(f: &F, rate: f64, goal: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let mut y = 4.0;
    loop {
        let m = f(y)?.norm().max(f(0.9 * y)?.norm());
        let rest = m / rate;
        if rest <= goal || y >= 4096.0 {
            return Ok((y, rest));
        }
        y *= 2.0;
    }
}

fn geometric_breaks(y: f64) -> Vec<f64> {
    let mut v = Vec::new();
    let mut b = 1.0;
    while b < y {
        v.push(b);
        b *= 2.0;
    }
    v
}

/// Both tails `|τ - β| > T`.
fn tails(
    target: &TargetFunction,
    s: Complex64,
    params: TransformParams,
    t_cut: f64,
    tol: f64,
    acc: &EvalAccuracy,
    tally: &mut Tally,
) -> Result<()> {
    let a = params.beta - t_cut;
    let b = params.beta + t_cut;
    let (coef, base) = target.family().head();
    let k = target.k();

    if base == 1.0 {
        if k == 0 {
            let mass = 1.0 - 2.0 / PI * (t_cut / params.alpha).atan();
            tally.value += coef * mass;
        }
    } else {
        // h(s+iτ) = c a^{-s} e^{iτ ln(1/a)} decays for Im τ > 0
        let rate = -base.ln();
        for (edge, sign) in [(b, I), (a, -I)] {
            let f = |y: f64| -> Result<Complex64> {
                let tau = Complex64::new(edge, y);
                Ok(sign * kernel_complex(params, tau) * target.head_value(s + I * tau))
            };
            let (y_max, rest) = decay_horizon(&f, rate, 0.01 * tol)?;
            let r = integrate(f, 0.0, y_max, &geometric_breaks(y_max), 0.1 * tol)?;
            tally.add(r);
            tally.error += rest;
        }
    }

    if let Some(gb) = target.family().remainder_base() {
        // g(s+iτ) is a Dirichlet series starting at gb^{-w}, decaying for Im τ < 0
        let rate = gb.ln();
        for (edge, sign) in [(b, -I), (a, I)] {
            let f = |y: f64| -> Result<Complex64> {
                let tau = Complex64::new(edge, -y);
                Ok(sign * kernel_complex(params, tau) * target.remainder_value(s + I * tau, acc)?)
            };
            let (y_max, rest) = decay_horizon(&f, rate, 0.01 * tol)?;
            let r = integrate(f, 0.0, y_max, &geometric_breaks(y_max), 0.1 * tol)?;
            tally.add(r);
            tally.error += rest;
        }
    }
    Ok(())
}

/// `(α/π) ∫ f^{(k)}(s+iτ)/(α²+(τ-β)²) dτ` off the pole line.
pub fn mean_value_quadrature(
    target: &TargetFunction,
    s: Complex64,
    params: TransformParams,
    tol: f64,
) -> Result<QuadratureResult> {
    check_tol(tol)?;
    check_domain(target, s)?;
    let pole = target.pole().map(|p| p.s0);
    if let Some(p) = pole {
        if (s.re - p.re).abs() <= PROXIMITY_TOLERANCE {
            return Err(Error::OnPoleLine { sigma0: p.re });
        }
    }
    let acc = eval_accuracy(tol);
    let t_cut = truncation(s, params, pole);
    let mut breaks = vec![params.beta];
    if let Some(p) = pole {
        breaks.push(p.im - s.im);
    }
    let mut tally = Tally::new();
    let center = integrate(
        |tau| Ok(kernel_weight(params, tau) * target.value(s + I * tau, &acc)?),
        params.beta - t_cut,
        params.beta + t_cut,
        &breaks,
        0.5 * tol,
    )?;
    tally.add(center);
    tails(target, s, params, t_cut, tol, &acc, &mut tally)?;
    Ok(QuadratureResult {
        value: tally.value,
        error_estimate: tally.error + acc.target_abs_error,
        panels: tally.panels,
        truncation_t: t_cut,
    })
}

/// Principal value of the kernel mean on the pole line `Re(s) = σ0` (simple pole only),
/// with the default pairing half-width `δ = min(1, α)/2`.
pub fn principal_value_quadrature(
    target: &TargetFunction,
    s: Complex64,
    params: TransformParams,
    tol: f64,
) -> Result<QuadratureResult> {
    principal_value_quadrature_with_delta(target, s, params, tol, 0.5 * params.alpha.min(1.0))
}

/// As [`principal_value_quadrature`] with an explicit pairing half-width `delta`.
pub fn principal_value_quadrature_with_delta(
    target: &TargetFunction,
    s: Complex64,
    params: TransformParams,
    tol: f64,
    delta: f64,
) -> Result<QuadratureResult> {
    check_tol(tol)?;
    check_domain(target, s)?;
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 1], got {delta}")));
    }
    let Some(pole) = target.pole() else {
        return mean_value_quadrature(target, s, params, tol);
    };
    if pole.order > 1 {
        return Err(Error::PoleOrderTooHigh { m: pole.order });
    }
    if (s.re - pole.s0.re).abs() > PROXIMITY_TOLERANCE {
        return Err(Error::InvalidParameter(format!(
            "principal value needs Re(s) = {}, got {}",
            pole.s0.re, s.re
        )));
    }
    let s = Complex64::new(pole.s0.re, s.im);
    let acc = eval_accuracy(tol);
    let t_cut = truncation(s, params, Some(pole.s0));
    let star = pole.s0.im - s.im;
    let integrand = |tau: f64| -> Result<Complex64> { Ok(kernel_weight(params, tau) * target.value(s + I * tau, &acc)?) };

    let mut tally = Tally::new();
    // the odd singular part cancels between τ* + h and τ* - h
    let inner = integrate(|h| Ok(integrand(star + h)? + integrand(star - h)?), 0.0, delta, &[], 0.2 * tol)?;
    tally.add(inner);
    let left = integrate(&integrand, params.beta - t_cut, star - delta, &[params.beta], 0.15 * tol)?;
    let right = integrate(&integrand, star + delta, params.beta + t_cut, &[params.beta], 0.15 * tol)?;
    tally.add(left);
    tally.add(right);
    tails(target, s, params, t_cut, tol, &acc, &mut tally)?;
    Ok(QuadratureResult {
        value: tally.value,
        error_estimate: tally.error + acc.target_abs_error,
        panels: tally.panels,
        truncation_t: t_cut,
    })
}
