//! Closed-form evaluation of the Cauchy-kernel mean of `f^{(k)}`.
//!
//! For a Dirichlet series `Σ c_n n^{-w}` with every `n ≥ 1`, the kernel mean
//! is `f(s+α+iβ)` corrected by the principal part of the pole. A leading term
//! `a^{-w}` with `a < 1` (Hurwitz zeta) instead averages to its value at
//! `s-α+iβ`, so that term is swapped out explicitly.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::TransformParams;
use crate::error::{Error, Result};
use crate::quadrature::PROXIMITY_TOLERANCE;
use crate::special::{evaluate_target, laurent_extract, EvalAccuracy, LaurentExpansion, TargetFunction};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Radius of the extraction circle for cached Laurent data.
const LAURENT_RADIUS: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeanValueCase {
    NoPole,
    LeftOfPoleGeneric,
    LeftOfPoleSpecialPoint,
    RightOfPole,
    OnPoleLine,
}

impl MeanValueCase {
    pub fn name(self) -> &'static str {
        match self {
            MeanValueCase::NoPole => "no_pole",
            MeanValueCase::LeftOfPoleGeneric => "left_generic",
            MeanValueCase::LeftOfPoleSpecialPoint => "left_special_point",
            MeanValueCase::RightOfPole => "right",
            MeanValueCase::OnPoleLine => "on_line",
        }
    }
}

fn special_point(s0: Complex64, params: TransformParams) -> Complex64 {
    s0 - params.alpha - I * params.beta
}

pub fn classify(target: &TargetFunction, s: Complex64, params: TransformParams) -> Result<MeanValueCase> {
    let c = target.c_abscissa();
    if !(s.re > c) {
        return Err(Error::DomainViolation { s, c });
    }
    let Some(pole) = target.pole() else {
        return Ok(MeanValueCase::NoPole);
    };
    let sigma0 = pole.s0.re;
    if (s.re - sigma0).abs() <= PROXIMITY_TOLERANCE {
        if pole.order > 1 {
            return Err(Error::LineCaseUnsupported { sigma0, m: pole.order });
        }
        return Ok(MeanValueCase::OnPoleLine);
    }
    if s.re > sigma0 {
        return Ok(MeanValueCase::RightOfPole);
    }
    if (s - special_point(pole.s0, params)).norm() <= PROXIMITY_TOLERANCE {
        return Ok(MeanValueCase::LeftOfPoleSpecialPoint);
    }
    Ok(MeanValueCase::LeftOfPoleGeneric)
}

/// `((-1)^k k! / i^{k+1}) [(β+iα-i(s-1))^{-(k+1)} - (β-iα-i(s-1))^{-(k+1)}]`.
pub fn a_k_term(params: TransformParams, s: Complex64, k: u32) -> Complex64 {
    let fact: f64 = (1..=k).map(f64::from).product();
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let shift = -I * (s - 1.0);
    let up = params.beta + I * params.alpha + shift;
    let down = params.beta - I * params.alpha + shift;
    let e = -(k as i32 + 1);
    sign * fact / I.powi(k as i32 + 1) * (up.powi(e) - down.powi(e))
}

/// `Σ_{n=1}^m a_{-n} / i^n [(β+iα-i(s-s0))^{-n} - (β-iα-i(s-s0))^{-n}]`.
pub fn b_m_term(params: TransformParams, s: Complex64, laurent: &LaurentExpansion) -> Result<Complex64> {
    if (s - special_point(laurent.s0, params)).norm() <= PROXIMITY_TOLERANCE {
        return Err(Error::SpecialPoint);
    }
    let shift = -I * (s - laurent.s0);
    let up = params.beta + I * params.alpha + shift;
    let down = params.beta - I * params.alpha + shift;
    let mut total = Complex64::new(0.0, 0.0);
    for n in 1..=laurent.m as i32 {
        let a = laurent.coefficient(-n).ok_or(Error::MissingCoefficients(-n))?;
        total += a / I.powi(n) * (up.powi(-n) - down.powi(-n));
    }
    Ok(total)
}

/// `Σ_{n=0}^m a_{-n} (-2α)^{-n}`.
pub fn special_point_value(laurent: &LaurentExpansion, alpha: f64) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for n in 0..=laurent.m as i32 {
        let a = laurent.coefficient(-n).ok_or(Error::MissingCoefficients(-n))?;
        total += a * (-2.0 * alpha).powi(-n);
    }
    Ok(total)
}

fn laurent_cache() -> &'static Mutex<HashMap<String, Arc<LaurentExpansion>>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<LaurentExpansion>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Laurent data `a_{-m}..a_0` at the pole, extracted once per target.
pub fn pole_expansion(target: &TargetFunction) -> Result<Option<Arc<LaurentExpansion>>> {
    let Some(pole) = target.pole() else {
        return Ok(None);
    };
    let key = target.spec();
    if let Some(hit) = laurent_cache().lock().expect("cache lock").get(&key) {
        return Ok(Some(Arc::clone(hit)));
    }
    let acc = EvalAccuracy::default().with_target(1e-14);
    let l = Arc::new(laurent_extract(target, pole.s0, pole.order, 0, LAURENT_RADIUS, &acc)?);
    let mut cache = laurent_cache().lock().expect("cache lock");
    Ok(Some(Arc::clone(cache.entry(key).or_insert(l))))
}

/// The kernel mean by case analysis on the position of `s`, with the case used.
pub fn closed_form_mean_with_case(
    target: &TargetFunction,
    s: Complex64,
    params: TransformParams,
) -> Result<(Complex64, MeanValueCase)> {
    let case = classify(target, s, params)?;
    let acc = EvalAccuracy::default();
    let shifted = s + params.alpha + I * params.beta;
    let value = match case {
        MeanValueCase::NoPole | MeanValueCase::RightOfPole => evaluate_target(target, shifted, &acc)?,
        MeanValueCase::LeftOfPoleGeneric => {
            let l = pole_expansion(target)?.expect("pole present");
            evaluate_target(target, shifted, &acc)? + b_m_term(params, s, &l)?
        }
        MeanValueCase::LeftOfPoleSpecialPoint => {
            let l = pole_expansion(target)?.expect("pole present");
            special_point_value(&l, params.alpha)?
        }
        MeanValueCase::OnPoleLine => {
            let l = pole_expansion(target)?.expect("pole present");
            let s0 = l.s0;
            let a1 = l.coefficient(-1).ok_or(Error::MissingCoefficients(-1))?;
            let on_line = Complex64::new(s0.re + params.alpha, s.im + params.beta);
            let d = s0.im - s.im - params.beta;
            evaluate_target(target, on_line, &acc)? - a1 * params.alpha / (params.alpha * params.alpha + d * d)
        }
    };
    Ok((value + head_correction(target, s, params, case), case))
}

/// Replaces the mean of a leading term `a^{-w}`, `a < 1`, by its true value `h(s-α+iβ)`.
fn head_correction(target: &TargetFunction, s: Complex64, params: TransformParams, case: MeanValueCase) -> Complex64 {
    let (_, base) = target.family().head();
    if base >= 1.0 {
        return Complex64::new(0.0, 0.0);
    }
    let assumed = match case {
        MeanValueCase::LeftOfPoleSpecialPoint => target.pole().map_or(s, |p| p.s0),
        MeanValueCase::OnPoleLine => Complex64::new(target.pole().map_or(s.re, |p| p.s0.re), s.im) + params.alpha + I * params.beta,
        _ => s + params.alpha + I * params.beta,
    };
    let s_line = match case {
        MeanValueCase::OnPoleLine => Complex64::new(target.pole().map_or(s.re, |p| p.s0.re), s.im),
        _ => s,
    };
    target.head_value(s_line - params.alpha + I * params.beta) - target.head_value(assumed)
}

pub fn closed_form_mean(target: &TargetFunction, s: Complex64, params: TransformParams) -> Result<Complex64> {
    closed_form_mean_with_case(target, s, params).map(|(v, _)| v)
}
