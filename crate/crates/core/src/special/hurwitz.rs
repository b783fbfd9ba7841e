//! Hurwitz and Riemann zeta by Euler–Maclaurin summation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `B_{2j} / (2j)!` for `j = 1..=20`.
pub(crate) const BERNOULLI_OVER_FACTORIAL: [f64; 20] = [
    8.333_333_333_333_333_3e-2,
    -1.388_888_888_888_888_9e-3,
    3.306_878_306_878_306_9e-5,
    -8.267_195_767_195_767_2e-7,
    2.087_675_698_786_809_9e-8,
    -5.284_190_138_687_493_2e-10,
    1.338_253_653_068_467_9e-11,
    -3.389_680_296_322_582_9e-13,
    8.586_062_056_277_844_6e-15,
    -2.174_868_698_558_061_9e-16,
    5.509_002_828_360_229_5e-18,
    -1.395_446_468_581_252_3e-19,
    3.534_707_039_629_467_5e-21,
    -8.953_517_427_037_546_9e-23,
    2.267_952_452_337_683_1e-24,
    -5.744_790_668_872_202_4e-26,
    1.455_172_475_614_864_9e-27,
    -3.685_994_940_665_310_2e-29,
    9.336_734_257_095_044_7e-31,
    -2.365_022_415_700_629_9e-32,
];

/// Lower edge of the region where the continuation is evaluated.
pub const MIN_REAL_PART: f64 = -10.0;

const MAX_SUMMANDS: usize = 1 << 26;

/// Accuracy controls shared by every special-function evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalAccuracy {
    /// Absolute truncation error the evaluators aim for.
    pub target_abs_error: f64,
    /// Minimum number of directly summed terms `M`; raised automatically with `|s|`.
    pub em_terms: usize,
    /// Maximum number of Bernoulli correction terms `J` (at most 19 are used).
    pub bernoulli_terms: usize,
}

impl Default for EvalAccuracy {
    fn default() -> Self {
        Self { target_abs_error: 1e-12, em_terms: 5, bernoulli_terms: 15 }
    }
}

impl EvalAccuracy {
    pub fn new(target_abs_error: f64, em_terms: usize, bernoulli_terms: usize) -> Result<Self> {
        let acc = Self { target_abs_error, em_terms, bernoulli_terms };
        acc.validate()?;
        Ok(acc)
    }

    pub fn with_target(self, target_abs_error: f64) -> Self {
        Self { target_abs_error, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.target_abs_error > 0.0 && self.target_abs_error.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "target_abs_error must be positive, got {}",
                self.target_abs_error
            )));
        }
        if self.em_terms == 0 || self.bernoulli_terms == 0 {
            return Err(Error::InvalidParameter("em_terms and bernoulli_terms must be >= 1".into()));
        }
        Ok(())
    }
}

/// A value with its estimated truncation error and a rounding-error scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Estimate {
    pub value: Complex64,
    pub error: f64,
    pub rounding: f64,
}

/// `x^{-s}` for real `x > 0`, given `ln x`.
#[inline]
pub(crate) fn pow_neg(ln_x: f64, s: Complex64) -> Complex64 {
    let mag = (-s.re * ln_x).exp();
    let (sin, cos) = (-s.im * ln_x).sin_cos();
    Complex64::new(mag * cos, mag * sin)
}

/// `(e^z - 1) / z`, accurate near zero.
pub(crate) fn expm1_over(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for n in 2..=20u32 {
            term = term * z / n as f64;
            sum += term;
        }
        sum
    } else {
        (z.exp() - 1.0) / z
    }
}

fn check_region(s: Complex64) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) || s.re <= MIN_REAL_PART {
        return Err(Error::OutOfSupportedRegion(s));
    }
    Ok(())
}

/// `ζ(s, a) - 1/(s-1)` for any real `a > 0`; finite at `s = 1`.
pub(crate) fn hurwitz_regular(s: Complex64, a: f64, acc: &EvalAccuracy) -> Result<Estimate> {
    check_region(s)?;
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidParameter(format!("Hurwitz parameter must be positive, got {a}")));
    }
    let tol = acc.target_abs_error;
    let j_max = acc.bernoulli_terms.clamp(1, BERNOULLI_OVER_FACTORIAL.len() - 1);
    let mut m = acc.em_terms.max(1).max((0.4 * s.norm()).ceil() as usize);
    let mut head = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0;
    let mut summed = 0usize;
    loop {
        for n in summed..m {
            let term = pow_neg((n as f64 + a).ln(), s);
            magnitude += term.norm();
            head += term;
        }
        summed = m;
        let (tail, error) = em_tail(s, m as f64 + a, j_max, tol);
        if error <= tol || m >= MAX_SUMMANDS {
            if error > tol {
                return Err(Error::NonConvergence { what: "Euler-Maclaurin summation", budget: m });
            }
            // phases t ln(n + a) carry an absolute error of about eps |t| ln(M + a)
            let phase = 1.0 + s.im.abs() * (m as f64 + a).ln();
            let rounding = 4.0 * f64::EPSILON * phase * (magnitude + tail.norm());
            return Ok(Estimate { value: head + tail, error, rounding });
        }
        m = (2 * m).min(MAX_SUMMANDS);
    }
}

/// Tail of the Euler–Maclaurin formula at `x = M + a`, with the pole removed.
fn em_tail(s: Complex64, x: f64, j_max: usize, tol: f64) -> (Complex64, f64) {
    let lx = x.ln();
    let x_s = pow_neg(lx, s);
    let one = Complex64::new(1.0, 0.0);
    let mut tail = -lx * expm1_over((one - s) * lx) + 0.5 * x_s;

    let inv_x2 = 1.0 / (x * x);
    let mut poch = s;
    let mut xpow = x_s / x;
    let mut error = f64::INFINITY;
    for j in 1..=j_max + 1 {
        let term = BERNOULLI_OVER_FACTORIAL[j - 1] * poch * xpow;
        let next_deg = s + (2 * j + 1) as f64;
        let factor = (next_deg.norm() / next_deg.re.max(1.0)).max(1.0);
        let bound = term.norm() * factor;
        if j == j_max + 1 {
            error = bound;
            break;
        }
        tail += term;
        if bound <= 0.25 * tol {
            error = bound;
            break;
        }
        poch *= (s + (2 * j - 1) as f64) * (s + (2 * j) as f64);
        xpow *= inv_x2;
    }
    (tail, error)
}

/// Hurwitz zeta `ζ(s, a)` for `a ∈ (0, 1]`.
pub fn hurwitz_zeta(s: Complex64, a: f64, acc: &EvalAccuracy) -> Result<Complex64> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::InvalidParameter(format!("Hurwitz parameter must lie in (0, 1], got {a}")));
    }
    hurwitz_any(s, a, acc)
}

/// Hurwitz zeta for any `a > 0`.
pub(crate) fn hurwitz_any(s: Complex64, a: f64, acc: &EvalAccuracy) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::PoleAt1);
    }
    let r = hurwitz_regular(s, a, acc)?;
    Ok(r.value + 1.0 / (s - 1.0))
}

/// Riemann zeta.
pub fn riemann_zeta(s: Complex64, acc: &EvalAccuracy) -> Result<Complex64> {
    hurwitz_zeta(s, 1.0, acc)
}
