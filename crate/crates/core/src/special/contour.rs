//! Trapezoid-rule contour integrals on circles: derivatives and Laurent coefficients.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::hurwitz::EvalAccuracy;
use super::target::TargetFunction;
use crate::error::{Error, Result};

/// Node cap for both the derivative and the Laurent extraction.
pub const MAX_NODES: usize = 1 << 14;

const MIN_RADIUS: f64 = 1e-3;

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Falling factorial `n (n-1) ... (n-k+1)` for integer `n`.
fn falling(n: i64, k: u32) -> f64 {
    (0..k as i64).map(|j| (n - j) as f64).product()
}

/// Spectral convergence squares the error on each doubling; once the change
/// stops shrinking at a level far below the data it is evaluation noise.
fn at_noise_plateau(diff: f64, prev_diff: f64, scale: f64) -> bool {
    diff > 0.1 * prev_diff && diff < 1e-9 * scale
}

fn node(center: Complex64, r: f64, theta: f64) -> Complex64 {
    center + Complex64::from_polar(r, theta)
}

/// `f^{(k)}(s)` by Cauchy's integral formula on a circle of radius
/// `min(0.4 |s - pole|, 0.5)`, doubling the node count until successive
/// results agree to `acc.target_abs_error` (or to the rounding floor of the sum).
pub fn contour_derivative<F>(f: F, k: u32, s: Complex64, pole: Option<Complex64>, acc: &EvalAccuracy) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if k == 0 {
        return f(s);
    }
    let r = match pole {
        Some(p) => {
            let r = (0.4 * (s - p).norm()).min(0.5);
            if r < MIN_RADIUS {
                return Err(Error::TooCloseToPole { s, s0: p });
            }
            r
        }
        None => 0.5,
    };
    let scale = factorial(k) / r.powi(k as i32);
    let kf = f64::from(k);
    let add_nodes = |n: usize, step: usize, start: usize| -> Result<(Complex64, f64)> {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut fmax: f64 = 0.0;
        for j in (start..n).step_by(step) {
            let theta = 2.0 * PI * j as f64 / n as f64;
            let v = f(node(s, r, theta))?;
            fmax = fmax.max(v.norm());
            sum += v * Complex64::from_polar(1.0, -kf * theta);
        }
        Ok((sum, fmax))
    };

    let mut n = 16;
    let (mut raw, mut fmax) = add_nodes(n, 1, 0)?;
    let mut prev = raw * (scale / n as f64);
    let mut prev_diff = f64::INFINITY;
    while 2 * n <= MAX_NODES {
        let (more, m) = add_nodes(2 * n, 2, 1)?;
        raw += more;
        fmax = fmax.max(m);
        n *= 2;
        let cur = raw * (scale / n as f64);
        let floor = acc.target_abs_error.max(64.0 * f64::EPSILON * scale * fmax);
        if !(cur.re.is_finite() && cur.im.is_finite()) {
            return Err(Error::NonFinite(format!("contour derivative at {s}")));
        }
        let diff = (cur - prev).norm();
        if diff <= floor || at_noise_plateau(diff, prev_diff, scale * fmax) {
            return Ok(cur);
        }
        prev = cur;
        prev_diff = diff;
    }
    Err(Error::NonConvergence { what: "contour derivative", budget: MAX_NODES })
}

/// Laurent coefficients `a_n` for `-m <= n <= n_max` about `s0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentExpansion {
    pub s0: Complex64,
    pub m: u32,
    /// `coefficients[i]` is `a_{i - m}`.
    pub coefficients: Vec<Complex64>,
}

impl LaurentExpansion {
    pub fn new(s0: Complex64, m: u32, coefficients: Vec<Complex64>) -> Self {
        Self { s0, m, coefficients }
    }

    pub fn n_max(&self) -> i32 {
        self.coefficients.len() as i32 - self.m as i32 - 1
    }

    pub fn coefficient(&self, n: i32) -> Option<Complex64> {
        let i = n + self.m as i32;
        if i < 0 {
            return None;
        }
        self.coefficients.get(i as usize).copied()
    }

    /// Iterator over `(n, a_n)`.
    pub fn iter(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        let m = self.m as i32;
        self.coefficients.iter().enumerate().map(move |(i, &a)| (i as i32 - m, a))
    }

    /// Truncated series at `s`.
    pub fn evaluate(&self, s: Complex64) -> Complex64 {
        let z = s - self.s0;
        self.iter().map(|(n, a)| a * z.powi(n)).sum()
    }
}

/// Laurent expansion of `target` about `s0` from the base family by trapezoid
/// quadrature on `|z - s0| = radius`, then differentiated `k` times term by term.
pub fn laurent_extract(
    target: &TargetFunction,
    s0: Complex64,
    m: u32,
    n_max: u32,
    radius: f64,
    acc: &EvalAccuracy,
) -> Result<LaurentExpansion> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
    }
    let k = target.k();
    let family = target.family();
    // Base families have at most a simple pole.
    let lo: i64 = -1;
    let hi: i64 = n_max as i64 + k as i64;
    let count = (hi - lo + 1) as usize;
    let mut sums = vec![Complex64::new(0.0, 0.0); count];
    let mut fmax: f64 = 0.0;
    let accumulate = |sums: &mut [Complex64], fmax: &mut f64, n_nodes: usize, step: usize, start: usize| -> Result<()> {
        for j in (start..n_nodes).step_by(step) {
            let theta = 2.0 * PI * j as f64 / n_nodes as f64;
            let v = family.eval(node(s0, radius, theta), acc)?;
            *fmax = fmax.max(v.norm());
            for (i, slot) in sums.iter_mut().enumerate() {
                let n = lo + i as i64;
                *slot += v * Complex64::from_polar(1.0, -(n as f64) * theta);
            }
        }
        Ok(())
    };

    let mut n_nodes = 32usize;
    while n_nodes < 2 * count + 8 {
        n_nodes *= 2;
    }
    accumulate(&mut sums, &mut fmax, n_nodes, 1, 0)?;
    let mut prev: Vec<Complex64> = sums.iter().map(|v| v / n_nodes as f64).collect();
    let mut prev_diff = f64::INFINITY;
    let scaled = loop {
        if 2 * n_nodes > MAX_NODES {
            return Err(Error::NonConvergence { what: "Laurent extraction", budget: MAX_NODES });
        }
        accumulate(&mut sums, &mut fmax, 2 * n_nodes, 2, 1)?;
        n_nodes *= 2;
        let cur: Vec<Complex64> = sums.iter().map(|v| v / n_nodes as f64).collect();
        let diff = cur.iter().zip(&prev).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        let floor = acc.target_abs_error.max(64.0 * f64::EPSILON * fmax);
        if diff <= floor || at_noise_plateau(diff, prev_diff, fmax) {
            break cur;
        }
        prev = cur;
        prev_diff = diff;
    };

    // c_n from c_n r^n, then a_n = c_{n+k} (n+k)!/n! for the k-th derivative.
    let base = |n: i64| -> Complex64 {
        if n < lo {
            return Complex64::new(0.0, 0.0);
        }
        scaled[(n - lo) as usize] / radius.powi(n as i32)
    };
    let coefficients = (-(m as i64)..=n_max as i64)
        .map(|n| base(n + k as i64) * falling(n + k as i64, k))
        .collect();
    Ok(LaurentExpansion::new(s0, m, coefficients))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::principal_character;
    use crate::special::{evaluate_target, riemann_zeta, Family};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn acc() -> EvalAccuracy {
        EvalAccuracy::default()
    }

    const GAMMA0: f64 = 0.577_215_664_901_532_9;
    const GAMMA1: f64 = -0.072_815_845_483_676_72;

    #[test]
    fn zeta_prime_at_two() {
        let f = |z| riemann_zeta(z, &acc());
        let d = contour_derivative(f, 1, c(2.0, 0.0), Some(c(1.0, 0.0)), &acc()).unwrap();
        assert!((d - (-0.937_548_254_315_843_8)).norm() < 1e-11);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let s = c(3.0, 2.0);
        let f = |z| riemann_zeta(z, &acc());
        let d = contour_derivative(f, 1, s, Some(c(1.0, 0.0)), &acc()).unwrap();
        let h = 1e-4;
        let fd = (f(s + h).unwrap() - f(s - h).unwrap()) / (2.0 * h);
        assert!((d - fd).norm() < 1e-6);
    }

    #[test]
    fn too_close_to_pole() {
        let f = |z| riemann_zeta(z, &acc());
        let r = contour_derivative(f, 1, c(1.0 + 1e-4, 0.0), Some(c(1.0, 0.0)), &acc());
        assert!(matches!(r, Err(Error::TooCloseToPole { .. })));
    }

    #[test]
    fn zeta_laurent() {
        let t = TargetFunction::new(Family::RiemannZeta, 0);
        let l = laurent_extract(&t, c(1.0, 0.0), 1, 4, 0.5, &acc()).unwrap();
        assert!((l.coefficient(-1).unwrap() - 1.0).norm() < 1e-10);
        assert!((l.coefficient(0).unwrap() - GAMMA0).norm() < 1e-10);
        assert!((l.coefficient(1).unwrap() + GAMMA1).norm() < 1e-10);
        assert_eq!(l.n_max(), 4);

        let t = TargetFunction::new(Family::RiemannZeta, 1);
        let l = laurent_extract(&t, c(1.0, 0.0), 2, 2, 0.5, &acc()).unwrap();
        assert!((l.coefficient(-2).unwrap() + 1.0).norm() < 1e-10);
        assert!(l.coefficient(-1).unwrap().norm() < 1e-12);
        assert!((l.coefficient(0).unwrap() + GAMMA1).norm() < 1e-10);
    }

    #[test]
    fn constant_laurent() {
        let t = TargetFunction::new(Family::ConstantTest { c: c(2.0, -1.0) }, 0);
        let l = laurent_extract(&t, c(1.0, 0.0), 0, 3, 0.5, &acc()).unwrap();
        assert!((l.coefficient(0).unwrap() - c(2.0, -1.0)).norm() < 1e-15);
        for n in 1..=3 {
            assert!(l.coefficient(n).unwrap().norm() < 1e-13);
        }
    }

    #[test]
    fn reconstruction_near_pole() {
        let targets = [
            TargetFunction::new(Family::RiemannZeta, 0),
            TargetFunction::new(Family::DirichletL { chi: principal_character(4).unwrap() }, 0),
            TargetFunction::new(Family::RiemannZeta, 2),
        ];
        for t in &targets {
            let m = t.pole().unwrap().order;
            let l = laurent_extract(t, c(1.0, 0.0), m, 8, 0.5, &acc()).unwrap();
            for j in 0..8 {
                let theta = 2.0 * PI * j as f64 / 8.0 + 0.3;
                let s = c(1.0, 0.0) + Complex64::from_polar(0.1, theta);
                let direct = evaluate_target(t, s, &acc()).unwrap();
                assert!((l.evaluate(s) - direct).norm() < 1e-8, "{t} at {s}");
            }
        }
    }
}
