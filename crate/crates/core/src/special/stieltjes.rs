//! Stieltjes constants `γ_k`.

use num_complex::Complex64;

use super::contour::laurent_extract;
use super::hurwitz::{EvalAccuracy, BERNOULLI_OVER_FACTORIAL};
use super::target::{Family, TargetFunction};
use crate::error::{Error, Result};

/// Largest supported index.
pub const MAX_STIELTJES_INDEX: u32 = 20;

fn check_index(k: u32) -> Result<()> {
    if k > MAX_STIELTJES_INDEX {
        return Err(Error::InvalidParameter(format!("Stieltjes index must be <= {MAX_STIELTJES_INDEX}, got {k}")));
    }
    Ok(())
}

/// Extraction radius for `γ_k`; larger `k` needs a wider circle to keep `k!/R^k` small.
fn laurent_radius(k: u32) -> f64 {
    (0.5 + 0.25 * f64::from(k)).min(6.0)
}

/// `γ_k` from the constant Laurent coefficient of `ζ^{(k)}` at 1, which is `(-1)^k γ_k`.
pub fn stieltjes_gamma(k: u32) -> Result<f64> {
    check_index(k)?;
    let target = TargetFunction::new(Family::RiemannZeta, k);
    let acc = EvalAccuracy::default().with_target(1e-15);
    let one = Complex64::new(1.0, 0.0);
    let l = laurent_extract(&target, one, k + 1, 0, laurent_radius(k), &acc)?;
    let a0 = l.coefficient(0).expect("n_max = 0 is present").re;
    Ok(if k % 2 == 0 { a0 } else { -a0 })
}

/// `γ_k = lim (Σ_{n≤N} ln^k n / n - ln^{k+1} N/(k+1))`, with the limit
/// taken by an Euler–Maclaurin correction at a moderate `N`.
pub fn stieltjes_gamma_limit(k: u32) -> Result<f64> {
    check_index(k)?;
    let n = if k == 0 { 100 } else { (60 / (k + 1)).max(6) };
    let j_max = 12;
    let kk = k as usize;

    let mut sum = 0.0;
    let mut comp = 0.0;
    for i in 2..=n {
        let x = f64::from(i);
        let term = x.ln().powi(k as i32) / x;
        let t = sum + term;
        comp += if sum.abs() >= term.abs() { (sum - t) + term } else { (term - t) + sum };
        sum = t;
    }
    if k == 0 {
        sum += 1.0;
    }
    let x = f64::from(n);
    let lx = x.ln();
    let g_n = lx.powi(k as i32) / x;
    let mut total = sum + comp - lx.powi(k as i32 + 1) / f64::from(k + 1) - 0.5 * g_n;

    // g^{(m)}(x) = x^{-1-m} Σ_i p_i ln^i x
    let mut p = vec![0.0; kk + 1];
    p[kk] = 1.0;
    let mut m = 0usize;
    let eval = |p: &[f64], m: usize| -> f64 {
        let poly = p.iter().rev().fold(0.0, |acc, &c| acc * lx + c);
        poly * x.powi(-1 - m as i32)
    };
    for j in 1..=j_max {
        while m < 2 * j - 1 {
            let mf = m as f64;
            let next: Vec<f64> = (0..=kk)
                .map(|i| -(1.0 + mf) * p[i] + if i < kk { (i + 1) as f64 * p[i + 1] } else { 0.0 })
                .collect();
            p = next;
            m += 1;
        }
        total -= BERNOULLI_OVER_FACTORIAL[j - 1] * eval(&p, m);
    }
    Ok(total)
}
