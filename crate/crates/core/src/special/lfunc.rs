//! Dirichlet L-functions and quadratic Dedekind zeta via Hurwitz decomposition.

use num_complex::Complex64;

use super::hurwitz::{expm1_over, hurwitz_any, hurwitz_regular, pow_neg, EvalAccuracy, Estimate};
use crate::characters::{character_from_discriminant, CharacterTable};
use crate::error::{Error, Result};

/// `L(s, χ) = regular + residue / (s - 1)`; the residue is zero unless χ is principal.
pub(crate) fn dirichlet_split(
    s: Complex64,
    chi: &CharacterTable,
    acc: &EvalAccuracy,
) -> Result<(Estimate, Complex64)> {
    let q = chi.modulus();
    let qf = q as f64;
    let lq = qf.ln();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut char_sum = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut rounding = 0.0;
    for a in 1..=q {
        if chi.value(a).is_none() {
            continue;
        }
        let v = chi.eval(a);
        let r = hurwitz_regular(s, a as f64 / qf, acc)?;
        sum += v * r.value;
        char_sum += v;
        err += r.error;
        rounding += r.rounding;
    }
    let q_s = pow_neg(lq, s);
    let residue = char_sum / qf;
    let one = Complex64::new(1.0, 0.0);
    // S q^{-s}/(s-1) = (S/q)/(s-1) + (S/q)(q^{1-s} - 1)/(s-1)
    let regular = q_s * sum - residue * lq * expm1_over((one - s) * lq);
    let scale = q_s.norm();
    Ok((Estimate { value: regular, error: err * scale, rounding: rounding * scale }, residue))
}

/// Dirichlet L-function `L(s, χ)`.
pub fn dirichlet_l(s: Complex64, chi: &CharacterTable, acc: &EvalAccuracy) -> Result<Complex64> {
    let (regular, residue) = dirichlet_split(s, chi, acc)?;
    if residue == Complex64::new(0.0, 0.0) {
        return Ok(regular.value);
    }
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::PoleAt1);
    }
    Ok(regular.value + residue / (s - 1.0))
}

/// `L(s, χ) - 1`, summed from `n = 2`.
pub(crate) fn dirichlet_remainder(
    s: Complex64,
    chi: &CharacterTable,
    acc: &EvalAccuracy,
) -> Result<Complex64> {
    let q = chi.modulus();
    let qf = q as f64;
    let mut sum = hurwitz_any(s, 1.0 + 1.0 / qf, acc)?;
    for a in 2..=q {
        if chi.value(a).is_some() {
            sum += chi.eval(a) * hurwitz_any(s, a as f64 / qf, acc)?;
        }
    }
    Ok(pow_neg(qf.ln(), s) * sum)
}

/// `ζ_K(s) = ζ(s) L(s, χ_d)` with the character already built.
pub(crate) fn dedekind_with(s: Complex64, chi: &CharacterTable, acc: &EvalAccuracy) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::PoleAt1);
    }
    let z = hurwitz_any(s, 1.0, acc)?;
    Ok(z * dirichlet_l(s, chi, acc)?)
}

/// Dedekind zeta of the quadratic field of fundamental discriminant `d`.
pub fn dedekind_quadratic(s: Complex64, d: i64, acc: &EvalAccuracy) -> Result<Complex64> {
    let chi = character_from_discriminant(d)?;
    dedekind_with(s, &chi, acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{character, enumerate_characters, principal_character};
    use crate::special::riemann_zeta;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn acc() -> EvalAccuracy {
        EvalAccuracy::default()
    }

    const CATALAN: f64 = 0.915_965_594_177_219_015;
    const ZETA2: f64 = 1.644_934_066_848_226_436;

    #[test]
    fn l_examples() {
        let chi = character_from_discriminant(-4).unwrap();
        let v = dirichlet_l(c(1.0, 0.0), &chi, &acc()).unwrap();
        assert!((v - PI / 4.0).norm() < 1e-12);
        let v = dirichlet_l(c(2.0, 0.0), &chi, &acc()).unwrap();
        assert!((v - CATALAN).norm() < 1e-12);

        let one = principal_character(1).unwrap();
        let v = dirichlet_l(c(2.0, 0.0), &one, &acc()).unwrap();
        assert!((v - ZETA2).norm() < 1e-13);

        let two = principal_character(2).unwrap();
        let v = dirichlet_l(c(2.0, 0.0), &two, &acc()).unwrap();
        assert!((v - PI * PI / 8.0).norm() < 1e-12);
        assert_eq!(dirichlet_l(c(1.0, 0.0), &two, &acc()), Err(Error::PoleAt1));
    }

    #[test]
    fn dedekind_examples() {
        let v = dedekind_quadratic(c(2.0, 0.0), -4, &acc()).unwrap();
        assert!((v - ZETA2 * CATALAN).norm() < 1e-12);
        assert!((v.re - 1.506_703_009_9).abs() < 1e-10);
        // mpmath: zeta(3) * L(3, chi_5)
        let v = dedekind_quadratic(c(3.0, 0.0), 5, &acc()).unwrap();
        assert!((v.re - 1.202_056_903_159_594_3 * 0.854_824_766_648_543_0).abs() < 1e-12);
        let a = dedekind_quadratic(c(2.0, 1.0), 5, &acc()).unwrap();
        let b = dedekind_quadratic(c(2.0, -1.0), 5, &acc()).unwrap();
        assert!((a.conj() - b).norm() < 1e-13);
        assert!(matches!(dedekind_quadratic(c(2.0, 0.0), 3, &acc()), Err(Error::NotFundamentalDiscriminant { .. })));
        assert_eq!(dedekind_quadratic(c(1.0, 0.0), -4, &acc()), Err(Error::PoleAt1));
    }

    #[test]
    fn principal_euler_factors() {
        for q in [2u64, 3, 4, 6] {
            let chi = principal_character(q).unwrap();
            for s in [c(2.0, 0.0), c(3.0, 1.0)] {
                let mut expect = riemann_zeta(s, &acc()).unwrap();
                for p in [2u64, 3] {
                    if q % p == 0 {
                        expect *= 1.0 - Complex64::new(p as f64, 0.0).powc(-s);
                    }
                }
                let v = dirichlet_l(s, &chi, &acc()).unwrap();
                assert!((v - expect).norm() < 1e-10, "q={q} s={s}");
            }
        }
    }

    #[test]
    fn nonprincipal_has_no_pole() {
        for chi in enumerate_characters(5).unwrap().into_iter().skip(1) {
            let at1 = dirichlet_l(c(1.0, 0.0), &chi, &acc()).unwrap();
            let near = dirichlet_l(c(1.0 + 1e-7, 0.0), &chi, &acc()).unwrap();
            assert!((at1 - near).norm() < 1e-6);
        }
    }

    #[test]
    fn remainder_matches() {
        let chi = character(5, 1).unwrap();
        let s = c(0.3, 4.0);
        let l = dirichlet_l(s, &chi, &acc()).unwrap();
        let r = dirichlet_remainder(s, &chi, &acc()).unwrap();
        assert!((l - 1.0 - r).norm() < 1e-12);
        let chi = principal_character(3).unwrap();
        let l = dirichlet_l(s, &chi, &acc()).unwrap();
        let r = dirichlet_remainder(s, &chi, &acc()).unwrap();
        assert!((l - 1.0 - r).norm() < 1e-12);
    }

    #[test]
    fn real_character_conjugate_symmetry() {
        let chi = character_from_discriminant(-3).unwrap();
        let s = c(0.5, 2.0);
        let a = dirichlet_l(s, &chi, &acc()).unwrap();
        let b = dirichlet_l(s.conj(), &chi, &acc()).unwrap();
        assert!((a.conj() - b).norm() < 1e-13);
    }
}
