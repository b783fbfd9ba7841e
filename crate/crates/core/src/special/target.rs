//! Target functions `f^{(k)}` and their evaluation.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::contour::contour_derivative;
use super::hurwitz::{hurwitz_any, EvalAccuracy};
use super::lfunc::{dedekind_with, dirichlet_l, dirichlet_remainder};
use crate::characters::{character, character_from_discriminant, CharacterTable};
use crate::error::{Error, Result};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// The underlying (undifferentiated) function.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    RiemannZeta,
    HurwitzZeta { a: f64 },
    DirichletL { chi: CharacterTable },
    DedekindQuadratic { d: i64, chi: CharacterTable },
    ConstantTest { c: Complex64 },
}

impl Family {
    pub fn hurwitz(a: f64) -> Result<Self> {
        if !(a > 0.0 && a <= 1.0) {
            return Err(Error::InvalidParameter(format!("Hurwitz parameter must lie in (0, 1], got {a}")));
        }
        Ok(Family::HurwitzZeta { a })
    }

    pub fn dirichlet(q: u64, index: usize) -> Result<Self> {
        Ok(Family::DirichletL { chi: character(q, index)? })
    }

    pub fn dedekind(d: i64) -> Result<Self> {
        Ok(Family::DedekindQuadratic { d, chi: character_from_discriminant(d)? })
    }

    /// Location of the (simple) pole, if any.
    pub fn pole(&self) -> Option<Complex64> {
        match self {
            Family::RiemannZeta | Family::HurwitzZeta { .. } | Family::DedekindQuadratic { .. } => Some(ONE),
            Family::DirichletL { chi } if chi.is_principal() => Some(ONE),
            _ => None,
        }
    }

    /// True when the Dirichlet coefficients are real.
    pub fn has_real_coefficients(&self) -> bool {
        match self {
            Family::DirichletL { chi } => chi.is_real(),
            Family::ConstantTest { c } => c.im == 0.0,
            _ => true,
        }
    }

    pub fn eval(&self, w: Complex64, acc: &EvalAccuracy) -> Result<Complex64> {
        match self {
            Family::RiemannZeta => hurwitz_any(w, 1.0, acc),
            Family::HurwitzZeta { a } => hurwitz_any(w, *a, acc),
            Family::DirichletL { chi } => dirichlet_l(w, chi, acc),
            Family::DedekindQuadratic { chi, .. } => dedekind_with(w, chi, acc),
            Family::ConstantTest { c } => Ok(*c),
        }
    }

    /// Leading Dirichlet term `coef * base^{-w}`; every family has exactly one.
    pub fn head(&self) -> (Complex64, f64) {
        match self {
            Family::HurwitzZeta { a } => (ONE, *a),
            Family::ConstantTest { c } => (*c, 1.0),
            _ => (ONE, 1.0),
        }
    }

    /// `f(w)` minus the head term.
    pub fn remainder(&self, w: Complex64, acc: &EvalAccuracy) -> Result<Complex64> {
        match self {
            Family::RiemannZeta => hurwitz_any(w, 2.0, acc),
            Family::HurwitzZeta { a } => hurwitz_any(w, a + 1.0, acc),
            Family::DirichletL { chi } => dirichlet_remainder(w, chi, acc),
            Family::DedekindQuadratic { chi, .. } => {
                let gz = hurwitz_any(w, 2.0, acc)?;
                let gl = dirichlet_remainder(w, chi, acc)?;
                Ok(gz * gl + gz + gl)
            }
            Family::ConstantTest { .. } => Ok(ZERO),
        }
    }

    /// Smallest base `b` among the terms of the remainder, which decays like `b^{-Re w}`.
    pub fn remainder_base(&self) -> Option<f64> {
        match self {
            Family::HurwitzZeta { a } => Some(a + 1.0),
            Family::ConstantTest { .. } => None,
            _ => Some(2.0),
        }
    }

    fn c_abscissa(&self) -> f64 {
        match self {
            Family::DedekindQuadratic { .. } => 0.0,
            Family::ConstantTest { .. } => f64::NEG_INFINITY,
            _ => -0.5,
        }
    }
}

/// A pole `s0` of order `order`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub s0: Complex64,
    pub order: u32,
}

/// `f^{(k)}` for a family `f`. Serialized as its spec string, e.g. `"zeta:k=1"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct TargetFunction {
    family: Family,
    k: u32,
}

impl TargetFunction {
    pub fn new(family: Family, k: u32) -> Self {
        Self { family, k }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Left edge `c` of the half-plane where the mean-value identity holds.
    pub fn c_abscissa(&self) -> f64 {
        self.family.c_abscissa()
    }

    pub fn pole(&self) -> Option<Pole> {
        self.family.pole().map(|s0| Pole { s0, order: self.k + 1 })
    }

    /// `f^{(k)}(w)` with no domain check.
    pub fn value(&self, w: Complex64, acc: &EvalAccuracy) -> Result<Complex64> {
        match (&self.family, self.k) {
            (_, 0) => self.family.eval(w, acc),
            (Family::ConstantTest { .. }, _) => Ok(ZERO),
            (family, k) => contour_derivative(|z| family.eval(z, acc), k, w, family.pole(), acc),
        }
    }

    /// k-th derivative of the head term.
    pub fn head_value(&self, w: Complex64) -> Complex64 {
        let (coef, base) = self.family.head();
        if base == 1.0 {
            return if self.k == 0 { coef } else { ZERO };
        }
        let lb = base.ln();
        coef * (-lb).powi(self.k as i32) * super::hurwitz::pow_neg(lb, w)
    }

    /// k-th derivative of the remainder.
    pub fn remainder_value(&self, w: Complex64, acc: &EvalAccuracy) -> Result<Complex64> {
        match (&self.family, self.k) {
            (Family::ConstantTest { .. }, _) => Ok(ZERO),
            (family, 0) => family.remainder(w, acc),
            (family, k) => contour_derivative(|z| family.remainder(z, acc), k, w, family.pole(), acc),
        }
    }

    /// Short textual form accepted by [`FromStr`].
    pub fn spec(&self) -> String {
        let k = self.k;
        match &self.family {
            Family::RiemannZeta => format!("zeta:k={k}"),
            Family::HurwitzZeta { a } => format!("hurwitz:a={a},k={k}"),
            Family::DirichletL { chi } => format!("L:q={},index={},k={k}", chi.modulus(), chi.index()),
            Family::DedekindQuadratic { d, .. } => format!("dedekind:d={d},k={k}"),
            Family::ConstantTest { c } if k == 0 => format!("const:c={}", format_complex(*c)),
            Family::ConstantTest { c } => format!("const:c={},k={k}", format_complex(*c)),
        }
    }
}

/// `f^{(k)}(s)` for `s` in the half-plane `Re(s) > c`, away from the pole.
pub fn evaluate_target(target: &TargetFunction, s: Complex64, acc: &EvalAccuracy) -> Result<Complex64> {
    let c = target.c_abscissa();
    if !(s.re > c) {
        return Err(Error::DomainViolation { s, c });
    }
    if let Some(p) = target.pole() {
        if s == p.s0 {
            return Err(Error::PoleAt(p.s0));
        }
    }
    target.value(s, acc)
}

/// Convexity exponent `ν(σ)` with `f^{(k)}(σ+it) ≪ |t|^{ν(σ)+ε}`.
pub fn growth_exponent(target: &TargetFunction, sigma: f64) -> Result<f64> {
    let c = target.c_abscissa();
    if !(sigma > c) {
        return Err(Error::DomainViolation { s: Complex64::new(sigma, 0.0), c });
    }
    let single = if sigma > 1.0 {
        0.0
    } else if sigma >= 0.0 {
        (1.0 - sigma) / 2.0
    } else {
        0.5 - sigma
    };
    Ok(match target.family() {
        Family::ConstantTest { .. } => 0.0,
        Family::DedekindQuadratic { .. } => 2.0 * single,
        _ => single,
    })
}

fn format_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else if c.im < 0.0 {
        format!("{}-{}i", c.re, -c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

fn parse_real(v: &str) -> Option<f64> {
    match v.split_once('/') {
        Some((n, d)) => {
            let (n, d) = (n.trim().parse::<f64>().ok()?, d.trim().parse::<f64>().ok()?);
            (d != 0.0).then(|| n / d)
        }
        None => v.trim().parse().ok(),
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (also `re,im` handled by callers).
pub fn parse_complex(v: &str) -> Option<Complex64> {
    let v = v.trim();
    if let Some(body) = v.strip_suffix('i') {
        // split at the last sign that is not an exponent sign or the leading sign
        let bytes = body.as_bytes();
        let split = (1..bytes.len()).rev().find(|&i| {
            (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E')
        });
        let (re, im) = match split {
            Some(i) => (parse_real(&body[..i])?, &body[i..]),
            None => (0.0, body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            x => parse_real(x)?,
        };
        return Some(Complex64::new(re, im));
    }
    parse_real(v).map(|re| Complex64::new(re, 0.0))
}

impl FromStr for TargetFunction {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let fail = |reason: &str| Error::TargetSpec { spec: spec.to_string(), reason: reason.to_string() };
        let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let mut k = 0u32;
        let (mut a, mut q, mut index, mut d, mut c) = (None, None, None, None, None);
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, val) = item.split_once('=').ok_or_else(|| fail("expected key=value"))?;
            let val = val.trim();
            match key.trim() {
                "k" => k = val.parse().map_err(|_| fail("k must be a nonnegative integer"))?,
                "a" => a = Some(parse_real(val).ok_or_else(|| fail("bad value for a"))?),
                "q" => q = Some(val.parse::<u64>().map_err(|_| fail("bad value for q"))?),
                "index" => index = Some(val.parse::<usize>().map_err(|_| fail("bad value for index"))?),
                "d" => d = Some(val.parse::<i64>().map_err(|_| fail("bad value for d"))?),
                "c" => c = Some(parse_complex(val).ok_or_else(|| fail("bad value for c"))?),
                other => return Err(fail(&format!("unknown key {other:?}"))),
            }
        }
        let family = match name.trim().to_ascii_lowercase().as_str() {
            "zeta" => Family::RiemannZeta,
            "hurwitz" => Family::hurwitz(a.ok_or_else(|| fail("hurwitz needs a"))?)?,
            "l" => match (q, d) {
                (_, Some(d)) => Family::DirichletL { chi: character_from_discriminant(d)? },
                (Some(q), None) => Family::dirichlet(q, index.unwrap_or(0))?,
                _ => return Err(fail("L needs q (with optional index) or d")),
            },
            "dedekind" => Family::dedekind(d.ok_or_else(|| fail("dedekind needs d"))?)?,
            "const" => Family::ConstantTest { c: c.ok_or_else(|| fail("const needs c"))? },
            _ => return Err(fail("unknown family")),
        };
        Ok(TargetFunction::new(family, k))
    }
}

impl fmt::Display for TargetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

impl From<TargetFunction> for String {
    fn from(t: TargetFunction) -> String {
        t.spec()
    }
}

impl TryFrom<String> for TargetFunction {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::principal_character;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn acc() -> EvalAccuracy {
        EvalAccuracy::default()
    }

    #[test]
    fn dispatch_examples() {
        let z = TargetFunction::new(Family::RiemannZeta, 0);
        let v = evaluate_target(&z, c(2.0, 0.0), &acc()).unwrap();
        assert!((v - 1.644_934_066_848_226_4).norm() < 1e-13);

        let t = TargetFunction::new(Family::ConstantTest { c: c(5.0, 0.0) }, 0);
        assert_eq!(evaluate_target(&t, c(-3.0, 7.0), &acc()).unwrap(), c(5.0, 0.0));
        let t = TargetFunction::new(Family::ConstantTest { c: c(5.0, 0.0) }, 2);
        assert_eq!(evaluate_target(&t, c(-3.0, 7.0), &acc()).unwrap(), ZERO);

        assert!(matches!(evaluate_target(&z, c(-0.5, 0.0), &acc()), Err(Error::DomainViolation { .. })));
        assert_eq!(evaluate_target(&z, ONE, &acc()), Err(Error::PoleAt(ONE)));
    }

    #[test]
    fn principal_l_derivative_product_rule() {
        // d/ds[(1 - 3^{-s}) ζ(s)] = ln3 3^{-s} ζ(s) + (1 - 3^{-s}) ζ'(s)
        let t = TargetFunction::new(Family::DirichletL { chi: principal_character(3).unwrap() }, 1);
        let v = evaluate_target(&t, c(2.0, 0.0), &acc()).unwrap();
        let z2 = 1.644_934_066_848_226_4;
        let dz2 = -0.937_548_254_315_843_8;
        let expect = 3f64.ln() / 9.0 * z2 + (1.0 - 1.0 / 9.0) * dz2;
        assert!((v - expect).norm() < 1e-11);
    }

    #[test]
    fn derivatives_vs_finite_differences() {
        let s = c(2.0, 1.0);
        let h = 1e-4;
        let families = [
            Family::RiemannZeta,
            Family::hurwitz(1.0 / 3.0).unwrap(),
            Family::dirichlet(5, 1).unwrap(),
            Family::dedekind(-4).unwrap(),
        ];
        for fam in families {
            for k in 1..=3 {
                let d = TargetFunction::new(fam.clone(), k).value(s, &acc()).unwrap();
                let lower = TargetFunction::new(fam.clone(), k - 1);
                let fp = lower.value(s + h, &acc()).unwrap();
                let fm = lower.value(s - h, &acc()).unwrap();
                let fd = (fp - fm) / (2.0 * h);
                assert!((d - fd).norm() <= 1e-6 * d.norm(), "{fam:?} k={k}");
            }
        }
    }

    #[test]
    fn head_plus_remainder() {
        let families = [
            Family::RiemannZeta,
            Family::hurwitz(0.5).unwrap(),
            Family::dirichlet(4, 1).unwrap(),
            Family::dirichlet(3, 0).unwrap(),
            Family::dedekind(5).unwrap(),
            Family::ConstantTest { c: c(1.0, 2.0) },
        ];
        let w = c(0.7, 3.0);
        for fam in families {
            for k in 0..=2 {
                let t = TargetFunction::new(fam.clone(), k);
                let whole = t.value(w, &acc()).unwrap();
                let parts = t.head_value(w) + t.remainder_value(w, &acc()).unwrap();
                assert!((whole - parts).norm() < 1e-10, "{t}");
            }
        }
    }

    #[test]
    fn growth_examples() {
        let z = TargetFunction::new(Family::RiemannZeta, 0);
        assert_eq!(growth_exponent(&z, 2.0).unwrap(), 0.0);
        assert_eq!(growth_exponent(&z, 0.5).unwrap(), 0.25);
        assert_eq!(growth_exponent(&z, -0.25).unwrap(), 0.75);
        let d = TargetFunction::new(Family::dedekind(-4).unwrap(), 0);
        assert_eq!(growth_exponent(&d, 0.5).unwrap(), 0.5);
        assert!(growth_exponent(&d, -0.1).is_err());
    }

    #[test]
    fn spec_round_trip() {
        for spec in ["zeta:k=1", "hurwitz:a=1/3,k=0", "L:q=4,index=1,k=0", "dedekind:d=-4,k=0", "const:c=1", "L:d=-4,k=2", "const:c=1.5-2i"] {
            let t: TargetFunction = spec.parse().unwrap();
            let again: TargetFunction = t.spec().parse().unwrap();
            assert_eq!(t, again, "{spec}");
        }
        let t: TargetFunction = "L:d=-4".parse().unwrap();
        assert_eq!(t.spec(), "L:q=4,index=1,k=0");
        let t: TargetFunction = "const:c=-2i".parse().unwrap();
        assert_eq!(t.family(), &Family::ConstantTest { c: c(0.0, -2.0) });
        assert!("zeta:k=x".parse::<TargetFunction>().is_err());
        assert!("foo".parse::<TargetFunction>().is_err());
        assert!("hurwitz:a=2".parse::<TargetFunction>().is_err());
        let json = serde_json::to_string(&TargetFunction::new(Family::RiemannZeta, 3)).unwrap();
        assert_eq!(json, "\"zeta:k=3\"");
    }

    #[test]
    fn poles_and_abscissae() {
        let z = TargetFunction::new(Family::RiemannZeta, 2);
        assert_eq!(z.pole(), Some(Pole { s0: ONE, order: 3 }));
        assert_eq!(z.c_abscissa(), -0.5);
        let l = TargetFunction::new(Family::dirichlet(5, 2).unwrap(), 0);
        assert_eq!(l.pole(), None);
        let d = TargetFunction::new(Family::dedekind(5).unwrap(), 1);
        assert_eq!(d.c_abscissa(), 0.0);
        assert_eq!(d.pole().unwrap().order, 2);
    }
}
