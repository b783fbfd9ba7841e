//! Dirichlet characters modulo `q ≤ 1000` with exact root-of-unity values.
//!
//! Values are kept as reduced rational angles `num/den` (meaning
//! `e^{2πi·num/den}`) and only turned into floating point on evaluation.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_MODULUS: u64 = 1000;

/// `e^{2πi·num/den}` with `0 ≤ num < den` and `gcd(num, den) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootOfUnity {
    num: u32,
    den: u32,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { num: 0, den: 1 };

    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "root of unity needs a positive denominator");
        let num = num % den;
        let g = gcd(num, den);
        RootOfUnity { num: (num / g) as u32, den: (den / g) as u32 }
    }

    pub fn num(&self) -> u32 {
        self.num
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    pub fn mul(self, other: RootOfUnity) -> RootOfUnity {
        let den = self.den as u64 * other.den as u64;
        RootOfUnity::new(self.num as u64 * other.den as u64 + other.num as u64 * self.den as u64, den)
    }

    pub fn to_complex(self) -> Complex64 {
        match (self.num, self.den) {
            (0, _) => Complex64::new(1.0, 0.0),
            (1, 2) => Complex64::new(-1.0, 0.0),
            (1, 4) => Complex64::new(0.0, 1.0),
            (3, 4) => Complex64::new(0.0, -1.0),
            (n, d) => Complex64::from_polar(1.0, TAU * n as f64 / d as f64),
        }
    }
}

/// A Dirichlet character modulo `q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharacterTable {
    modulus: u64,
    /// Value at each residue `0..q`; `None` where `gcd(a, q) > 1`.
    values: Vec<Option<RootOfUnity>>,
    is_principal: bool,
    index: usize,
}

impl CharacterTable {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn is_principal(&self) -> bool {
        self.is_principal
    }

    pub fn values(&self) -> &[Option<RootOfUnity>] {
        &self.values
    }

    /// Exact value at `n` (reduced mod `q`); `None` means zero.
    pub fn value(&self, n: u64) -> Option<RootOfUnity> {
        self.values[(n % self.modulus) as usize]
    }

    pub fn value_at(&self, n: i64) -> Option<RootOfUnity> {
        self.values[n.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn eval(&self, n: u64) -> Complex64 {
        self.value(n).map_or(Complex64::new(0.0, 0.0), RootOfUnity::to_complex)
    }

    /// True when every value is ±1 or 0.
    pub fn is_real(&self) -> bool {
        self.values.iter().flatten().all(|v| v.den <= 2)
    }

    /// Number of residues with a nonzero value, i.e. `φ(q)`.
    pub fn unit_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }
}

impl fmt::Display for CharacterTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi_{}[{}]", self.modulus, self.index)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Prime factorization by trial division, as `(p, e)` pairs in increasing `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

fn check_modulus(q: u64) -> Result<()> {
    if q == 0 || q > MAX_MODULUS {
        Err(Error::UnsupportedModulus { q })
    } else {
        Ok(())
    }
}

fn primitive_root(pe: u64) -> u64 {
    let phi = euler_phi(pe);
    let primes: Vec<u64> = factorize(phi).into_iter().map(|(r, _)| r).collect();
    (2..pe)
        .find(|&g| gcd(g, pe) == 1 && primes.iter().all(|&r| pow_mod(g, phi / r, pe) != 1))
        .expect("odd prime powers have primitive roots")
}

// x ≡ r (mod m), x ≡ 1 (mod q/m), for coprime m and q/m.
fn crt_lift(r: u64, m: u64, q: u64) -> u64 {
    let rest = q / m;
    (0..q).find(|&x| x % m == r % m && x % rest == 1 % rest).expect("CRT solution exists")
}

/// Generators of `(ℤ/qℤ)*` with their orders; the product of orders is `φ(q)`.
///
/// Odd prime powers contribute one primitive root, `4` contributes `3`, and
/// `2^e ≥ 8` contributes the pair `−1, 5`. Each generator is lifted to be `1`
/// modulo the other prime-power factors.
pub fn unit_group_structure(q: u64) -> Result<Vec<(u64, u64)>> {
    check_modulus(q)?;
    let mut gens = Vec::new();
    for (p, e) in factorize(q) {
        let pe = p.pow(e);
        if p == 2 {
            match e {
                1 => {}
                2 => gens.push((crt_lift(3, 4, q), 2)),
                _ => {
                    gens.push((crt_lift(pe - 1, pe, q), 2));
                    gens.push((crt_lift(5, pe, q), pe / 4));
                }
            }
        } else {
            gens.push((crt_lift(primitive_root(pe), pe, q), euler_phi(pe)));
        }
    }
    Ok(gens)
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Discrete logarithms of every unit with respect to the generators.
fn discrete_logs(q: u64, gens: &[(u64, u64)]) -> Vec<Option<Vec<u64>>> {
    let mut logs = vec![None; q as usize];
    let total: u64 = gens.iter().map(|g| g.1).product();
    for idx in 0..total {
        let exps = mixed_radix(idx, gens.iter().map(|g| g.1));
        let a = gens.iter().zip(&exps).fold(1 % q, |acc, (&(g, _), &e)| acc * pow_mod(g, e, q) % q);
        logs[a as usize] = Some(exps);
    }
    logs
}

fn mixed_radix(mut idx: u64, radices: impl Iterator<Item = u64>) -> Vec<u64> {
    radices
        .map(|r| {
            let d = idx % r;
            idx /= r;
            d
        })
        .collect()
}

/// The full dual group modulo `q`, `φ(q)` characters; index 0 is principal.
pub fn enumerate_characters(q: u64) -> Result<Vec<CharacterTable>> {
    let gens = unit_group_structure(q)?;
    let logs = discrete_logs(q, &gens);
    let exponent = gens.iter().fold(1, |acc, g| lcm(acc, g.1));
    let total: u64 = gens.iter().map(|g| g.1).product();
    let tables = (0..total)
        .map(|idx| {
            let js = mixed_radix(idx, gens.iter().map(|g| g.1));
            let values = logs
                .iter()
                .map(|log| {
                    log.as_ref().map(|es| {
                        let num: u64 = gens
                            .iter()
                            .zip(js.iter().zip(es))
                            .map(|(&(_, ord), (&j, &e))| j * e % ord * (exponent / ord))
                            .sum();
                        RootOfUnity::new(num, exponent)
                    })
                })
                .collect();
            CharacterTable { modulus: q, values, is_principal: idx == 0, index: idx as usize }
        })
        .collect();
    Ok(tables)
}

pub fn principal_character(q: u64) -> Result<CharacterTable> {
    check_modulus(q)?;
    let values = (0..q).map(|a| (gcd(a, q) == 1).then_some(RootOfUnity::ONE)).collect();
    Ok(CharacterTable { modulus: q, values, is_principal: true, index: 0 })
}

pub fn character(q: u64, index: usize) -> Result<CharacterTable> {
    let all = enumerate_characters(q)?;
    let count = all.len();
    all.into_iter()
        .nth(index)
        .ok_or_else(|| Error::InvalidParameter(format!("character index {index} out of range (modulus {q} has {count})")))
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
fn jacobi(a: i64, n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut sign = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// The Kronecker symbol `(d/n)`.
pub fn kronecker_symbol(d: i64, n: u64) -> i8 {
    if n == 0 {
        return if d.abs() == 1 { 1 } else { 0 };
    }
    let twos = n.trailing_zeros();
    let odd = n >> twos;
    let two_part = if twos == 0 {
        1
    } else if d % 2 == 0 {
        0
    } else {
        match d.rem_euclid(8) {
            1 | 7 => 1,
            _ => if twos % 2 == 0 { 1 } else { -1 },
        }
    };
    two_part * jacobi(d, odd)
}

fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Discriminant of a quadratic field: `d ≡ 1 (mod 4)` squarefree, or `d = 4m`
/// with `m ≡ 2, 3 (mod 4)` squarefree. `d = 1` is excluded (it is not a quadratic field).
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// The real character `a ↦ (d/a)` modulo `|d|`.
pub fn character_from_discriminant(d: i64) -> Result<CharacterTable> {
    if !is_fundamental_discriminant(d) {
        return Err(Error::NotFundamentalDiscriminant { d });
    }
    let q = d.unsigned_abs();
    check_modulus(q)?;
    let values: Vec<Option<RootOfUnity>> = (0..q)
        .map(|a| match kronecker_symbol(d, a) {
            1 => Some(RootOfUnity::ONE),
            -1 => Some(RootOfUnity::new(1, 2)),
            _ => None,
        })
        .collect();
    let index = enumerate_characters(q)?
        .into_iter()
        .find(|c| c.values == values)
        .map(|c| c.index)
        .expect("Kronecker character is a Dirichlet character");
    Ok(CharacterTable { modulus: q, values, is_principal: false, index })
}
