//! Small finite fields GF(p^e), q <= 1024, and polynomials of bounded degree.
//!
//! Elements are the integers `0..q`; for `e > 1` the base-`p` digits of an
//! element are its coefficients over GF(p) (digit `i` is the coefficient of
//! `x^i`), reduced modulo the lexicographically smallest monic irreducible
//! polynomial of degree `e`. Multiplication goes through log/exp tables.

use crate::error::{Error, Factorization, Result};

pub const MAX_ORDER: u32 = 1024;

#[derive(Clone, Debug)]
pub struct Field {
    q: u32,
    p: u32,
    e: u32,
    /// Reduction polynomial coefficients, lowest degree first (monic, length e+1).
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.modulus == other.modulus
    }
}

impl Eq for Field {}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `Some((p, e))` when `q = p^e` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    match factorize(q).as_slice() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

// Polynomials over GF(p) as coefficient vectors, lowest degree first.
fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    // p prime, a != 0
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut k = p as u64 - 2;
    while k > 0 {
        if k & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        k >>= 1;
    }
    r as u32
}

fn digits(mut v: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    // trial division by every monic polynomial of degree 1..=deg/2
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut f = digits(low as u32, p, d as u32);
            f.push(1);
            if poly_rem(m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// GF(q) for a prime power `q <= 1024`.
    pub fn new(q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParameter(format!("field order {q} must be at least 2")));
        }
        if q > MAX_ORDER {
            return Err(Error::InvalidParameter(format!("field order {q} exceeds {MAX_ORDER}")));
        }
        let (p, e) = prime_power(q as u64)
            .ok_or_else(|| Error::NotPrimePower { q: q as u64, factors: Factorization(factorize(q as u64)) })?;
        let p = p as u32;
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            (0..q)
                .map(|low| {
                    let mut m = digits(low, p, e);
                    m.push(1);
                    m
                })
                .find(|m| is_irreducible(m, p))
                .expect("an irreducible polynomial exists for every degree")
        };
        let mut f = Field { q, p, e, modulus, exp: Vec::new(), log: Vec::new() };
        f.build_tables();
        Ok(f)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let (p, e) = (self.p, self.e as usize);
        let da = digits(a, p, self.e);
        let db = digits(b, p, self.e);
        let mut prod = vec![0u32; 2 * e - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let mut r = poly_rem(&prod, &self.modulus, p);
        r.resize(e, 0);
        undigits(&r, p)
    }

    fn build_tables(&mut self) {
        let q = self.q;
        let order = q - 1;
        let generator = (2..q)
            .chain(std::iter::once(1))
            .find(|&g| {
                let mut x = 1;
                for k in 1..=order {
                    x = self.slow_mul(x, g);
                    if x == 1 {
                        return k == order;
                    }
                }
                false
            })
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1;
        for k in 0..order {
            exp[k as usize] = x;
            exp[(k + order) as usize] = x;
            log[x as usize] = k;
            x = self.slow_mul(x, generator);
        }
        self.exp = exp;
        self.log = log;
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    /// Reduction polynomial, lowest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut r, mut place) = (a, b, 0, 1);
        while a > 0 || b > 0 {
            r += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        r
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.e == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let d: Vec<u32> = digits(a, self.p, self.e).into_iter().map(|x| (self.p - x) % self.p).collect();
        undigits(&d, self.p)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 || a >= self.q {
            return None;
        }
        let order = self.q - 1;
        Some(self.exp[((order - self.log[a as usize]) % order) as usize])
    }
}

/// A polynomial with coefficients lowest degree first, zero-padded to `k + 1` terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn new(coeffs: Vec<u32>) -> Self {
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Degree bound `k` (number of coefficients minus one).
    pub fn degree_bound(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Horner evaluation at `x`.
    pub fn eval(&self, f: &Field, x: u32) -> u32 {
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }
}

/// Number of polynomials of degree at most `k` over GF(q), i.e. `q^(k+1)`.
pub fn poly_count(q: u32, k: usize) -> Result<usize> {
    let exp = u32::try_from(k + 1).map_err(|_| Error::Overflow(format!("degree bound {k}")))?;
    (q as usize).checked_pow(exp).ok_or_else(|| Error::Overflow(format!("{q}^{}", k + 1)))
}

/// Largest polynomial space materialized by [`enum_polys`].
pub const MAX_POLYS: usize = 1 << 24;

/// The `i`-th polynomial in enumeration order: coefficients are the base-q
/// digits of `i`, constant term least significant.
pub fn poly_at(f: &Field, k: usize, mut i: usize) -> Poly {
    let q = f.order() as usize;
    let coeffs = (0..=k)
        .map(|_| {
            let c = (i % q) as u32;
            i /= q;
            c
        })
        .collect();
    Poly { coeffs }
}

/// All `q^(k+1)` polynomials of degree at most `k`, ordered by their
/// coefficient vector read as a base-q integer (constant term least significant).
pub fn enum_polys(f: &Field, k: usize) -> Result<Vec<Poly>> {
    let n = poly_count(f.order(), k)?;
    if n > MAX_POLYS {
        return Err(Error::Overflow(format!("{n} polynomials exceeds {MAX_POLYS}")));
    }
    Ok((0..n).map(|i| poly_at(f, k, i)).collect())
}
