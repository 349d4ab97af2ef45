//! Finite fields GF(p^w) used for randomized evaluation.
//!
//! Elements are packed into a `u64`: bits for p = 2, base-p digits otherwise.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Modulus for GF(2^32): x^32 + x^22 + x^2 + x + 1.
pub const GF2_32_MODULUS: u64 = (1 << 32) | (1 << 22) | (1 << 2) | (1 << 1) | 1;

/// Characteristic and extension degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub p: u32,
    pub w: u32,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig { p: 2, w: 32 }
    }
}

impl FieldConfig {
    pub fn new(p: u32, w: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if w == 0 {
            return Err(Error::BadField("extension degree must be at least 1".into()));
        }
        let bits = (p as f64).log2() * w as f64;
        if bits >= 62.0 {
            return Err(Error::BadField(format!("{p}^{w} does not fit in 62 bits")));
        }
        Ok(FieldConfig { p, w })
    }

    /// Prime `p` with the default extension degree (32 for p = 2, else the
    /// smallest w with p^w >= 2^32).
    pub fn with_char(p: u32) -> Result<Self> {
        if p == 2 {
            return Self::new(2, 32);
        }
        let mut w = 1;
        while (p as f64).powi(w as i32) < 4294967296.0 {
            w += 1;
        }
        Self::new(p, w)
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[inline]
pub(crate) fn mulmod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub(crate) fn powmod(mut a: u32, mut e: u64, p: u32) -> u32 {
    let mut r = 1u32 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn invmod(a: u32, p: u32) -> u32 {
    assert!(!a.is_multiple_of(p), "inverse of zero");
    powmod(a, p as u64 - 2, p)
}

/// An extension field GF(p^w).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    p: u32,
    w: u32,
    /// Monic modulus, coefficients low to high, length w + 1.
    modulus: Vec<u32>,
    bin_mod: u64,
}

impl ExtField {
    pub fn new(cfg: FieldConfig) -> Result<Self> {
        let FieldConfig { p, w } = FieldConfig::new(cfg.p, cfg.w)?;
        let modulus = if p == 2 && w == 32 {
            (0..=32).map(|i| ((GF2_32_MODULUS >> i) & 1) as u32).collect()
        } else {
            smallest_irreducible(p, w)
        };
        let bin_mod = if p == 2 {
            modulus.iter().enumerate().fold(0u64, |acc, (i, &c)| acc | ((c as u64) << i))
        } else {
            0
        };
        Ok(ExtField { p, w, modulus, bin_mod })
    }

    pub fn config(&self) -> FieldConfig {
        FieldConfig { p: self.p, w: self.w }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.w
    }

    /// Approximate field size as f64.
    pub fn size(&self) -> f64 {
        (self.p as f64).powi(self.w as i32)
    }

    /// The modulus as text, e.g. `x^32 + x^22 + x^2 + x + 1`.
    pub fn modulus_string(&self) -> String {
        let mut parts = Vec::new();
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coeff = if c == 1 || i == 0 { if i == 0 { c.to_string() } else { String::new() } } else { format!("{c}*") };
            let var = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            parts.push(format!("{coeff}{var}"));
        }
        parts.join(" + ")
    }

    /// Embeds a prime-field element.
    #[inline]
    pub fn from_prime(&self, c: u32) -> u64 {
        (c % self.p) as u64
    }

    /// Maps an arbitrary u64 onto a field element (uniform for p = 2).
    pub fn from_bits(&self, r: u64) -> u64 {
        if self.p == 2 {
            r & ((1u64 << self.w) - 1)
        } else {
            r % (self.p as u64).pow(self.w)
        }
    }

    fn digits(&self, mut a: u64) -> Vec<u32> {
        let mut d = vec![0u32; self.w as usize];
        for x in d.iter_mut() {
            *x = (a % self.p as u64) as u32;
            a /= self.p as u64;
        }
        d
    }

    fn pack(&self, d: &[u32]) -> u64 {
        d.iter().rev().fold(0u64, |acc, &x| acc * self.p as u64 + x as u64)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return a ^ b;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % self.p).collect();
        self.pack(&s)
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if self.p == 2 {
            return a;
        }
        let d: Vec<u32> = self.digits(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.pack(&d)
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return self.mul_bin(a, b);
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let w = self.w as usize;
        let mut prod = vec![0u64; 2 * w];
        for i in 0..w {
            if da[i] == 0 {
                continue;
            }
            for j in 0..w {
                prod[i + j] += da[i] as u64 * db[j] as u64;
            }
        }
        let p = self.p as u64;
        let mut prod: Vec<u64> = prod.into_iter().map(|x| x % p).collect();
        for k in (w..2 * w).rev() {
            let c = prod[k] % p;
            if c == 0 {
                continue;
            }
            for i in 0..w {
                let sub = c * self.modulus[i] as u64 % p;
                prod[k - w + i] = (prod[k - w + i] + p - sub) % p;
            }
            prod[k] = 0;
        }
        let out: Vec<u32> = prod[..w].iter().map(|&x| x as u32).collect();
        self.pack(&out)
    }

    #[inline]
    fn mul_bin(&self, a: u64, b: u64) -> u64 {
        let mut r: u128 = 0;
        let a = a as u128;
        let mut b = b;
        let mut i = 0;
        while b != 0 {
            if b & 1 == 1 {
                r ^= a << i;
            }
            b >>= 1;
            i += 1;
        }
        let w = self.w;
        let m = self.bin_mod as u128;
        let mut deg = 127 - r.leading_zeros() as i32;
        while r != 0 && deg >= w as i32 {
            r ^= m << (deg as u32 - w);
            deg = 127 - r.leading_zeros() as i32;
        }
        r as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u128) -> u64 {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivByZero);
        }
        let q = (self.p as u128).pow(self.w);
        Ok(self.pow(a, q - 2))
    }

    pub fn display(&self, a: u64) -> String {
        if self.p == 2 {
            format!("0x{a:x}")
        } else {
            format!("{a}")
        }
    }
}

impl fmt::Display for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {}", self.p, self.w, self.modulus_string())
    }
}

// Dense polynomials over GF(p), coefficients low to high, used for the
// irreducibility search.
fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut r: Vec<u32> = prod.into_iter().map(|x| x as u32).collect();
    poly_rem(&mut r, f, p);
    r
}

fn poly_rem(r: &mut Vec<u32>, f: &[u32], p: u32) {
    trim(r);
    let df = f.len() - 1;
    let lead_inv = invmod(f[df], p);
    while r.len() > df {
        let k = r.len() - 1;
        let c = mulmod(r[k], lead_inv, p);
        for i in 0..=df {
            let s = mulmod(c, f[i], p);
            r[k - df + i] = (r[k - df + i] + p - s) % p;
        }
        trim(r);
    }
}

fn poly_gcd(mut a: Vec<u32>, mut b: Vec<u32>, p: u32) -> Vec<u32> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        poly_rem(&mut a, &b, p);
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// x^(p^k) mod f.
fn frobenius_power(f: &[u32], p: u32, k: u32) -> Vec<u32> {
    let mut x = vec![0, 1];
    poly_rem(&mut x, f, p);
    for _ in 0..k {
        // raise to the p-th power by repeated squaring
        let mut result = vec![1u32];
        let mut base = x.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                result = poly_mulmod(&result, &base, f, p);
            }
            base = poly_mulmod(&base, &base, f, p);
            e >>= 1;
        }
        x = result;
    }
    x
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic polynomial over GF(p).
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let w = (f.len() - 1) as u32;
    if w == 0 {
        return false;
    }
    let x = {
        let mut x = vec![0, 1];
        poly_rem(&mut x, f, p);
        x
    };
    for q in prime_factors(w) {
        let mut h = frobenius_power(f, p, w / q);
        // h - x
        h.resize(h.len().max(2), 0);
        for (i, &c) in x.iter().enumerate() {
            h[i] = (h[i] + p - c) % p;
        }
        let g = poly_gcd(f.to_vec(), h, p);
        if g.len() != 1 {
            return false;
        }
    }
    let mut h = frobenius_power(f, p, w);
    trim(&mut h);
    let mut xx = x;
    trim(&mut xx);
    h == xx
}

/// Smallest monic irreducible of degree w over GF(p), ordering by the
/// base-p value of the lower coefficients.
fn smallest_irreducible(p: u32, w: u32) -> Vec<u32> {
    let mut counter: u64 = 1;
    loop {
        let mut f = Vec::with_capacity(w as usize + 1);
        let mut c = counter;
        for _ in 0..w {
            f.push((c % p as u64) as u32);
            c /= p as u64;
        }
        f.push(1);
        if f[0] != 0 && is_irreducible(&f, p) {
            return f;
        }
        counter += 1;
    }
}
