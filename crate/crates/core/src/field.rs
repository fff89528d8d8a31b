//! Arithmetic in a prime field `F_p` with a runtime modulus `2 < p < 2^63`.
//!
//! [`FieldModulus`] carries the modulus together with a Barrett constant and
//! exposes raw arithmetic on canonical `u64` residues; bulk data (queries,
//! answers, the database) is stored as plain residue vectors and goes through
//! these methods. [`FieldElement`] is the typed scalar wrapper that remembers
//! its modulus and refuses to mix with elements of another field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_MODULUS: u64 = 1 << 63;

/// A prime modulus together with precomputed reduction constants.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldModulus {
    p: u64,
    bits: u32,
    // floor(2^64 / p)
    barrett: u64,
}

impl FieldModulus {
    /// Validates that `p` is a prime in `(2, 2^63)`.
    pub fn new(p: u64) -> Result<Self> {
        if p <= 2 {
            return Err(Error::InvalidModulus(p, "must exceed 2"));
        }
        if p >= MAX_MODULUS {
            return Err(Error::InvalidModulus(p, "must be below 2^63"));
        }
        if !is_prime(p) {
            return Err(Error::InvalidModulus(p, "not prime"));
        }
        let barrett = ((1u128 << 64) / p as u128) as u64;
        // p is odd and > 2, never a power of two, so ceil(log2 p) is its bit length.
        let bits = 64 - p.leading_zeros();
        Ok(Self { p, bits, barrett })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `ceil(log2 p)`.
    pub fn bit_width(&self) -> u32 {
        self.bits
    }

    /// Bytes per serialized element, `ceil(bit_width / 8)`.
    pub fn element_bytes(&self) -> usize {
        self.bits.div_ceil(8) as usize
    }

    pub fn elem(&self, value: u64) -> FieldElement {
        FieldElement {
            value: self.reduce(value),
            modulus: *self,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    /// Wraps an already-canonical residue, rejecting `value >= p`.
    pub fn canonical(&self, value: u64) -> Result<FieldElement> {
        if value >= self.p {
            return Err(Error::NonCanonical {
                value,
                modulus: self.p,
            });
        }
        Ok(FieldElement {
            value,
            modulus: *self,
        })
    }

    /// Reduces an arbitrary `u64` into `[0, p)`.
    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        let q = ((x as u128 * self.barrett as u128) >> 64) as u64;
        let r = x - q * self.p;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    #[inline]
    pub fn reduce_u128(&self, x: u128) -> u64 {
        (x % self.p as u128) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.bits <= 32 {
            self.reduce(a * b)
        } else {
            self.reduce_u128(a as u128 * b as u128)
        }
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.p - 2))
    }

    /// Dot product of two residue slices.
    pub fn dot(&self, a: &[u64], b: &[u64]) -> u64 {
        if self.bits <= 32 {
            // each product < 2^64, so any slice length fits in a u128
            let acc = a.iter().zip(b).fold(0u128, |acc, (&x, &y)| acc + (x * y) as u128);
            return self.reduce_u128(acc);
        }
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}

impl fmt::Debug for FieldModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

impl fmt::Display for FieldModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.p)
    }
}

// Serialized as the decimal string of p.
impl Serialize for FieldModulus {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.p.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldModulus {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let p: u64 = s.trim().parse().map_err(serde::de::Error::custom)?;
        FieldModulus::new(p).map_err(serde::de::Error::custom)
    }
}

/// A canonical residue tagged with its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    value: u64,
    modulus: FieldModulus,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> FieldModulus {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus.p, other.modulus.p));
        }
        Ok(())
    }

    fn with(&self, value: u64) -> Self {
        Self {
            value,
            modulus: self.modulus,
        }
    }

    pub fn try_add(self, rhs: Self) -> Result<Self> {
        self.check(&rhs)?;
        Ok(self.with(self.modulus.add(self.value, rhs.value)))
    }

    pub fn try_sub(self, rhs: Self) -> Result<Self> {
        self.check(&rhs)?;
        Ok(self.with(self.modulus.sub(self.value, rhs.value)))
    }

    pub fn try_mul(self, rhs: Self) -> Result<Self> {
        self.check(&rhs)?;
        Ok(self.with(self.modulus.mul(self.value, rhs.value)))
    }

    pub fn inv(self) -> Result<Self> {
        Ok(self.with(self.modulus.inv(self.value)?))
    }

    /// Square-and-multiply; `0^0 = 1`.
    pub fn pow(self, e: u64) -> Self {
        self.with(self.modulus.pow(self.value, e))
    }
}

// Serialized as the bare residue; the modulus travels separately.
impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.value)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// The operator impls panic on a modulus mismatch; use the `try_*` forms
// when operands may come from different fields.
impl Add for FieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.try_add(rhs).expect("modulus mismatch")
    }
}

impl Sub for FieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.try_sub(rhs).expect("modulus mismatch")
    }
}

impl Mul for FieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(rhs).expect("modulus mismatch")
    }
}

impl Neg for FieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        self.with(self.modulus.neg(self.value))
    }
}

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn powmod_u64(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod_u64(acc, a, m);
        }
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin; the first twelve prime bases are exact for all `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
