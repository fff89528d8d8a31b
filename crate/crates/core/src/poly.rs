//! Dense univariate polynomials over `F_p`.
//!
//! Coefficients are stored in ascending degree with no trailing zeros, so
//! structural equality is polynomial equality. Besides ring arithmetic this
//! module provides order-1 Hermite interpolation, root finding and order-1
//! agreement counting, which together carry the univariate side of both
//! list decoders.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldModulus};

/// Fields up to this size are searched exhaustively for roots.
pub const EXHAUSTIVE_ROOT_LIMIT: u64 = 1 << 16;

const DEFAULT_ROOT_SEED: u64 = 0x5eed_0f_7007;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Polynomial {
    modulus: FieldModulus,
    coeffs: Vec<u64>,
}

/// An order-1 evaluation claim `(λ, f(λ), f'(λ))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HermiteSample {
    pub lambda: FieldElement,
    pub alpha: FieldElement,
    pub beta: FieldElement,
}

impl HermiteSample {
    pub fn new(lambda: FieldElement, alpha: FieldElement, beta: FieldElement) -> Self {
        Self {
            lambda,
            alpha,
            beta,
        }
    }

    /// Builds a sample from raw residues, reducing them mod `p`.
    pub fn from_raw(modulus: FieldModulus, lambda: u64, alpha: u64, beta: u64) -> Self {
        Self::new(modulus.elem(lambda), modulus.elem(alpha), modulus.elem(beta))
    }

    pub fn modulus(&self) -> FieldModulus {
        self.lambda.modulus()
    }
}

impl Polynomial {
    /// Reduces every coefficient and strips trailing zeros.
    pub fn new(modulus: FieldModulus, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| modulus.reduce(c)).collect();
        trim(&mut coeffs);
        Self { modulus, coeffs }
    }

    // Caller guarantees canonical residues.
    pub(crate) fn from_canonical(modulus: FieldModulus, mut coeffs: Vec<u64>) -> Self {
        trim(&mut coeffs);
        Self { modulus, coeffs }
    }

    pub fn from_elements(coeffs: &[FieldElement]) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::EmptySamples);
        };
        let modulus = first.modulus();
        let mut raw = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            if c.modulus() != modulus {
                return Err(Error::ModulusMismatch(modulus.p(), c.modulus().p()));
            }
            raw.push(c.value());
        }
        Ok(Self::from_canonical(modulus, raw))
    }

    pub fn zero(modulus: FieldModulus) -> Self {
        Self {
            modulus,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(modulus: FieldModulus, c: u64) -> Self {
        Self::new(modulus, vec![c])
    }

    /// `c · λ^e`.
    pub fn monomial(modulus: FieldModulus, c: u64, e: usize) -> Self {
        let mut coeffs = vec![0; e + 1];
        coeffs[e] = c;
        Self::new(modulus, coeffs)
    }

    pub fn modulus(&self) -> FieldModulus {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient of `λ^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.modulus.elem(self.coeffs.get(i).copied().unwrap_or(0))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` stands for the zero polynomial's degree of −∞.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// True when the degree is at most `d` (the zero polynomial always qualifies).
    pub fn degree_at_most(&self, d: usize) -> bool {
        self.coeffs.len() <= d + 1
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// Lowest `e` with a nonzero coefficient of `λ^e`; `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        self.modulus.elem(self.eval_raw(x.value()))
    }

    /// Horner evaluation on a raw residue.
    pub fn eval_raw(&self, x: u64) -> u64 {
        let m = self.modulus;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| m.add(m.mul(acc, x), c))
    }

    /// Formal derivative; the coefficient `i·c_i` is taken mod `p`.
    pub fn derivative(&self) -> Self {
        let m = self.modulus;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| m.mul(m.reduce(i as u64), c))
            .collect();
        Self::from_canonical(m, coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                m.add(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        Self::from_canonical(m, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let m = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                m.sub(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        Self::from_canonical(m, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.modulus);
        }
        let m = self.modulus;
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = m.add(out[i + j], m.mul(a, b));
            }
        }
        Self::from_canonical(m, out)
    }

    pub fn scale(&self, c: u64) -> Self {
        let m = self.modulus;
        let c = m.reduce(c);
        Self::from_canonical(m, self.coeffs.iter().map(|&a| m.mul(a, c)).collect())
    }

    /// Multiplies by `λ^e`.
    pub fn shift_up(&self, e: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; e];
        coeffs.extend_from_slice(&self.coeffs);
        Self::from_canonical(self.modulus, coeffs)
    }

    /// Divides by `λ^e`, discarding lower terms.
    pub fn shift_down(&self, e: usize) -> Self {
        Self::from_canonical(
            self.modulus,
            self.coeffs.get(e..).map(<[u64]>::to_vec).unwrap_or_default(),
        )
    }

    /// Scales to a monic polynomial.
    pub fn monic(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let inv = self.modulus.inv(self.leading())?;
        Ok(self.scale(inv))
    }

    /// Euclidean division `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = self.modulus;
        let dlen = divisor.coeffs.len();
        if self.coeffs.len() < dlen {
            return Ok((Self::zero(m), self.clone()));
        }
        let lead_inv = m.inv(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0; rem.len() - dlen + 1];
        for shift in (0..quot.len()).rev() {
            let top = rem[shift + dlen - 1];
            if top == 0 {
                continue;
            }
            let q = m.mul(top, lead_inv);
            quot[shift] = q;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = m.sub(rem[shift + i], m.mul(q, d));
            }
        }
        Ok((Self::from_canonical(m, quot), Self::from_canonical(m, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic().expect("nonzero")
        }
    }

    /// `self^e mod modulus_poly`.
    pub fn pow_mod(&self, mut e: u64, modulus_poly: &Self) -> Result<Self> {
        let mut base = self.rem(modulus_poly)?;
        let mut acc = Self::constant(self.modulus, 1).rem(modulus_poly)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus_poly)?;
            }
            base = base.mul(&base).rem(modulus_poly)?;
            e >>= 1;
        }
        Ok(acc)
    }
}

fn trim(coeffs: &mut Vec<u64>) {
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 (mod {})", self.modulus.p());
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·λ")?,
                _ => write!(f, "{c}·λ^{i}")?,
            }
        }
        write!(f, " (mod {})", self.modulus.p())
    }
}

/// Interpolates the unique polynomial of degree `≤ 2h−1` matching `h`
/// order-1 samples, using Newton divided differences on the doubled node
/// sequence `λ_1, λ_1, λ_2, λ_2, …`.
pub fn hermite_interpolate(samples: &[HermiteSample]) -> Result<Polynomial> {
    let Some(first) = samples.first() else {
        return Err(Error::EmptySamples);
    };
    let m = first.modulus();
    for s in samples {
        for e in [s.lambda, s.alpha, s.beta] {
            if e.modulus() != m {
                return Err(Error::ModulusMismatch(m.p(), e.modulus().p()));
            }
        }
    }
    for (i, a) in samples.iter().enumerate() {
        if samples[..i].iter().any(|b| b.lambda == a.lambda) {
            return Err(Error::DuplicatePoint(a.lambda.value()));
        }
    }

    let n = 2 * samples.len();
    let nodes: Vec<u64> = (0..n).map(|i| samples[i / 2].lambda.value()).collect();
    let mut coef: Vec<u64> = (0..n).map(|i| samples[i / 2].alpha.value()).collect();
    for order in 1..n {
        for i in (order..n).rev() {
            coef[i] = if order == 1 && i % 2 == 1 {
                samples[i / 2].beta.value()
            } else {
                let num = m.sub(coef[i], coef[i - 1]);
                let den = m.sub(nodes[i], nodes[i - order]);
                m.mul(num, m.inv(den)?)
            };
        }
    }

    // Newton form to monomial basis, innermost factor first.
    let mut acc = vec![coef[n - 1]];
    for r in (0..n - 1).rev() {
        let z = nodes[r];
        let mut next = vec![0; acc.len() + 1];
        for (d, &c) in acc.iter().enumerate() {
            next[d + 1] = m.add(next[d + 1], c);
            next[d] = m.sub(next[d], m.mul(c, z));
        }
        next[0] = m.add(next[0], coef[r]);
        acc = next;
    }
    Ok(Polynomial::from_canonical(m, acc))
}

/// All roots of `q` in `F_p`, ascending.
pub fn poly_roots(q: &Polynomial) -> Result<Vec<FieldElement>> {
    poly_roots_seeded(q, DEFAULT_ROOT_SEED)
}

/// As [`poly_roots`], with an explicit seed for the probabilistic splitting
/// used on fields larger than [`EXHAUSTIVE_ROOT_LIMIT`].
pub fn poly_roots_seeded(q: &Polynomial, seed: u64) -> Result<Vec<FieldElement>> {
    let roots = if q.modulus().p() <= EXHAUSTIVE_ROOT_LIMIT {
        roots_exhaustive(q)?
    } else {
        roots_by_splitting(q, seed)?
    };
    Ok(roots.into_iter().map(|r| q.modulus().elem(r)).collect())
}

/// Evaluates `q` at every field element.
pub fn roots_exhaustive(q: &Polynomial) -> Result<Vec<u64>> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok((0..q.modulus().p()).filter(|&x| q.eval_raw(x) == 0).collect())
}

/// `gcd(α^p − α, q)` followed by equal-degree splitting.
pub fn roots_by_splitting(q: &Polynomial, seed: u64) -> Result<Vec<u64>> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let m = q.modulus();
    let q = q.monic()?;
    let x = Polynomial::monomial(m, 1, 1);
    let mut roots = Vec::new();
    // Split off the root 0 so the remaining factor has only units as roots.
    let mut g = q.clone();
    if g.coeffs[0] == 0 {
        roots.push(0);
        let v = g.valuation().expect("nonzero");
        g = g.shift_down(v);
    }
    if g.degree().unwrap_or(0) > 0 {
        let frob = x.pow_mod(m.p(), &g)?;
        let split = frob.sub(&x).gcd(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        split_linear(&split, &mut rng, &mut roots)?;
    }
    roots.sort_unstable();
    roots.dedup();
    Ok(roots)
}

// `g` is monic and a product of distinct linear factors with nonzero roots.
fn split_linear(g: &Polynomial, rng: &mut ChaCha8Rng, out: &mut Vec<u64>) -> Result<()> {
    let m = g.modulus();
    match g.degree() {
        None | Some(0) => return Ok(()),
        Some(1) => {
            out.push(m.neg(g.coeffs[0]));
            return Ok(());
        }
        _ => {}
    }
    let half = (m.p() - 1) / 2;
    loop {
        let delta = rng.gen_range(0..m.p());
        let shifted = Polynomial::from_canonical(m, vec![delta, 1]);
        let h = shifted
            .pow_mod(half, g)?
            .sub(&Polynomial::constant(m, 1));
        let d = h.gcd(g);
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && dd < g.degree().unwrap_or(0) {
            let (rest, _) = g.div_rem(&d)?;
            split_linear(&d, rng, out)?;
            split_linear(&rest.monic()?, rng, out)?;
            return Ok(());
        }
    }
}

/// Number of samples `j` with `f(λ_j) = α_j` and `f'(λ_j) = β_j`.
pub fn order1_agreement_count(f: &Polynomial, samples: &[HermiteSample]) -> usize {
    let df = f.derivative();
    samples
        .iter()
        .filter(|s| {
            let x = s.lambda.value();
            f.eval_raw(x) == s.alpha.value() && df.eval_raw(x) == s.beta.value()
        })
        .count()
}
