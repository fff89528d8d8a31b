//! Weighted-degree bivariate interpolation with derivative constraints, and
//! extraction of the polynomial roots `α = f̃(λ)` of the interpolant.
//!
//! Given order-1 samples `(λ_j, α_j, β_j)`, [`interpolate_qbase`] finds a
//! nonzero `Q(λ, α) = Σ_s Q_s(λ) α^s` of `(1, wt)`-weighted degree at most
//! `D` such that both `Q(λ_j, α_j)` and its formal total derivative
//! `Q^ext(λ_j, α_j, β_j)` vanish. Any `f̃` of degree `≤ wt` that matches a
//! sample to first order then gives `Q(λ, f̃(λ))` a double root at `λ_j`;
//! with more than `D/2` such samples the substitution vanishes identically
//! and `α − f̃(λ)` divides `Q`. [`rr_roots`] recovers all such `f̃` with the
//! Roth–Ruckenstein recursion.

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldModulus};
use crate::poly::{poly_roots, HermiteSample, Polynomial};

/// `Q(λ, α) = Σ_{s=0..ρ} Q_s(λ) α^s` with `deg Q_s ≤ D − s·wt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedBivariate {
    wt: usize,
    d: usize,
    rho: usize,
    q_s: Vec<Polynomial>,
}

/// Number of monomials `λ^a α^s` with `a + s·wt ≤ D`.
pub fn monomial_count(wt: usize, d: usize) -> usize {
    assert!(wt >= 1);
    (0..=d / wt).map(|s| d - s * wt + 1).sum()
}

/// Whether the constraint system for `k` samples has more unknowns than
/// equations, which guarantees a nonzero solution.
pub fn is_feasible(k: usize, wt: usize, d: usize) -> bool {
    wt >= 1 && monomial_count(wt, d) > 2 * k
}

impl WeightedBivariate {
    /// Validates the degree caps and nonzeroness.
    pub fn new(wt: usize, d: usize, q_s: Vec<Polynomial>) -> Result<Self> {
        if wt == 0 {
            return Err(Error::InfeasibleParameters("weight must be ≥ 1".into()));
        }
        let rho = d / wt;
        if q_s.len() != rho + 1 {
            return Err(Error::ShapeError {
                expected: rho + 1,
                got: q_s.len(),
            });
        }
        if q_s.iter().all(Polynomial::is_zero) {
            return Err(Error::ZeroPolynomial);
        }
        for (s, q) in q_s.iter().enumerate() {
            if !q.degree_at_most(d - s * wt) {
                return Err(Error::InfeasibleParameters(format!(
                    "deg Q_{s} exceeds {}",
                    d - s * wt
                )));
            }
        }
        Ok(Self { wt, d, rho, q_s })
    }

    pub fn wt(&self) -> usize {
        self.wt
    }

    /// The weighted-degree cap `D`.
    pub fn cap(&self) -> usize {
        self.d
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn coefficients(&self) -> &[Polynomial] {
        &self.q_s
    }

    pub fn modulus(&self) -> FieldModulus {
        self.q_s[0].modulus()
    }

    /// Actual `(1, wt)`-weighted degree.
    pub fn weighted_degree(&self) -> Option<usize> {
        self.q_s
            .iter()
            .enumerate()
            .filter_map(|(s, q)| q.degree().map(|a| a + s * self.wt))
            .max()
    }

    /// `Q(λ, α)`.
    pub fn eval(&self, lambda: FieldElement, alpha: FieldElement) -> FieldElement {
        let m = self.modulus();
        let (l, a) = (lambda.value(), alpha.value());
        let v = self
            .q_s
            .iter()
            .rev()
            .fold(0, |acc, q| m.add(m.mul(acc, a), q.eval_raw(l)));
        m.elem(v)
    }

    /// `Q^ext(λ, α, β) = Σ_{s≥1} s·Q_s(λ)α^{s−1}β + Σ_s Q_s'(λ)α^s`.
    pub fn qext_eval(&self, lambda: FieldElement, alpha: FieldElement, beta: FieldElement) -> FieldElement {
        let m = self.modulus();
        let (l, a, b) = (lambda.value(), alpha.value(), beta.value());
        let mut total = 0;
        let mut a_pow = 1; // α^s
        let mut a_prev = 0; // α^{s-1}
        for (s, q) in self.q_s.iter().enumerate() {
            let ds = q.derivative().eval_raw(l);
            total = m.add(total, m.mul(ds, a_pow));
            if s >= 1 {
                let coeff = m.mul(m.reduce(s as u64), q.eval_raw(l));
                total = m.add(total, m.mul(m.mul(coeff, a_prev), b));
            }
            a_prev = a_pow;
            a_pow = m.mul(a_pow, a);
        }
        m.elem(total)
    }

    /// The univariate polynomial `Q(λ, g(λ))`.
    pub fn substitute(&self, g: &Polynomial) -> Polynomial {
        substitute(&self.q_s, g)
    }
}

fn substitute(q_s: &[Polynomial], g: &Polynomial) -> Polynomial {
    let m = q_s[0].modulus();
    q_s.iter()
        .rev()
        .fold(Polynomial::zero(m), |acc, q| acc.mul(g).add(q))
}

/// The `2k × num` linear system whose kernel holds the coefficients of `Q`.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    modulus: FieldModulus,
    /// `(s, a)` for the monomial `λ^a α^s` of each column.
    monomials: Vec<(usize, usize)>,
    rows: Vec<Vec<u64>>,
}

impl ConstraintSystem {
    pub fn build(samples: &[HermiteSample], wt: usize, d: usize) -> Result<Self> {
        let Some(first) = samples.first() else {
            return Err(Error::EmptySamples);
        };
        let m = first.modulus();
        let monomials: Vec<(usize, usize)> = (0..=d / wt)
            .flat_map(|s| (0..=d - s * wt).map(move |a| (s, a)))
            .collect();
        let max_pow = d + 1;
        let mut rows = Vec::with_capacity(2 * samples.len());
        for smp in samples {
            let (l, al, be) = (smp.lambda.value(), smp.alpha.value(), smp.beta.value());
            let lp = powers(m, l, max_pow);
            let ap = powers(m, al, max_pow);
            let base: Vec<u64> = monomials
                .iter()
                .map(|&(s, a)| m.mul(lp[a], ap[s]))
                .collect();
            // d/dλ of λ^a α^s along α' = β: a·λ^{a−1}α^s + s·λ^a α^{s−1} β
            let ext: Vec<u64> = monomials
                .iter()
                .map(|&(s, a)| {
                    let mut v = 0;
                    if a >= 1 {
                        v = m.mul(m.mul(m.reduce(a as u64), lp[a - 1]), ap[s]);
                    }
                    if s >= 1 {
                        let t = m.mul(m.mul(m.reduce(s as u64), lp[a]), m.mul(ap[s - 1], be));
                        v = m.add(v, t);
                    }
                    v
                })
                .collect();
            rows.push(base);
            rows.push(ext);
        }
        Ok(Self {
            modulus: m,
            monomials,
            rows,
        })
    }

    pub fn num_unknowns(&self) -> usize {
        self.monomials.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.rows.len()
    }

    pub fn monomials(&self) -> &[(usize, usize)] {
        &self.monomials
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    /// Canonical kernel vector: reduce to RREF with first-nonzero pivoting,
    /// set the highest-index free column to 1 and every other free column to 0.
    pub fn canonical_kernel_vector(&self) -> Option<Vec<u64>> {
        kernel_vector(self.modulus, self.rows.clone(), self.num_unknowns())
    }
}

fn powers(m: FieldModulus, x: u64, n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 1;
    for _ in 0..=n {
        out.push(acc);
        acc = m.mul(acc, x);
    }
    out
}

fn kernel_vector(m: FieldModulus, mut rows: Vec<Vec<u64>>, ncols: usize) -> Option<Vec<u64>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = m.inv(rows[r][col]).expect("nonzero pivot");
        for v in rows[r][col..].iter_mut() {
            *v = m.mul(*v, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for c in col..ncols {
                row[c] = m.sub(row[c], m.mul(f, pivot_row[c]));
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free = (0..ncols).rev().find(|c| !pivots.contains(c))?;
    let mut x = vec![0; ncols];
    x[free] = 1;
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m.neg(rows[i][free]);
    }
    Some(x)
}

/// Interpolates a nonzero `Q` with `(1, wt)`-weighted degree `≤ D` vanishing
/// to first order on every sample.
pub fn interpolate_qbase(samples: &[HermiteSample], wt: usize, d: usize) -> Result<WeightedBivariate> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if wt == 0 {
        return Err(Error::InfeasibleParameters("weight must be ≥ 1".into()));
    }
    let num = monomial_count(wt, d);
    let k = samples.len();
    if num <= 2 * k {
        return Err(Error::InfeasibleParameters(format!(
            "{num} monomials do not exceed {} constraints (wt={wt}, D={d})",
            2 * k
        )));
    }
    for (i, a) in samples.iter().enumerate() {
        if samples[..i].iter().any(|b| b.lambda == a.lambda) {
            return Err(Error::DuplicatePoint(a.lambda.value()));
        }
    }
    let system = ConstraintSystem::build(samples, wt, d)?;
    let m = system.modulus;
    let x = system.canonical_kernel_vector().ok_or(Error::NoSolution)?;
    let rho = d / wt;
    let mut coeffs: Vec<Vec<u64>> = (0..=rho).map(|s| vec![0; d - s * wt + 1]).collect();
    for (&(s, a), &v) in system.monomials.iter().zip(&x) {
        coeffs[s][a] = v;
    }
    let q_s = coeffs
        .into_iter()
        .map(|c| Polynomial::from_canonical(m, c))
        .collect();
    WeightedBivariate::new(wt, d, q_s)
}

/// Free-function form of [`WeightedBivariate::qext_eval`].
pub fn qext_eval(q: &WeightedBivariate, lambda: FieldElement, alpha: FieldElement, beta: FieldElement) -> FieldElement {
    q.qext_eval(lambda, alpha, beta)
}

/// Every `f̃` with `deg f̃ ≤ wt` and `Q(λ, f̃(λ)) ≡ 0`, sorted by coefficients.
pub fn rr_roots(q: &WeightedBivariate, wt: usize) -> Vec<Polynomial> {
    let m = q.modulus();
    let binom = binomials_mod(m, q.rho);
    let mut candidates = Vec::new();
    let mut prefix = Vec::with_capacity(wt + 1);
    rr_recurse(trim_alpha(q.q_s.clone()), wt + 1, &binom, &mut prefix, &mut candidates);
    let mut out: Vec<Polynomial> = candidates
        .into_iter()
        .map(|c| Polynomial::from_canonical(m, c))
        .filter(|f| q.substitute(f).is_zero())
        .collect();
    out.sort();
    out.dedup();
    out
}

// Each level fixes one more coefficient of f̃: strip the common λ power,
// take the roots γ of Q(0, α), and continue on Q(λ, λα + γ).
fn rr_recurse(
    q: Vec<Polynomial>,
    remaining: usize,
    binom: &[Vec<u64>],
    prefix: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) {
    if remaining == 0 {
        out.push(prefix.clone());
        return;
    }
    let m = q[0].modulus();
    let e = q.iter().filter_map(Polynomial::valuation).min().unwrap_or(0);
    let q: Vec<Polynomial> = q.iter().map(|p| p.shift_down(e)).collect();
    let at_zero = Polynomial::from_canonical(m, q.iter().map(|p| p.coeff(0).value()).collect());
    let Ok(roots) = poly_roots(&at_zero) else {
        return;
    };
    for gamma in roots {
        let g = gamma.value();
        prefix.push(g);
        rr_recurse(shift(&q, g, binom), remaining - 1, binom, prefix, out);
        prefix.pop();
    }
}

// Q(λ, λα + γ): coefficient of α^i is λ^i Σ_{s≥i} C(s,i) γ^{s−i} Q_s(λ).
fn shift(q: &[Polynomial], gamma: u64, binom: &[Vec<u64>]) -> Vec<Polynomial> {
    let m = q[0].modulus();
    let gp = powers(m, gamma, q.len());
    let out = (0..q.len())
        .map(|i| {
            let mut acc = Polynomial::zero(m);
            for (s, qs) in q.iter().enumerate().skip(i) {
                let c = m.mul(binom[s][i], gp[s - i]);
                if c != 0 && !qs.is_zero() {
                    acc = acc.add(&qs.scale(c));
                }
            }
            acc.shift_up(i)
        })
        .collect();
    trim_alpha(out)
}

fn trim_alpha(mut q: Vec<Polynomial>) -> Vec<Polynomial> {
    while q.len() > 1 && q.last().is_some_and(Polynomial::is_zero) {
        q.pop();
    }
    q
}

fn binomials_mod(m: FieldModulus, n: usize) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    for s in 0..=n {
        let mut row = vec![1; s + 1];
        for i in 1..s {
            row[i] = m.add(rows[s - 1][i - 1], rows[s - 1][i]);
        }
        rows.push(row);
    }
    rows
}
