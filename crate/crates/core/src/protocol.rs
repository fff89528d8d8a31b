//! Client and server algorithms.
//!
//! All three schemes share query generation and answering: the client
//! Shamir-shares `E(i)` with a vector `G(λ) = E(i) + Σ_s λ^s r_s` of
//! degree-`t` polynomials, server `j` receives `G(λ_j)` and returns `F` and
//! `∇F` there. From each reply the client derives an order-1 sample of
//! `f(λ) = F(G(λ))`, a polynomial of degree `≤ wt` with `f(0) = x_i`, and
//! decodes those samples.

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::encode::{index_encode, EncodedDatabase, PirParams, Scheme};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldModulus};
use crate::listdecode::{interpolate_qbase, rr_roots};
use crate::poly::{hermite_interpolate, order1_agreement_count, HermiteSample, Polynomial};

/// The point `G(λ_j) ∈ F_p^m` sent to one server.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    values: Vec<u64>,
}

impl Query {
    /// Wraps residues, rejecting values `≥ p`.
    pub fn new(modulus: FieldModulus, values: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|&&v| v >= modulus.p()) {
            return Err(Error::NonCanonical {
                value: bad,
                modulus: modulus.p(),
            });
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Client-side state kept between querying and reconstruction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Aux {
    pub modulus: FieldModulus,
    pub lambdas: Vec<u64>,
    /// `r_1..r_t`, each of length `m`.
    pub r: Vec<Vec<u64>>,
    pub index: usize,
}

impl Aux {
    /// `G'(λ) = Σ_s s·λ^{s−1} r_s`.
    pub fn g_prime_at(&self, lambda: u64) -> Vec<u64> {
        let fm = self.modulus;
        let m = self.r.first().map_or(0, Vec::len);
        let mut out = vec![0; m];
        let mut lpow = 1; // λ^{s−1}
        for (idx, rs) in self.r.iter().enumerate() {
            let coeff = fm.mul(fm.reduce(idx as u64 + 1), lpow);
            for (o, &x) in out.iter_mut().zip(rs) {
                *o = fm.add(*o, fm.mul(coeff, x));
            }
            lpow = fm.mul(lpow, lambda);
        }
        out
    }

    /// Coordinate `c` (0-based) of `G'(λ)`.
    pub fn g_prime_coord(&self, lambda: u64, c: usize) -> u64 {
        let fm = self.modulus;
        let mut acc = 0;
        let mut lpow = 1;
        for (idx, rs) in self.r.iter().enumerate() {
            acc = fm.add(acc, fm.mul(fm.mul(fm.reduce(idx as u64 + 1), lpow), rs[c]));
            lpow = fm.mul(lpow, lambda);
        }
        acc
    }
}

/// A server's reply: `(F(q), ∇F(q))`, or nothing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Answer {
    Silent,
    Reply { u: u64, v: Vec<u64> },
}

impl Answer {
    pub fn is_silent(&self) -> bool {
        matches!(self, Answer::Silent)
    }
}

/// Decoded candidate set and the distinct values `f̃(0)` it yields.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OutputList {
    /// Ascending, deduplicated.
    pub values: Vec<FieldElement>,
    /// The candidate polynomials, deduplicated by coefficients, ascending.
    pub candidates: Vec<Polynomial>,
}

impl OutputList {
    pub fn from_candidates(candidates: BTreeSet<Polynomial>, modulus: FieldModulus) -> Self {
        let values: BTreeSet<FieldElement> = candidates
            .iter()
            .map(|f| f.eval(modulus.zero()))
            .collect();
        Self {
            values: values.into_iter().collect(),
            candidates: candidates.into_iter().collect(),
        }
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        self.values.binary_search(&x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Overinterpolation strategy for the first list decoder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecodeMode {
    /// Interpolate every `(k−b)`-subset.
    Naive,
    /// Interpolate every `(⌊wt/2⌋+1)`-subset and filter by agreement.
    Optimized,
}

/// Draws `r_1..r_t` from a ChaCha8 stream and builds the queries.
pub fn query_gen(params: &PirParams, i: usize, seed: u64) -> Result<(Vec<Query>, Aux)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = params.modulus.p();
    let r = (0..params.t)
        .map(|_| Uniform::new(0, p).sample_iter(&mut rng).take(params.m).collect())
        .collect();
    query_gen_with_randomness(params, i, r)
}

/// Query generation with caller-supplied randomness `r_1..r_t`.
pub fn query_gen_with_randomness(params: &PirParams, i: usize, r: Vec<Vec<u64>>) -> Result<(Vec<Query>, Aux)> {
    if i == 0 || i > params.n {
        return Err(Error::IndexOutOfRange {
            index: i,
            max: params.n,
        });
    }
    if r.len() != params.t {
        return Err(Error::ShapeError {
            expected: params.t,
            got: r.len(),
        });
    }
    let fm = params.modulus;
    for rs in &r {
        if rs.len() != params.m {
            return Err(Error::ShapeError {
                expected: params.m,
                got: rs.len(),
            });
        }
        if let Some(&bad) = rs.iter().find(|&&v| v >= fm.p()) {
            return Err(Error::NonCanonical {
                value: bad,
                modulus: fm.p(),
            });
        }
    }
    let support = index_encode(i, params.m, params.w)?;
    // t·(p−1)² fits in a u64, so reduce once per coordinate.
    let lazy = (fm.p() as u128 - 1).pow(2) * params.t as u128 <= u64::MAX as u128;
    let queries = params
        .lambdas
        .iter()
        .map(|&lambda| {
            let lpows: Vec<u64> = (1..=params.t as u64).map(|s| fm.pow(lambda, s)).collect();
            let mut q: Vec<u64> = if lazy {
                let lp0 = lpows[0];
                let mut acc: Vec<u64> = r[0].iter().map(|&x| lp0 * x).collect();
                for (rs, &lp) in r.iter().zip(&lpows).skip(1) {
                    acc.iter_mut().zip(rs).for_each(|(a, &x)| *a += lp * x);
                }
                acc.iter_mut().for_each(|a| *a = fm.reduce(*a));
                acc
            } else {
                (0..params.m)
                    .map(|c| r.iter().zip(&lpows).fold(0, |acc, (rs, &lp)| fm.add(acc, fm.mul(lp, rs[c]))))
                    .collect()
            };
            for &c in &support {
                q[c - 1] = fm.add(q[c - 1], 1);
            }
            Query { values: q }
        })
        .collect();
    let aux = Aux {
        modulus: fm,
        lambdas: params.lambdas.clone(),
        r,
        index: i,
    };
    Ok((queries, aux))
}

/// The deterministic server algorithm.
pub fn answer(db: &EncodedDatabase, q: &Query) -> Result<Answer> {
    let (u, v) = db.eval_and_gradient_raw(&q.values)?;
    Ok(Answer::Reply { u, v })
}

/// Order-1 samples from the `k` lowest-indexed responding servers. Returns
/// the 1-based server indices used alongside the samples.
pub fn derive_tuples(aux: &Aux, k: usize, responses: &[Answer]) -> Result<(Vec<usize>, Vec<HermiteSample>)> {
    let responders: Vec<usize> = responses
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_silent())
        .map(|(j, _)| j + 1)
        .take(k)
        .collect();
    if responders.len() < k {
        return Err(Error::InsufficientResponses {
            got: responders.len(),
            need: k,
        });
    }
    let samples = derive_tuples_from(aux, responses, &responders)?;
    Ok((responders, samples))
}

/// Order-1 samples from an explicit responder subset (1-based indices).
pub fn derive_tuples_from(aux: &Aux, responses: &[Answer], servers: &[usize]) -> Result<Vec<HermiteSample>> {
    if responses.len() != aux.lambdas.len() {
        return Err(Error::ShapeError {
            expected: aux.lambdas.len(),
            got: responses.len(),
        });
    }
    let fm = aux.modulus;
    let m = aux.r.first().map_or(0, Vec::len);
    servers
        .iter()
        .map(|&j| {
            if j == 0 || j > responses.len() {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    max: responses.len(),
                });
            }
            let Answer::Reply { u, v } = &responses[j - 1] else {
                return Err(Error::InsufficientResponses {
                    got: 0,
                    need: 1,
                });
            };
            if v.len() != m {
                return Err(Error::ShapeError {
                    expected: m,
                    got: v.len(),
                });
            }
            // ⟨v, G'(λ)⟩ = Σ_s s·λ^{s−1}·⟨v, r_s⟩
            let lambda = aux.lambdas[j - 1];
            let mut beta = 0;
            let mut lpow = 1;
            for (idx, rs) in aux.r.iter().enumerate() {
                let coeff = fm.mul(fm.reduce(idx as u64 + 1), lpow);
                beta = fm.add(beta, fm.mul(coeff, fm.dot(v, rs)));
                lpow = fm.mul(lpow, lambda);
            }
            Ok(HermiteSample::new(fm.elem(lambda), fm.elem(*u), fm.elem(beta)))
        })
        .collect()
}

/// Unique decoding: interpolate all `k` samples and evaluate at 0. Only
/// meaningful when every sample is honest.
pub fn reconstruct_wy(tuples: &[HermiteSample]) -> Result<FieldElement> {
    let f = hermite_interpolate(tuples)?;
    Ok(f.eval(tuples[0].modulus().zero()))
}

fn common_modulus(tuples: &[HermiteSample]) -> Result<FieldModulus> {
    tuples
        .first()
        .map(HermiteSample::modulus)
        .ok_or(Error::EmptySamples)
}

/// List decoding by overinterpolation.
pub fn reconstruct_g1(tuples: &[HermiteSample], wt: usize, b: usize, mode: DecodeMode) -> Result<OutputList> {
    let fm = common_modulus(tuples)?;
    let k = tuples.len();
    if b + 2 > k {
        return Err(Error::InfeasibleParameters(format!("need b ≤ k−2, got b={b} k={k}")));
    }
    if wt + 2 > 2 * (k - b) {
        return Err(Error::InfeasibleParameters(format!(
            "need wt ≤ 2(k−b)−2 = {}, got {wt}",
            2 * (k - b) - 2
        )));
    }
    let mut cp = BTreeSet::new();
    match mode {
        DecodeMode::Naive => {
            for subset in (0..k).combinations(k - b) {
                let picked: Vec<HermiteSample> = subset.iter().map(|&j| tuples[j]).collect();
                let f = hermite_interpolate(&picked)?;
                if f.degree_at_most(wt) {
                    cp.insert(f);
                }
            }
        }
        DecodeMode::Optimized => {
            for subset in (0..k).combinations(wt / 2 + 1) {
                let picked: Vec<HermiteSample> = subset.iter().map(|&j| tuples[j]).collect();
                let f = hermite_interpolate(&picked)?;
                if f.degree_at_most(wt) && !cp.contains(&f) && order1_agreement_count(&f, tuples) >= k - b {
                    cp.insert(f);
                }
            }
        }
    }
    Ok(OutputList::from_candidates(cp, fm))
}

/// List decoding through the weighted-degree bivariate interpolant.
pub fn reconstruct_g2(tuples: &[HermiteSample], wt: usize, b: usize) -> Result<OutputList> {
    let fm = common_modulus(tuples)?;
    let k = tuples.len();
    if b >= k {
        return Err(Error::InfeasibleParameters(format!("need b < k, got b={b} k={k}")));
    }
    let q = interpolate_qbase(tuples, wt, 2 * (k - b) - 1)?;
    let cp: BTreeSet<Polynomial> = rr_roots(&q, wt)
        .into_iter()
        .filter(|f| order1_agreement_count(f, tuples) >= k - b)
        .collect();
    Ok(OutputList::from_candidates(cp, fm))
}

/// Runs the reconstructor matching `params.scheme`. The baseline's single
/// value is wrapped in a one-element list whose candidate is the interpolant.
pub fn reconstruct(params: &PirParams, tuples: &[HermiteSample], mode: DecodeMode) -> Result<OutputList> {
    let wt = params.wt();
    match params.scheme {
        Scheme::Wy => {
            let f = hermite_interpolate(tuples)?;
            Ok(OutputList::from_candidates(BTreeSet::from([f]), params.modulus))
        }
        Scheme::G1 => reconstruct_g1(tuples, wt, params.b, mode),
        Scheme::G2 => reconstruct_g2(tuples, wt, params.b),
    }
}

/// Whether `cp_len ≤ C(k, h) / C(k−b, h)` with `h = ⌊wt/2⌋ + 1`.
pub fn g1_list_bound_holds(cp_len: usize, k: usize, b: usize, wt: usize) -> bool {
    use crate::encode::binomial;
    let h = (wt / 2 + 1) as u64;
    (cp_len as u128) * binomial((k - b) as u64, h) <= binomial(k as u64, h)
}

/// `ρ = ⌊(2(k−b)−1)/wt⌋`, the α-degree of the interpolant.
pub fn g2_list_bound(k: usize, b: usize, wt: usize) -> usize {
    (2 * (k - b) - 1) / wt
}
