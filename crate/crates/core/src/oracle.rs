//! Brute-force references for the decoders and for query privacy.
//!
//! Both oracles are exhaustive and only run on tiny fields; they return the
//! same types as the production code so equivalence checks are direct
//! comparisons.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::encode::PirParams;
use crate::error::{Error, Result};
use crate::field::FieldModulus;
use crate::listdecode::is_feasible;
use crate::poly::{order1_agreement_count, HermiteSample, Polynomial};
use crate::protocol::{query_gen_with_randomness, reconstruct_g1, reconstruct_g2, DecodeMode};

/// Size caps for exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_p: u64,
    pub max_wt: usize,
    /// Upper bound on `p^(wt+1)` and `p^(m·t)`.
    pub max_enumeration: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self {
            max_p: 17,
            max_wt: 2,
            max_enumeration: 10_000_000,
        }
    }
}

fn checked_power(p: u64, e: usize, cap: u64) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(p).filter(|&v| v <= cap)?;
    }
    Some(acc)
}

/// Every polynomial of degree `≤ wt` over `F_p` agreeing to first order with
/// at least `k−b` of the samples (`k` = sample count), sorted.
pub fn brute_force_list(
    tuples: &[HermiteSample],
    wt: usize,
    b: usize,
    modulus: FieldModulus,
    limits: &OracleLimits,
) -> Result<Vec<Polynomial>> {
    let p = modulus.p();
    if p > limits.max_p || wt > limits.max_wt {
        return Err(Error::OracleTooLarge(format!(
            "p={p}, wt={wt} exceed limits p≤{}, wt≤{}",
            limits.max_p, limits.max_wt
        )));
    }
    let total = checked_power(p, wt + 1, limits.max_enumeration).ok_or_else(|| {
        Error::OracleTooLarge(format!("p^(wt+1) exceeds {}", limits.max_enumeration))
    })?;
    let need = tuples.len().saturating_sub(b);
    let mut out = Vec::new();
    // Lexicographic in (c_0, c_1, …, c_wt) with c_0 most significant.
    for code in 0..total {
        let mut coeffs = vec![0; wt + 1];
        let mut x = code;
        for c in coeffs.iter_mut().rev() {
            *c = x % p;
            x /= p;
        }
        let f = Polynomial::new(modulus, coeffs);
        if order1_agreement_count(&f, tuples) >= need {
            out.push(f);
        }
    }
    out.sort();
    Ok(out)
}

/// Multiset of restricted query tuples: concatenated server queries → count.
pub type QueryDistribution = BTreeMap<Vec<u64>, u64>;

/// Exact distribution of `(G(λ_j))_{j∈T}` over all `p^(m·t)` choices of
/// `r_1..r_t`, for an arbitrary secret vector `G(0)`. Evaluated directly,
/// without going through the protocol code.
pub fn share_distribution(
    modulus: FieldModulus,
    lambdas: &[u64],
    t: usize,
    secret: &[u64],
    servers: &[usize],
    limits: &OracleLimits,
) -> Result<QueryDistribution> {
    let p = modulus.p();
    let m = secret.len();
    let total = checked_power(p, m * t, limits.max_enumeration)
        .ok_or_else(|| Error::OracleTooLarge(format!("p^(m·t) = {p}^{} too large", m * t)))?;
    for &j in servers {
        if j == 0 || j > lambdas.len() {
            return Err(Error::IndexOutOfRange {
                index: j,
                max: lambdas.len(),
            });
        }
    }
    let mut dist = QueryDistribution::new();
    let mut r = vec![0u64; m * t];
    for code in 0..total {
        let mut x = code;
        for v in r.iter_mut() {
            *v = x % p;
            x /= p;
        }
        let mut key = Vec::with_capacity(servers.len() * m);
        for &j in servers {
            let lambda = lambdas[j - 1] % p;
            for c in 0..m {
                // secret_c + Σ_s λ^s r[s][c]
                let mut acc = secret[c] % p;
                let mut lp = 1;
                for s in 0..t {
                    lp = lp * lambda % p;
                    acc = (acc + lp * r[s * m + c]) % p;
                }
                key.push(acc);
            }
        }
        *dist.entry(key).or_insert(0) += 1;
    }
    Ok(dist)
}

/// Exact query distributions seen by coalition `servers` when retrieving
/// `i1` versus `i2`, enumerating every randomness choice through the real
/// query generator.
pub fn privacy_enumerate(
    params: &PirParams,
    i1: usize,
    i2: usize,
    servers: &[usize],
    limits: &OracleLimits,
) -> Result<(QueryDistribution, QueryDistribution)> {
    let p = params.modulus.p();
    let (m, t) = (params.m, params.t);
    let total = checked_power(p, m * t, limits.max_enumeration)
        .ok_or_else(|| Error::OracleTooLarge(format!("p^(m·t) = {p}^{} too large", m * t)))?;
    for &j in servers {
        if j == 0 || j > params.ell {
            return Err(Error::IndexOutOfRange {
                index: j,
                max: params.ell,
            });
        }
    }
    let one = |i: usize| -> Result<QueryDistribution> {
        let mut dist = QueryDistribution::new();
        for code in 0..total {
            let mut x = code;
            let r: Vec<Vec<u64>> = (0..t)
                .map(|_| {
                    (0..m)
                        .map(|_| {
                            let v = x % p;
                            x /= p;
                            v
                        })
                        .collect()
                })
                .collect();
            let (queries, _) = query_gen_with_randomness(params, i, r)?;
            let key: Vec<u64> = servers
                .iter()
                .flat_map(|&j| queries[j - 1].values().iter().copied())
                .collect();
            *dist.entry(key).or_insert(0) += 1;
        }
        Ok(dist)
    };
    Ok((one(i1)?, one(i2)?))
}

/// A decoding instance small enough for [`brute_force_list`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecodingCase {
    pub modulus: FieldModulus,
    pub wt: usize,
    pub b: usize,
    pub tuples: Vec<HermiteSample>,
}

/// Candidate sets from every decoder plus the exhaustive reference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoderComparison {
    pub naive: Vec<Polynomial>,
    pub optimized: Vec<Polynomial>,
    pub interpolation: Vec<Polynomial>,
    pub brute_force: Vec<Polynomial>,
}

impl DecoderComparison {
    pub fn all_equal(&self) -> bool {
        self.naive == self.brute_force && self.optimized == self.brute_force && self.interpolation == self.brute_force
    }
}

/// Draws `p ∈ {7, 11, 13, 17}`, `k ≤ 6`, `b ≤ k−2` and `wt ≤ 2` with a
/// feasible interpolation step, then `k` tuples at distinct nonzero points:
/// `k−b` from a hidden polynomial and the rest mutated (garbage, a second
/// consistent polynomial, or a wrong value or derivative only).
pub fn random_decoding_case(seed: u64) -> DecodingCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modulus = FieldModulus::new([7, 11, 13, 17][rng.gen_range(0..4)]).expect("prime");
    let p = modulus.p();
    let (k, b, wt) = loop {
        let k = rng.gen_range(2..=6);
        let b = rng.gen_range(0..=k - 2);
        let wt = rng.gen_range(1..=2);
        if is_feasible(k, wt, 2 * (k - b) - 1) {
            break (k, b, wt);
        }
    };
    let poly = |rng: &mut ChaCha8Rng| Polynomial::new(modulus, (0..=wt).map(|_| rng.gen_range(0..p)).collect());
    let f = poly(&mut rng);
    let g = poly(&mut rng);
    let points: Vec<u64> = sample(&mut rng, p as usize - 1, k).iter().map(|x| x as u64 + 1).collect();
    let bad: Vec<usize> = sample(&mut rng, k, b).into_vec();
    let tuples = points
        .iter()
        .enumerate()
        .map(|(j, &x)| {
            let mut alpha = f.eval_raw(x);
            let mut beta = f.derivative().eval_raw(x);
            if bad.contains(&j) {
                match rng.gen_range(0..4) {
                    0 => {
                        alpha = rng.gen_range(0..p);
                        beta = rng.gen_range(0..p);
                    }
                    1 => {
                        alpha = g.eval_raw(x);
                        beta = g.derivative().eval_raw(x);
                    }
                    2 => alpha = rng.gen_range(0..p),
                    _ => beta = rng.gen_range(0..p),
                }
            }
            HermiteSample::from_raw(modulus, x, alpha, beta)
        })
        .collect();
    DecodingCase { modulus, wt, b, tuples }
}

/// Runs both overinterpolation modes, the bivariate decoder and the
/// exhaustive search on one case.
pub fn compare_decoders(case: &DecodingCase, limits: &OracleLimits) -> Result<DecoderComparison> {
    let (wt, b) = (case.wt, case.b);
    Ok(DecoderComparison {
        naive: reconstruct_g1(&case.tuples, wt, b, DecodeMode::Naive)?.candidates,
        optimized: reconstruct_g1(&case.tuples, wt, b, DecodeMode::Optimized)?.candidates,
        interpolation: reconstruct_g2(&case.tuples, wt, b)?.candidates,
        brute_force: brute_force_list(&case.tuples, wt, b, case.modulus, limits)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::Scheme;

    fn fm(p: u64) -> FieldModulus {
        FieldModulus::new(p).unwrap()
    }

    fn samples_of(f: &Polynomial, points: &[u64]) -> Vec<HermiteSample> {
        let df = f.derivative();
        points
            .iter()
            .map(|&x| HermiteSample::from_raw(f.modulus(), x, f.eval_raw(x), df.eval_raw(x)))
            .collect()
    }

    #[test]
    fn decoders_match_on_random_cases() {
        for seed in 0..100 {
            let case = random_decoding_case(seed);
            let cmp = compare_decoders(&case, &OracleLimits::default()).unwrap();
            assert!(cmp.all_equal(), "seed {seed}: {cmp:?}");
        }
    }

    #[test]
    fn honest_tuples_give_singleton() {
        let m = fm(11);
        let f = Polynomial::new(m, vec![4, 0, 9]);
        let got = brute_force_list(&samples_of(&f, &[1, 2, 3, 4, 5]), 2, 2, m, &OracleLimits::default()).unwrap();
        assert_eq!(got, vec![f]);
    }

    #[test]
    fn consistent_fake_hand_checked() {
        // f = 3 + 2λ honest on λ = 1,2,3; fhat = 5 + 4λ on λ = 4,5,6 (mod 7)
        let m = fm(7);
        let f = Polynomial::new(m, vec![3, 2]);
        let fhat = Polynomial::new(m, vec![5, 4]);
        let mut tuples = samples_of(&f, &[1, 2, 3]);
        tuples.extend(samples_of(&fhat, &[4, 5, 6]));
        // spot-check one fake tuple by hand: fhat(4) = 21 ≡ 0, fhat' = 4
        assert_eq!((tuples[3].alpha.value(), tuples[3].beta.value()), (0, 4));
        let got = brute_force_list(&tuples, 1, 3, m, &OracleLimits::default()).unwrap();
        assert_eq!(got, vec![f, fhat]);
    }

    #[test]
    fn degenerate_b_equals_k_returns_everything() {
        let m = fm(5);
        let tuples = vec![HermiteSample::from_raw(m, 1, 0, 0)];
        let got = brute_force_list(&tuples, 1, 1, m, &OracleLimits::default()).unwrap();
        assert_eq!(got.len(), 25);
    }

    #[test]
    fn scaling_values_scales_the_list() {
        let m = fm(13);
        let tuples: Vec<HermiteSample> = [(1, 3, 5), (2, 7, 1), (3, 0, 2), (4, 9, 9), (5, 1, 4)]
            .iter()
            .map(|&(l, a, b)| HermiteSample::from_raw(m, l, a, b))
            .collect();
        let base = brute_force_list(&tuples, 2, 4, m, &OracleLimits::default()).unwrap();
        assert!(!base.is_empty());
        let c = 6;
        let scaled: Vec<HermiteSample> = tuples
            .iter()
            .map(|s| HermiteSample::from_raw(m, s.lambda.value(), s.alpha.value() * c, s.beta.value() * c))
            .collect();
        let got = brute_force_list(&scaled, 2, 4, m, &OracleLimits::default()).unwrap();
        let mut want: Vec<Polynomial> = base.iter().map(|f| f.scale(c)).collect();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn limits_enforced() {
        let m = fm(131);
        let s = vec![HermiteSample::from_raw(m, 1, 0, 0)];
        assert!(matches!(
            brute_force_list(&s, 1, 0, m, &OracleLimits::default()),
            Err(Error::OracleTooLarge(_))
        ));
        let m = fm(17);
        let s = vec![HermiteSample::from_raw(m, 1, 0, 0)];
        assert!(matches!(
            brute_force_list(&s, 3, 0, m, &OracleLimits::default()),
            Err(Error::OracleTooLarge(_))
        ));
    }

    #[test]
    fn single_coordinate_is_uniform() {
        let m = fm(5);
        for secret in [0u64, 1] {
            let d = share_distribution(m, &[1, 2, 3, 4], 1, &[secret], &[2], &OracleLimits::default()).unwrap();
            assert_eq!(d.len(), 5);
            assert!(d.values().all(|&c| c == 1));
        }
        let a = share_distribution(m, &[1, 2, 3, 4], 1, &[0], &[1, 3], &OracleLimits::default()).unwrap();
        let b = share_distribution(m, &[1, 2, 3, 4], 1, &[1], &[1, 3], &OracleLimits::default()).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn protocol_enumeration_matches_direct_enumeration() {
        let params = PirParams::new(Scheme::Wy, 3, 4, 3, 2, 0, 1, fm(5)).unwrap();
        assert_eq!(params.m, 3);
        let lim = OracleLimits::default();
        let (d1, d2) = privacy_enumerate(&params, 1, 2, &[1, 4], &lim).unwrap();
        assert_eq!(d1, d2);
        let direct = share_distribution(params.modulus, &params.lambdas, 2, &[1, 0, 0], &[1, 4], &lim).unwrap();
        assert_eq!(d1, direct);
        let (d1, d2) = privacy_enumerate(&params, 1, 2, &[1, 2, 4], &lim).unwrap();
        assert_ne!(d1, d2);
    }
}
