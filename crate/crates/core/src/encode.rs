//! Parameter selection, the public index encoding `E`, and the database
//! polynomial `F(z) = Σ_j x_j Π_{c ∈ E(j)} z_c`.
//!
//! `E(i)` is the `(i−1)`-th `w`-subset of `[m]` in colexicographic order.

use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldModulus};
use crate::listdecode;

/// Which reconstruction the parameters are chosen for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    /// Unique-decoding baseline (no Byzantine servers).
    #[serde(rename = "WY")]
    Wy,
    /// Overinterpolation.
    #[serde(rename = "G1")]
    G1,
    /// Weighted-degree bivariate list decoding.
    #[serde(rename = "G2")]
    G2,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Wy => "WY",
            Scheme::G1 => "G1",
            Scheme::G2 => "G2",
        })
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "WY" => Ok(Scheme::Wy),
            "G1" | "GAMMA1" => Ok(Scheme::G1),
            "G2" | "GAMMA2" => Ok(Scheme::G2),
            _ => Err(Error::InvalidConfig(format!("unknown scheme {s:?}"))),
        }
    }
}

/// Protocol configuration shared by client and servers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PirParams {
    pub scheme: Scheme,
    pub n: usize,
    pub ell: usize,
    pub k: usize,
    pub t: usize,
    pub b: usize,
    pub w: usize,
    pub m: usize,
    pub modulus: FieldModulus,
    /// `λ_1..λ_ℓ`, distinct and nonzero.
    pub lambdas: Vec<u64>,
}

impl PirParams {
    /// Builds and validates parameters with an explicit degree `w`, default
    /// evaluation points `λ_j = j`, and the minimal `m`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        scheme: Scheme,
        n: usize,
        ell: usize,
        k: usize,
        t: usize,
        b: usize,
        w: usize,
        modulus: FieldModulus,
    ) -> Result<Self> {
        if w == 0 {
            return Err(Error::InfeasibleParameters("w must be ≥ 1".into()));
        }
        if n == 0 {
            return Err(Error::InfeasibleParameters("n must be ≥ 1".into()));
        }
        let params = Self {
            scheme,
            n,
            ell,
            k,
            t,
            b,
            w,
            m: smallest_m(n as u64, w),
            modulus,
            lambdas: (1..=ell as u64).collect(),
        };
        params.validate()?;
        Ok(params)
    }

    /// Replaces the default evaluation points.
    pub fn with_lambdas(mut self, lambdas: Vec<u64>) -> Result<Self> {
        self.lambdas = lambdas;
        self.validate()?;
        Ok(self)
    }

    pub fn wt(&self) -> usize {
        self.w * self.t
    }

    /// Weighted-degree cap `D = 2(k−b)−1` used by the bivariate decoder.
    pub fn cap(&self) -> usize {
        2 * (self.k - self.b) - 1
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InfeasibleParameters(msg));
        let p = self.modulus.p();
        if self.t == 0 {
            return bad("t must be ≥ 1".into());
        }
        if self.k == 0 || self.k > self.ell {
            return bad(format!("need 1 ≤ k ≤ ℓ, got k={} ℓ={}", self.k, self.ell));
        }
        if self.ell as u64 >= p {
            return bad(format!("need ℓ < p, got ℓ={} p={p}", self.ell));
        }
        if self.w == 0 || binomial(self.m as u64, self.w as u64) < self.n as u128 {
            return bad(format!("C(m={}, w={}) < n={}", self.m, self.w, self.n));
        }
        if self.lambdas.len() != self.ell {
            return Err(Error::ShapeError {
                expected: self.ell,
                got: self.lambdas.len(),
            });
        }
        for (i, &l) in self.lambdas.iter().enumerate() {
            if l == 0 || l >= p {
                return bad(format!("λ_{} = {l} must be a nonzero residue", i + 1));
            }
            if self.lambdas[..i].contains(&l) {
                return Err(Error::DuplicatePoint(l));
            }
        }
        let wt = self.wt();
        match self.scheme {
            Scheme::Wy => {
                if self.b != 0 {
                    return bad("the WY baseline tolerates no Byzantine servers".into());
                }
                if self.t > self.k {
                    return bad(format!("need t ≤ k, got t={} k={}", self.t, self.k));
                }
                if wt > 2 * self.k - 1 {
                    return bad(format!("wt={wt} exceeds 2k−1={}", 2 * self.k - 1));
                }
            }
            Scheme::G1 | Scheme::G2 => {
                if self.t >= self.k {
                    return bad(format!("need t < k, got t={} k={}", self.t, self.k));
                }
                if self.b + 2 > self.k {
                    return bad(format!("need b ≤ k−2, got b={} k={}", self.b, self.k));
                }
                let d = self.cap();
                if self.scheme == Scheme::G1 && wt + 1 > d {
                    return bad(format!("G1 needs wt ≤ 2(k−b)−2 = {}, got {wt}", d - 1));
                }
                if self.scheme == Scheme::G2 && !listdecode::is_feasible(self.k, wt, d) {
                    return bad(format!(
                        "G2 constraint count: {} monomials ≤ 2k = {} (wt={wt}, D={d})",
                        listdecode::monomial_count(wt, d),
                        2 * self.k
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Degree parameter `w` for a scheme, before any `n`-dependent choice.
pub fn select_w(scheme: Scheme, k: usize, t: usize, b: usize) -> Result<usize> {
    let infeasible = |msg: String| Err(Error::InfeasibleParameters(msg));
    if t == 0 || k == 0 {
        return infeasible("k and t must be ≥ 1".into());
    }
    match scheme {
        Scheme::Wy => Ok((2 * k - 1) / t),
        Scheme::G1 => {
            if b + 2 > k {
                return infeasible(format!("need b ≤ k−2, got b={b} k={k}"));
            }
            Ok((2 * (k - b - 2) / t).max(1))
        }
        Scheme::G2 => {
            if b >= k {
                return infeasible(format!("need b < k, got b={b} k={k}"));
            }
            let bound = (k - b) * (k - b) / (k * t);
            let d = 2 * (k - b) - 1;
            (1..=bound)
                .rev()
                .find(|&w| listdecode::is_feasible(k, w * t, d))
                .ok_or_else(|| {
                    Error::InfeasibleParameters(format!(
                        "no w ≥ 1 passes the G2 constraint count for (k,b,t)=({k},{b},{t})"
                    ))
                })
        }
    }
}

/// Chooses `w` per scheme and the minimal `m` with `C(m, w) ≥ n`.
pub fn select_params(
    n: usize,
    ell: usize,
    k: usize,
    t: usize,
    b: usize,
    scheme: Scheme,
    modulus: FieldModulus,
) -> Result<PirParams> {
    let w = select_w(scheme, k, t, b)?;
    PirParams::new(scheme, n, ell, k, t, b, w, modulus)
}

/// `C(n, r)`, saturating at `u128::MAX`.
pub fn binomial(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc = C(n, i) here; C(n, i+1) = C(n, i)·(n−i)/(i+1) exactly.
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => return u128::MAX,
        }
    }
    acc
}

/// Smallest `m ≥ w` with `C(m, w) ≥ n`.
pub fn smallest_m(n: u64, w: usize) -> usize {
    let w64 = w as u64;
    let ok = |m: u64| binomial(m, w64) >= n as u128;
    let mut hi = w64.max(1);
    while !ok(hi) {
        hi *= 2;
    }
    let mut lo = w64;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo as usize
}

/// `E(i)` as an ascending 1-based support set: the `(i−1)`-th `w`-subset of
/// `[m]` in colex order.
pub fn index_encode(i: usize, m: usize, w: usize) -> Result<Vec<usize>> {
    let total = binomial(m as u64, w as u64);
    let max = usize::try_from(total).unwrap_or(usize::MAX);
    if i == 0 || i as u128 > total {
        return Err(Error::IndexOutOfRange { index: i, max });
    }
    let mut rank = (i - 1) as u128;
    let mut out = vec![0; w];
    let mut upper = m as u64;
    for slot in (1..=w).rev() {
        // largest c < upper with C(c, slot) ≤ rank
        let (mut lo, mut hi) = (slot as u64 - 1, upper - 1);
        while lo < hi {
            let mid = lo + (hi - lo + 1) / 2;
            if binomial(mid, slot as u64) <= rank {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        rank -= binomial(lo, slot as u64);
        out[slot - 1] = lo as usize + 1;
        upper = lo;
    }
    Ok(out)
}

/// Inverse of [`index_encode`].
pub fn index_rank(support: &[usize]) -> usize {
    support
        .iter()
        .enumerate()
        .map(|(k, &c)| binomial(c as u64 - 1, k as u64 + 1) as usize)
        .sum::<usize>()
        + 1
}

// Advances a 0-based ascending combination to its colex successor.
fn colex_next(c: &mut [u32]) {
    let w = c.len();
    for i in 0..w {
        let limit = if i + 1 < w { c[i + 1] } else { u32::MAX };
        if c[i] + 1 < limit {
            c[i] += 1;
            for (j, v) in c[..i].iter_mut().enumerate() {
                *v = j as u32;
            }
            return;
        }
    }
}

/// The database `x` bound to its encoding.
#[derive(Clone, Debug)]
pub struct EncodedDatabase {
    x: Vec<u64>,
    params: PirParams,
    // n·w 0-based coordinates, row j = support of E(j+1)
    support: Vec<u32>,
    lazy_reduction: bool,
}

impl EncodedDatabase {
    pub fn new(params: PirParams, x: Vec<u64>) -> Result<Self> {
        if x.len() != params.n {
            return Err(Error::ShapeError {
                expected: params.n,
                got: x.len(),
            });
        }
        let p = params.modulus.p();
        if let Some(&bad) = x.iter().find(|&&v| v >= p) {
            return Err(Error::NonCanonical {
                value: bad,
                modulus: p,
            });
        }
        let w = params.w;
        let mut support = Vec::with_capacity(params.n * w);
        let mut cur: Vec<u32> = (0..w as u32).collect();
        for j in 0..params.n {
            if j > 0 {
                colex_next(&mut cur);
            }
            support.extend_from_slice(&cur);
        }
        // Unreduced u64 accumulation is exact while n·p^(w+1) < 2^64.
        let lazy_reduction = (0..=w)
            .try_fold(params.n as u128, |acc, _| acc.checked_mul(p as u128))
            .is_some_and(|bound| bound < (1u128 << 64));
        Ok(Self {
            x,
            params,
            support,
            lazy_reduction,
        })
    }

    /// A database of `n` uniform field elements from a seeded generator.
    pub fn random(params: PirParams, seed: u64) -> Result<Self> {
        let x = generate_records(params.n, params.modulus, seed);
        Self::new(params, x)
    }

    pub fn params(&self) -> &PirParams {
        &self.params
    }

    pub fn records(&self) -> &[u64] {
        &self.x
    }

    pub fn record(&self, i: usize) -> Result<FieldElement> {
        if i == 0 || i > self.params.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: self.params.n,
            });
        }
        Ok(self.params.modulus.elem(self.x[i - 1]))
    }

    /// 1-based support of `E(i)`.
    pub fn support(&self, i: usize) -> Result<Vec<usize>> {
        if i == 0 || i > self.params.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: self.params.n,
            });
        }
        let w = self.params.w;
        Ok(self.support[(i - 1) * w..i * w]
            .iter()
            .map(|&c| c as usize + 1)
            .collect())
    }

    /// `E(i)` as a 0/1 vector of length `m`.
    pub fn indicator(&self, i: usize) -> Result<Vec<u64>> {
        let mut e = vec![0; self.params.m];
        for c in self.support(i)? {
            e[c - 1] = 1;
        }
        Ok(e)
    }

    /// `F(q)` and `∇F(q)` on raw residues, in `O(n·w)` multiplications.
    pub fn eval_and_gradient_raw(&self, q: &[u64]) -> Result<(u64, Vec<u64>)> {
        let m = self.params.m;
        if q.len() != m {
            return Err(Error::ShapeError {
                expected: m,
                got: q.len(),
            });
        }
        let fm = self.params.modulus;
        if let Some(&bad) = q.iter().find(|&&v| v >= fm.p()) {
            return Err(Error::NonCanonical {
                value: bad,
                modulus: fm.p(),
            });
        }
        let w = self.params.w;
        let mut v = vec![0u64; m];
        let u = if self.lazy_reduction {
            let u = match w {
                1 => accumulate_lazy::<1>(&self.support, &self.x, q, &mut v),
                2 => accumulate_lazy::<2>(&self.support, &self.x, q, &mut v),
                3 => accumulate_lazy::<3>(&self.support, &self.x, q, &mut v),
                4 => accumulate_lazy::<4>(&self.support, &self.x, q, &mut v),
                _ => accumulate_reduced(fm, w, &self.support, &self.x, q, &mut v),
            };
            for vc in v.iter_mut() {
                *vc = fm.reduce(*vc);
            }
            fm.reduce(u)
        } else {
            accumulate_reduced(fm, w, &self.support, &self.x, q, &mut v)
        };
        Ok((u, v))
    }
}

// Unreduced accumulation; callers guarantee n·p^(W+1) < 2^64.
fn accumulate_lazy<const W: usize>(support: &[u32], x: &[u64], q: &[u64], v: &mut [u64]) -> u64 {
    let mut u = 0u64;
    for (s, &xj) in support.chunks_exact(W).zip(x) {
        let mut prefix = [0u64; W];
        prefix[0] = xj;
        for i in 1..W {
            prefix[i] = prefix[i - 1].wrapping_mul(q[s[i - 1] as usize]);
        }
        u = u.wrapping_add(prefix[W - 1].wrapping_mul(q[s[W - 1] as usize]));
        let mut suffix = 1u64;
        for i in (0..W).rev() {
            let c = s[i] as usize;
            v[c] = v[c].wrapping_add(prefix[i].wrapping_mul(suffix));
            suffix = suffix.wrapping_mul(q[c]);
        }
    }
    u
}

fn accumulate_reduced(fm: FieldModulus, w: usize, support: &[u32], x: &[u64], q: &[u64], v: &mut [u64]) -> u64 {
    let mut u = 0u64;
    let mut prefix = vec![0u64; w];
    for (s, &xj) in support.chunks_exact(w).zip(x) {
        if xj == 0 {
            continue;
        }
        prefix[0] = xj;
        for i in 1..w {
            prefix[i] = fm.mul(prefix[i - 1], q[s[i - 1] as usize]);
        }
        u = fm.add(u, fm.mul(prefix[w - 1], q[s[w - 1] as usize]));
        let mut suffix = 1u64;
        for i in (0..w).rev() {
            let c = s[i] as usize;
            v[c] = fm.add(v[c], fm.mul(prefix[i], suffix));
            suffix = fm.mul(suffix, q[c]);
        }
    }
    u
}

/// Typed form of [`EncodedDatabase::eval_and_gradient_raw`].
pub fn f_eval_and_gradient(db: &EncodedDatabase, q: &[FieldElement]) -> Result<(FieldElement, Vec<FieldElement>)> {
    let fm = db.params.modulus;
    let mut raw = Vec::with_capacity(q.len());
    for e in q {
        if e.modulus() != fm {
            return Err(Error::ModulusMismatch(fm.p(), e.modulus().p()));
        }
        raw.push(e.value());
    }
    let (u, v) = db.eval_and_gradient_raw(&raw)?;
    Ok((fm.elem(u), v.into_iter().map(|c| fm.elem(c)).collect()))
}

/// `n` uniform residues drawn from a ChaCha8 stream seeded by `seed`.
pub fn generate_records(n: usize, modulus: FieldModulus, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Uniform::new(0, modulus.p()).sample_iter(&mut rng).take(n).collect()
}

pub const DB_MAGIC: &str = "LDPIR1";

/// Writes the database file: `LDPIR1\n<p>\n<n>\n` followed by `n`
/// little-endian elements of `ceil(bit_width/8)` bytes each.
pub fn write_database<W: Write>(mut out: W, modulus: FieldModulus, records: &[u64]) -> Result<()> {
    write!(out, "{DB_MAGIC}\n{}\n{}\n", modulus.p(), records.len())?;
    let width = modulus.element_bytes();
    let mut buf = Vec::with_capacity(records.len() * width);
    for &r in records {
        buf.extend_from_slice(&r.to_le_bytes()[..width]);
    }
    out.write_all(&buf)?;
    Ok(())
}

pub fn read_database<R: Read>(input: R) -> Result<(FieldModulus, Vec<u64>)> {
    let mut reader = BufReader::new(input);
    let mut line = |what: &str| -> Result<String> {
        let mut s = String::new();
        reader.read_line(&mut s)?;
        if !s.ends_with('\n') {
            return Err(Error::WireFormat(format!("truncated database header ({what})")));
        }
        Ok(s.trim_end_matches('\n').to_string())
    };
    let magic = line("magic")?;
    if magic != DB_MAGIC {
        return Err(Error::WireFormat(format!("bad database magic {magic:?}")));
    }
    let p: u64 = line("p")?
        .parse()
        .map_err(|e| Error::WireFormat(format!("bad modulus: {e}")))?;
    let n: usize = line("n")?
        .parse()
        .map_err(|e| Error::WireFormat(format!("bad record count: {e}")))?;
    let modulus = FieldModulus::new(p)?;
    let width = modulus.element_bytes();
    let mut body = Vec::new();
    reader.read_to_end(&mut body)?;
    if body.len() != n * width {
        return Err(Error::WireFormat(format!(
            "expected {} payload bytes, found {}",
            n * width,
            body.len()
        )));
    }
    let records = body
        .chunks_exact(width)
        .map(|chunk| {
            let mut le = [0u8; 8];
            le[..width].copy_from_slice(chunk);
            let v = u64::from_le_bytes(le);
            if v >= p {
                Err(Error::NonCanonical { value: v, modulus: p })
            } else {
                Ok(v)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((modulus, records))
}

pub fn write_database_file(path: &Path, modulus: FieldModulus, records: &[u64]) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut out = std::io::BufWriter::new(file);
    write_database(&mut out, modulus, records)?;
    out.flush()?;
    Ok(())
}

pub fn read_database_file(path: &Path) -> Result<(FieldModulus, Vec<u64>)> {
    read_database(std::fs::File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{hermite_interpolate, HermiteSample};
    use rand::Rng;

    fn fm(p: u64) -> FieldModulus {
        FieldModulus::new(p).unwrap()
    }

    #[test]
    fn select_params_examples() {
        let p = select_params(1 << 16, 8, 6, 1, 3, Scheme::G1, fm(131)).unwrap();
        assert_eq!((p.w, p.m), (2, 363));
        assert_eq!(select_w(Scheme::G1, 20, 1, 12).unwrap(), 12);
        assert_eq!(select_w(Scheme::G2, 20, 1, 12).unwrap(), 3);
        assert_eq!(select_w(Scheme::G2, 6, 1, 3).unwrap(), 1);
        assert_eq!(select_w(Scheme::Wy, 6, 1, 0).unwrap(), 11);
        let g1: Vec<usize> = (10..=14).map(|b| select_w(Scheme::G1, 20, 1, b).unwrap()).collect();
        assert_eq!(g1, vec![16, 14, 12, 10, 8]);
        // b > k − √(kt)
        assert!(select_w(Scheme::G2, 20, 1, 16).is_err());
        assert!(PirParams::new(Scheme::G2, 100, 20, 20, 1, 12, 4, fm(131)).is_err());
        assert!(PirParams::new(Scheme::G2, 100, 20, 20, 1, 12, 3, fm(131)).is_ok());
    }

    #[test]
    fn smallest_m_examples() {
        assert_eq!(smallest_m(1 << 16, 2), 363);
        assert_eq!(smallest_m(1 << 26, 12), 30);
        assert_eq!(smallest_m(1 << 16, 1), 1 << 16);
        assert_eq!(smallest_m(1, 3), 3);
        assert_eq!(binomial(362, 2), 65341);
        assert_eq!(binomial(363, 2), 65703);
        assert_eq!(binomial(1000, 500), u128::MAX);
    }

    #[test]
    fn params_invariants() {
        let m = fm(131);
        assert!(PirParams::new(Scheme::G1, 10, 8, 6, 1, 5, 1, m).is_err()); // b > k−2
        assert!(PirParams::new(Scheme::G1, 10, 8, 6, 1, 3, 5, m).is_err()); // wt > 2(k−b)−2
        assert!(PirParams::new(Scheme::G1, 10, 8, 9, 1, 3, 1, m).is_err()); // k > ℓ
        assert!(PirParams::new(Scheme::G1, 10, 200, 6, 1, 3, 1, m).is_err()); // ℓ ≥ p
        assert!(PirParams::new(Scheme::Wy, 4, 1, 1, 1, 0, 1, m).is_ok());
        let p = PirParams::new(Scheme::G1, 10, 8, 6, 1, 3, 2, m).unwrap();
        assert!(p.clone().with_lambdas(vec![1, 2, 3, 4, 5, 6, 7, 7]).is_err());
        assert!(p.clone().with_lambdas(vec![0, 2, 3, 4, 5, 6, 7, 8]).is_err());
        assert!(p.with_lambdas(vec![9, 2, 3, 4, 5, 6, 7, 8]).is_ok());
    }

    #[test]
    fn index_encode_examples() {
        assert_eq!(index_encode(1, 4, 2).unwrap(), vec![1, 2]);
        assert_eq!(index_encode(6, 4, 2).unwrap(), vec![3, 4]);
        let all: Vec<_> = (1..=6).map(|i| index_encode(i, 4, 2).unwrap()).collect();
        assert_eq!(all, vec![vec![1, 2], vec![1, 3], vec![2, 3], vec![1, 4], vec![2, 4], vec![3, 4]]);
        assert!(matches!(index_encode(7, 4, 2), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(index_encode(0, 4, 2), Err(Error::IndexOutOfRange { .. })));
        for i in 1..=120 {
            assert_eq!(index_rank(&index_encode(i, 10, 3).unwrap()), i);
        }
    }

    #[test]
    fn database_supports_match_unranking() {
        for (n, w) in [(120usize, 3usize), (50, 1), (300, 2), (70, 4)] {
            let params = PirParams {
                scheme: Scheme::Wy,
                n,
                ell: 1,
                k: 1,
                t: 1,
                b: 0,
                w,
                m: smallest_m(n as u64, w),
                modulus: fm(131),
                lambdas: vec![1],
            };
            let db = EncodedDatabase::random(params.clone(), 1).unwrap();
            let mut seen = std::collections::BTreeSet::new();
            for i in 1..=n {
                let s = db.support(i).unwrap();
                assert_eq!(s, index_encode(i, params.m, w).unwrap());
                assert_eq!(s.len(), w);
                assert!(s.windows(2).all(|p| p[0] < p[1]));
                assert!(seen.insert(s));
            }
        }
    }

    fn db3() -> EncodedDatabase {
        let params = PirParams::new(Scheme::Wy, 3, 2, 2, 1, 0, 2, fm(131)).unwrap();
        assert_eq!(params.m, 3);
        EncodedDatabase::new(params, vec![10, 20, 30]).unwrap()
    }

    #[test]
    fn symbolic_three_record_case() {
        let db = db3();
        assert_eq!(db.support(1).unwrap(), vec![1, 2]);
        assert_eq!(db.support(2).unwrap(), vec![1, 3]);
        assert_eq!(db.support(3).unwrap(), vec![2, 3]);
        let (u, v) = db.eval_and_gradient_raw(&[1, 1, 1]).unwrap();
        assert_eq!(u, 60);
        assert_eq!(v, vec![30, 40, 50]);
        // F = 10 z1z2 + 20 z1z3 + 30 z2z3 at (2,3,5)
        let (u, v) = db.eval_and_gradient_raw(&[2, 3, 5]).unwrap();
        assert_eq!(u, (60 + 200 + 450) % 131);
        assert_eq!(v, vec![(30 + 100) % 131, (20 + 150) % 131, (40 + 90) % 131]);
        let (u, v) = db.eval_and_gradient_raw(&[0, 0, 0]).unwrap();
        assert_eq!((u, v), (0, vec![0, 0, 0]));
        assert!(matches!(db.eval_and_gradient_raw(&[1, 1]), Err(Error::ShapeError { .. })));
        let m = fm(131);
        let (u, _) = f_eval_and_gradient(&db, &[m.elem(1), m.elem(0), m.elem(1)]).unwrap();
        assert_eq!(u.value(), 20);
    }

    #[test]
    fn lazy_and_reduced_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (p, n, w) in [(131u64, 500usize, 2usize), (1031, 300, 3), (1031, 2000, 1)] {
            let params = PirParams::new(Scheme::Wy, n, 4, 4, 1, 0, w, fm(p)).unwrap();
            let lazy = EncodedDatabase::random(params.clone(), 3).unwrap();
            assert!(lazy.lazy_reduction);
            let mut strict = lazy.clone();
            strict.lazy_reduction = false;
            for _ in 0..20 {
                let q: Vec<u64> = (0..params.m).map(|_| rng.gen_range(0..p)).collect();
                assert_eq!(lazy.eval_and_gradient_raw(&q).unwrap(), strict.eval_and_gradient_raw(&q).unwrap());
            }
        }
    }

    #[test]
    fn point_evaluation_recovers_records() {
        let params = PirParams::new(Scheme::Wy, 1 << 10, 4, 4, 1, 0, 3, fm(1031)).unwrap();
        let db = EncodedDatabase::random(params, 9).unwrap();
        for i in 1..=db.params().n {
            let (u, _) = db.eval_and_gradient_raw(&db.indicator(i).unwrap()).unwrap();
            assert_eq!(u, db.records()[i - 1]);
        }
    }

    #[test]
    fn gradient_matches_chain_rule() {
        let m = fm(131);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for (w, t) in [(2usize, 1usize), (3, 2), (1, 3)] {
            let k = w * t; // 2k points ≥ wt + 1
            let params = PirParams::new(Scheme::Wy, 40, k, k, t, 0, w, m).unwrap();
            let db = EncodedDatabase::random(params.clone(), 4).unwrap();
            for _ in 0..20 {
                let g: Vec<Vec<u64>> = (0..=t)
                    .map(|_| (0..params.m).map(|_| rng.gen_range(0..131)).collect())
                    .collect();
                let eval_g = |x: u64| -> Vec<u64> {
                    (0..params.m)
                        .map(|c| (0..=t).rev().fold(0, |acc, s| m.add(m.mul(acc, x), g[s][c])))
                        .collect()
                };
                let eval_dg = |x: u64| -> Vec<u64> {
                    (0..params.m)
                        .map(|c| {
                            (1..=t).fold(0, |acc, s| {
                                m.add(acc, m.mul(m.mul(s as u64, g[s][c]), m.pow(x, s as u64 - 1)))
                            })
                        })
                        .collect()
                };
                // F(G(·)) from plain values at wt+1 points, independent of the gradient
                let pts: Vec<u64> = (1..=(w * t + 1) as u64).collect();
                let vals: Vec<u64> = pts.iter().map(|&x| db.eval_and_gradient_raw(&eval_g(x)).unwrap().0).collect();
                let f = lagrange(m, &pts, &vals);
                let x0 = rng.gen_range(0..131);
                let (_, grad) = db.eval_and_gradient_raw(&eval_g(x0)).unwrap();
                assert_eq!(f.derivative().eval_raw(x0), m.dot(&grad, &eval_dg(x0)));
                // and the order-1 samples interpolate back to the same f
                let smp: Vec<_> = pts
                    .iter()
                    .take(k)
                    .map(|&x| {
                        let (u, grad) = db.eval_and_gradient_raw(&eval_g(x)).unwrap();
                        HermiteSample::from_raw(m, x, u, m.dot(&grad, &eval_dg(x)))
                    })
                    .collect();
                assert_eq!(hermite_interpolate(&smp).unwrap(), f);
            }
        }
    }

    fn lagrange(m: FieldModulus, xs: &[u64], ys: &[u64]) -> crate::poly::Polynomial {
        use crate::poly::Polynomial;
        let mut acc = Polynomial::zero(m);
        for (i, (&xi, &yi)) in xs.iter().zip(ys).enumerate() {
            let mut basis = Polynomial::constant(m, 1);
            let mut denom = 1;
            for (j, &xj) in xs.iter().enumerate() {
                if i != j {
                    basis = basis.mul(&Polynomial::new(m, vec![m.neg(xj), 1]));
                    denom = m.mul(denom, m.sub(xi, xj));
                }
            }
            acc = acc.add(&basis.scale(m.mul(yi, m.inv(denom).unwrap())));
        }
        acc
    }

    #[test]
    fn database_file_round_trip() {
        let m = fm(1031);
        let recs = generate_records(16, m, 1);
        let mut buf = Vec::new();
        write_database(&mut buf, m, &recs).unwrap();
        assert!(buf.starts_with(b"LDPIR1\n1031\n16\n"));
        assert_eq!(buf.len(), "LDPIR1\n1031\n16\n".len() + 32);
        let (m2, back) = read_database(&buf[..]).unwrap();
        assert_eq!((m2, back), (m, recs.clone()));
        assert_eq!(generate_records(16, m, 1), recs);
        assert!(read_database(&buf[..buf.len() - 1]).is_err());
        assert!(read_database(&b"LDPIR2\n7\n0\n"[..]).is_err());
    }
}
