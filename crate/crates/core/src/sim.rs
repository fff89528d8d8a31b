//! In-process multi-server simulation: adversaries, wire format, transcripts
//! and communication accounting.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use rand::distributions::{Distribution, Uniform};
use rand::seq::index::sample;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encode::{EncodedDatabase, PirParams, Scheme};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldModulus};
use crate::poly::{HermiteSample, Polynomial};
use crate::protocol::{derive_tuples, query_gen, reconstruct, Answer, Aux, DecodeMode, OutputList, Query};

pub const QUERY_TAG: u8 = 0x51;
pub const ANSWER_TAG: u8 = 0x41;
pub const QUERY_HEADER_BYTES: usize = 5;
pub const ANSWER_HEADER_BYTES: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    Honest,
    Silent,
    RandomGarbage,
    AdditiveNoise,
    ConsistentFake,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Knowledge {
    /// Each corrupted server acts alone and never sees the client's randomness.
    Oblivious,
    /// Corrupted servers coordinate but never see the client's randomness.
    Colluding,
    /// Corrupted servers coordinate and see the client's randomness.
    Omniscient,
}

macro_rules! name_table {
    ($ty:ty, $what:literal, $($v:ident),+) => {
        impl std::fmt::Display for $ty {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                match self { $(Self::$v => f.write_str(stringify!($v)),)+ }
            }
        }
        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                $(if s.eq_ignore_ascii_case(stringify!($v)) { return Ok(Self::$v); })+
                Err(Error::InvalidConfig(format!(concat!("unknown ", $what, " {:?}"), s)))
            }
        }
    };
}
name_table!(Strategy, "strategy", Honest, Silent, RandomGarbage, AdditiveNoise, ConsistentFake);
name_table!(Knowledge, "knowledge", Oblivious, Colluding, Omniscient);

/// A concrete adversary for one session. Server indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversaryConfig {
    pub strategy: Strategy,
    pub corrupt_set: BTreeSet<usize>,
    pub silent_set: BTreeSet<usize>,
    pub knowledge: Knowledge,
    pub seed: u64,
}

impl AdversaryConfig {
    pub fn honest() -> Self {
        Self {
            strategy: Strategy::Honest,
            corrupt_set: BTreeSet::new(),
            silent_set: BTreeSet::new(),
            knowledge: Knowledge::Oblivious,
            seed: 0,
        }
    }

    /// `|corrupt| ≤ b`, at least `k` servers answer, indices in `1..=ℓ`,
    /// and no server is both silent and corrupt.
    pub fn validate(&self, params: &PirParams) -> Result<()> {
        let ell = params.ell;
        if let Some(&j) = self
            .corrupt_set
            .iter()
            .chain(&self.silent_set)
            .find(|&&j| j == 0 || j > ell)
        {
            return Err(Error::IndexOutOfRange { index: j, max: ell });
        }
        if self.corrupt_set.len() > params.b {
            return Err(Error::InvalidConfig(format!(
                "{} corrupt servers exceed b = {}",
                self.corrupt_set.len(),
                params.b
            )));
        }
        if ell - self.silent_set.len() < params.k {
            return Err(Error::InsufficientResponses {
                got: ell - self.silent_set.len(),
                need: params.k,
            });
        }
        if !self.corrupt_set.is_disjoint(&self.silent_set) {
            return Err(Error::InvalidConfig("a server is both silent and corrupt".into()));
        }
        Ok(())
    }
}

/// Strategy, knowledge and seed; the server sets are drawn per session.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversarySpec {
    pub strategy: Strategy,
    pub knowledge: Knowledge,
    pub seed: u64,
}

impl AdversarySpec {
    /// Silent silences `ℓ−k` servers. Every other non-honest strategy
    /// silences up to `ℓ−k` servers and corrupts `b` of the `k` responders
    /// the client will actually use.
    pub fn plan(&self, params: &PirParams, session_seed: u64) -> AdversaryConfig {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(session_seed);
        let (ell, k) = (params.ell, params.k);
        let mut cfg = AdversaryConfig {
            strategy: self.strategy,
            corrupt_set: BTreeSet::new(),
            silent_set: BTreeSet::new(),
            knowledge: self.knowledge,
            seed: rng.next_u64(),
        };
        match self.strategy {
            Strategy::Honest => {}
            Strategy::Silent => {
                cfg.silent_set = sample(&mut rng, ell, ell - k).iter().map(|j| j + 1).collect();
            }
            _ => {
                let s = rng.gen_range(0..=ell - k);
                cfg.silent_set = sample(&mut rng, ell, s).iter().map(|j| j + 1).collect();
                let used: Vec<usize> = (1..=ell).filter(|j| !cfg.silent_set.contains(j)).take(k).collect();
                cfg.corrupt_set = sample(&mut rng, k, params.b).iter().map(|j| used[j]).collect();
            }
        }
        cfg
    }
}

fn write_elems(out: &mut Vec<u8>, vals: &[u64], width: usize) {
    let start = out.len();
    out.resize(start + vals.len() * width, 0);
    let body = &mut out[start..];
    if width == 1 {
        body.iter_mut().zip(vals).for_each(|(b, &v)| *b = v as u8);
        return;
    }
    for (chunk, &v) in body.chunks_exact_mut(width).zip(vals) {
        chunk.copy_from_slice(&v.to_le_bytes()[..width]);
    }
}

fn read_elems(bytes: &[u8], width: usize, modulus: FieldModulus) -> Result<Vec<u64>> {
    if bytes.len() % width != 0 {
        return Err(Error::WireFormat(format!(
            "payload of {} bytes is not a multiple of {width}",
            bytes.len()
        )));
    }
    bytes
        .chunks_exact(width)
        .map(|c| {
            let mut buf = [0u8; 8];
            buf[..width].copy_from_slice(c);
            let v = u64::from_le_bytes(buf);
            if v >= modulus.p() {
                return Err(Error::WireFormat(format!("element {v} not reduced mod {}", modulus.p())));
            }
            Ok(v)
        })
        .collect()
}

/// `[0x51][m: u32 LE][m elements LE]`.
pub fn serialize_query(q: &Query, modulus: FieldModulus) -> Vec<u8> {
    let width = modulus.element_bytes();
    let mut out = Vec::with_capacity(QUERY_HEADER_BYTES + q.len() * width);
    out.push(QUERY_TAG);
    out.extend_from_slice(&(q.len() as u32).to_le_bytes());
    write_elems(&mut out, q.values(), width);
    out
}

pub fn deserialize_query(bytes: &[u8], modulus: FieldModulus) -> Result<Query> {
    if bytes.len() < QUERY_HEADER_BYTES || bytes[0] != QUERY_TAG {
        return Err(Error::WireFormat("bad query header".into()));
    }
    let m = u32::from_le_bytes(bytes[1..5].try_into().expect("4 bytes")) as usize;
    let width = modulus.element_bytes();
    let body = &bytes[QUERY_HEADER_BYTES..];
    if Some(body.len()) != m.checked_mul(width) {
        return Err(Error::WireFormat(format!(
            "query declares {m} elements but carries {} bytes",
            body.len()
        )));
    }
    Query::new(modulus, read_elems(body, width, modulus)?)
}

/// `[0x41][0x01][u, v_1..v_m]`, or `[0x41][0x00]` when silent.
pub fn serialize_answer(a: &Answer, modulus: FieldModulus) -> Vec<u8> {
    match a {
        Answer::Silent => vec![ANSWER_TAG, 0x00],
        Answer::Reply { u, v } => {
            let width = modulus.element_bytes();
            let mut out = Vec::with_capacity(ANSWER_HEADER_BYTES + (v.len() + 1) * width);
            out.extend_from_slice(&[ANSWER_TAG, 0x01]);
            write_elems(&mut out, std::slice::from_ref(u), width);
            write_elems(&mut out, v, width);
            out
        }
    }
}

pub fn deserialize_answer(bytes: &[u8], modulus: FieldModulus) -> Result<Answer> {
    match bytes {
        [ANSWER_TAG, 0x00] => Ok(Answer::Silent),
        [ANSWER_TAG, 0x01, body @ ..] => {
            let vals = read_elems(body, modulus.element_bytes(), modulus)?;
            if vals.len() < 2 {
                return Err(Error::WireFormat("answer needs at least two elements".into()));
            }
            Ok(Answer::Reply {
                u: vals[0],
                v: vals[1..].to_vec(),
            })
        }
        _ => Err(Error::WireFormat("bad answer header".into())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Message {
    Query(Query),
    Answer(Answer),
}

pub fn serialize_msg(msg: &Message, modulus: FieldModulus) -> Vec<u8> {
    match msg {
        Message::Query(q) => serialize_query(q, modulus),
        Message::Answer(a) => serialize_answer(a, modulus),
    }
}

pub fn deserialize_msg(bytes: &[u8], modulus: FieldModulus) -> Result<Message> {
    match bytes.first() {
        Some(&QUERY_TAG) => deserialize_query(bytes, modulus).map(Message::Query),
        Some(&ANSWER_TAG) => deserialize_answer(bytes, modulus).map(Message::Answer),
        _ => Err(Error::WireFormat("unknown message tag".into())),
    }
}

/// Analytic message sizes for one retrieval. Payload excludes headers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommReport {
    pub bit_width: u32,
    pub element_width_bytes: usize,
    pub ell: usize,
    pub m: usize,
    pub per_server_query_elems: usize,
    pub per_server_answer_elems: usize,
    pub per_server_payload_bytes: usize,
    pub total_payload_bytes: usize,
    /// Payload plus one query and one reply header per server.
    pub total_wire_bytes: usize,
    /// Field elements moved per retrieved element: `ℓ(2m+1)`.
    pub cc_per_bit: usize,
}

pub fn comm_report(params: &PirParams) -> CommReport {
    comm_report_for_width(params.ell, params.m, params.modulus.bit_width())
}

/// Formula mode: any element width, including ones not executable here.
pub fn comm_report_for_width(ell: usize, m: usize, bit_width: u32) -> CommReport {
    let width = (bit_width as usize).div_ceil(8);
    let per_server = (2 * m + 1) * width;
    CommReport {
        bit_width,
        element_width_bytes: width,
        ell,
        m,
        per_server_query_elems: m,
        per_server_answer_elems: m + 1,
        per_server_payload_bytes: per_server,
        total_payload_bytes: ell * per_server,
        total_wire_bytes: ell * (per_server + QUERY_HEADER_BYTES + ANSWER_HEADER_BYTES),
        cc_per_bit: ell * (2 * m + 1),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ServerRecord {
    pub server: usize,
    pub query_bytes: Vec<u8>,
    pub answer_bytes: Vec<u8>,
    pub answer: Answer,
    /// Delivered answer differs from what an honest server would send.
    pub corrupted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub scheme: Scheme,
    pub index: usize,
    pub seed: u64,
    pub adversary: AdversaryConfig,
    pub servers: Vec<ServerRecord>,
    pub responders: Vec<usize>,
    pub tuples: Vec<HermiteSample>,
    pub output: OutputList,
    pub true_value: FieldElement,
    /// `f̂(0)` for an omniscient consistent fake.
    pub fake_value: Option<FieldElement>,
    pub success: bool,
}

impl Transcript {
    pub fn wire_bytes(&self) -> usize {
        self.servers
            .iter()
            .map(|s| s.query_bytes.len() + s.answer_bytes.len())
            .sum()
    }

    /// Bytes excluding message headers.
    pub fn payload_bytes(&self) -> usize {
        self.servers
            .iter()
            .map(|s| {
                s.query_bytes.len() - QUERY_HEADER_BYTES + s.answer_bytes.len() - ANSWER_HEADER_BYTES
            })
            .sum()
    }

    pub fn corrupted_count(&self) -> usize {
        self.servers.iter().filter(|s| s.corrupted).count()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }
}

fn random_nonzero(rng: &mut ChaCha8Rng, p: u64) -> u64 {
    rng.gen_range(1..p)
}

// A sparse database difference: (0-based record, delta).
type SparseDelta = Vec<(usize, u64)>;

fn random_sparse_delta(rng: &mut ChaCha8Rng, db: &EncodedDatabase) -> SparseDelta {
    let n = db.params().n;
    let p = db.params().modulus.p();
    let entries = rng.gen_range(1..=3.min(n));
    sample(rng, n, entries)
        .iter()
        .map(|r| (r, random_nonzero(rng, p)))
        .collect()
}

// F and ∇F of the database that is zero except for `delta`.
fn sparse_answer(db: &EncodedDatabase, delta: &SparseDelta, q: &[u64]) -> Result<(u64, Vec<u64>)> {
    let fm = db.params().modulus;
    let mut u = 0;
    let mut v = vec![0; q.len()];
    for &(r, d) in delta {
        let supp = db.support(r + 1)?;
        let mono = supp.iter().fold(d, |acc, &c| fm.mul(acc, q[c - 1]));
        u = fm.add(u, mono);
        for &c in &supp {
            let partial = supp
                .iter()
                .filter(|&&c2| c2 != c)
                .fold(d, |acc, &c2| fm.mul(acc, q[c2 - 1]));
            v[c - 1] = fm.add(v[c - 1], partial);
        }
    }
    Ok((u, v))
}

fn random_poly(rng: &mut ChaCha8Rng, modulus: FieldModulus, deg: usize) -> Polynomial {
    let p = modulus.p();
    Polynomial::new(modulus, (0..=deg).map(|_| rng.gen_range(0..p)).collect())
}

// Rewrites `u, v` so that the derived sample moves by `(δ(λ), δ'(λ))`.
// When `G'(λ) = 0` the derivative part cannot be shifted and is left alone.
fn shift_answer(aux: &Aux, lambda: u64, delta: &Polynomial, ddelta: &Polynomial, u: &mut u64, v: &mut [u64]) {
    let fm = aux.modulus;
    *u = fm.add(*u, delta.eval_raw(lambda));
    let found = (0..v.len()).map(|c| (c, aux.g_prime_coord(lambda, c))).find(|&(_, g)| g != 0);
    if let Some((c, g)) = found {
        let need = ddelta.eval_raw(lambda);
        let inv = fm.inv(g).expect("nonzero");
        v[c] = fm.add(v[c], fm.mul(need, inv));
    }
}

/// One retrieval of record `i` against `ℓ` simulated servers.
pub fn run_session(
    params: &PirParams,
    db: &EncodedDatabase,
    i: usize,
    adversary: &AdversaryConfig,
    mode: DecodeMode,
    seed: u64,
) -> Result<Transcript> {
    adversary.validate(params)?;
    let fm = params.modulus;
    let p = fm.p();
    let (queries, aux) = query_gen(params, i, seed)?;

    let mut adv_rng = ChaCha8Rng::seed_from_u64(adversary.seed);
    let mut fake_value = None;
    let shared_delta = random_sparse_delta(&mut adv_rng, db);
    let fake_poly = if adversary.strategy == Strategy::ConsistentFake && adversary.knowledge == Knowledge::Omniscient
    {
        let wt = params.wt();
        let mut delta = random_poly(&mut adv_rng, fm, wt);
        if delta.coeff(0).is_zero() {
            let mut c = delta.coeffs().to_vec();
            c.resize(wt + 1, 0);
            c[0] = random_nonzero(&mut adv_rng, p);
            delta = Polynomial::new(fm, c);
        }
        fake_value = Some(db.record(i)? + delta.coeff(0));
        let d = delta.derivative();
        Some((delta, d))
    } else {
        None
    };

    let mut wire = Vec::with_capacity(params.ell);
    let mut answers = Vec::with_capacity(params.ell);
    for (idx, q) in queries.iter().enumerate() {
        let j = idx + 1;
        let lambda = params.lambdas[idx];
        let mut honest = None;
        let delivered = if adversary.silent_set.contains(&j) {
            Answer::Silent
        } else {
            let (mut u, mut v) = db.eval_and_gradient_raw(q.values())?;
            if adversary.corrupt_set.contains(&j) {
                honest = Some(Answer::Reply { u, v: v.clone() });
                match adversary.strategy {
                    Strategy::Honest | Strategy::Silent => {}
                    Strategy::RandomGarbage => {
                        u = adv_rng.gen_range(0..p);
                        let dist = Uniform::new(0, p);
                        v.iter_mut().for_each(|x| *x = dist.sample(&mut adv_rng));
                    }
                    Strategy::AdditiveNoise => {
                        u = fm.add(u, random_nonzero(&mut adv_rng, p));
                        let dist = Uniform::new(0, p);
                        v.iter_mut().for_each(|x| *x = fm.add(*x, dist.sample(&mut adv_rng)));
                    }
                    Strategy::ConsistentFake => match (&fake_poly, adversary.knowledge) {
                        (Some((delta, ddelta)), _) => shift_answer(&aux, lambda, delta, ddelta, &mut u, &mut v),
                        (None, Knowledge::Colluding) => {
                            let (du, dv) = sparse_answer(db, &shared_delta, q.values())?;
                            u = fm.add(u, du);
                            v.iter_mut().zip(dv).for_each(|(x, d)| *x = fm.add(*x, d));
                        }
                        (None, _) => {
                            let own = random_sparse_delta(&mut adv_rng, db);
                            let (du, dv) = sparse_answer(db, &own, q.values())?;
                            u = fm.add(u, du);
                            v.iter_mut().zip(dv).for_each(|(x, d)| *x = fm.add(*x, d));
                        }
                    },
                }
            }
            Answer::Reply { u, v }
        };
        let corrupted = honest.is_some_and(|h| h != delivered);
        wire.push((serialize_query(q, fm), serialize_answer(&delivered, fm), corrupted));
        answers.push(delivered);
    }

    let (responders, tuples) = derive_tuples(&aux, params.k, &answers)?;
    let output = reconstruct(params, &tuples, mode)?;
    let servers = wire
        .into_iter()
        .zip(answers)
        .enumerate()
        .map(|(idx, ((query_bytes, answer_bytes, corrupted), answer))| ServerRecord {
            server: idx + 1,
            query_bytes,
            answer_bytes,
            answer,
            corrupted,
        })
        .collect();
    let true_value = db.record(i)?;
    Ok(Transcript {
        scheme: params.scheme,
        index: i,
        seed,
        adversary: adversary.clone(),
        servers,
        responders,
        tuples,
        success: output.contains(true_value),
        output,
        true_value,
        fake_value,
    })
}

/// Per-session seed derived from a sweep seed.
pub fn trial_seed(base: u64, trial: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(trial);
    rng.next_u64()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial: u64,
    pub seed: u64,
    pub index: usize,
    /// Distinct candidate values `f̃(0)`.
    pub list_size: usize,
    /// Distinct candidate polynomials.
    pub candidates: usize,
    pub success: bool,
    pub corrupted: usize,
    pub payload_bytes: usize,
    pub wire_bytes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub trials: u64,
    pub successes: u64,
    pub worst_list_size: usize,
    pub worst_candidates: usize,
    pub max_wire_bytes: usize,
    pub max_corrupted: usize,
    /// List size → number of trials.
    pub list_size_histogram: BTreeMap<usize, u64>,
    /// First failing trial's seed.
    pub first_failure_seed: Option<u64>,
}

impl SweepSummary {
    pub fn from_rows(rows: &[TrialRow]) -> Self {
        let mut hist = BTreeMap::new();
        for r in rows {
            *hist.entry(r.list_size).or_insert(0) += 1;
        }
        Self {
            trials: rows.len() as u64,
            successes: rows.iter().filter(|r| r.success).count() as u64,
            worst_list_size: rows.iter().map(|r| r.list_size).max().unwrap_or(0),
            worst_candidates: rows.iter().map(|r| r.candidates).max().unwrap_or(0),
            max_wire_bytes: rows.iter().map(|r| r.wire_bytes).max().unwrap_or(0),
            max_corrupted: rows.iter().map(|r| r.corrupted).max().unwrap_or(0),
            list_size_histogram: hist,
            first_failure_seed: rows.iter().find(|r| !r.success).map(|r| r.seed),
        }
    }
}

/// Runs `trials` sessions with per-trial index, seed and adversary plan.
/// Rows come back in trial order regardless of scheduling.
pub fn run_trials(
    params: &PirParams,
    db: &EncodedDatabase,
    spec: &AdversarySpec,
    mode: DecodeMode,
    trials: u64,
    base_seed: u64,
) -> Result<Vec<TrialRow>> {
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let seed = trial_seed(base_seed, trial);
            let i = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_1dec).gen_range(1..=params.n);
            let adv = spec.plan(params, seed);
            let t = run_session(params, db, i, &adv, mode, seed)?;
            Ok(TrialRow {
                trial,
                seed,
                index: i,
                list_size: t.output.len(),
                candidates: t.output.candidates.len(),
                success: t.success,
                corrupted: t.corrupted_count(),
                payload_bytes: t.payload_bytes(),
                wire_bytes: t.wire_bytes(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::select_params;

    fn fm(p: u64) -> FieldModulus {
        FieldModulus::new(p).unwrap()
    }

    fn setup(scheme: Scheme, w_override: Option<usize>) -> (PirParams, EncodedDatabase) {
        let mut params = select_params(1 << 10, 8, 6, 1, 3, scheme, fm(131)).unwrap();
        if let Some(w) = w_override {
            params = PirParams::new(scheme, 1 << 10, 8, 6, 1, 3, w, fm(131)).unwrap();
        }
        let db = EncodedDatabase::random(params.clone(), 7).unwrap();
        (params, db)
    }

    #[test]
    fn wire_sizes() {
        let m = fm(131);
        let q = Query::new(m, vec![130; 363]).unwrap();
        assert_eq!(serialize_query(&q, m).len(), 363 + 5);
        let a = Answer::Reply { u: 1, v: vec![2; 363] };
        assert_eq!(serialize_answer(&a, m).len(), 364 + 2);
        assert_eq!(serialize_answer(&Answer::Silent, m), vec![0x41, 0x00]);
    }

    #[test]
    fn wire_golden_bytes() {
        let m = fm(1031);
        let q = Query::new(m, vec![1, 1030]).unwrap();
        assert_eq!(serialize_query(&q, m), vec![0x51, 2, 0, 0, 0, 1, 0, 0x06, 0x04]);
        let a = Answer::Reply { u: 258, v: vec![0] };
        assert_eq!(serialize_answer(&a, m), vec![0x41, 0x01, 0x02, 0x01, 0, 0]);
    }

    #[test]
    fn wire_rejects_malformed() {
        let m = fm(131);
        for bad in [&[][..], &[0x51, 1, 0, 0][..], &[0x51, 2, 0, 0, 0, 1][..], &[0x41][..], &[0x41, 0x02][..], &[0x41, 0x01, 5][..], &[0x41, 0x01, 200, 1][..], &[0x00, 0x00][..]] {
            assert!(matches!(deserialize_msg(bad, m), Err(Error::WireFormat(_))), "{bad:?}");
        }
    }

    #[test]
    fn comm_examples() {
        let params = select_params(1 << 16, 8, 6, 1, 3, Scheme::G1, fm(131)).unwrap();
        let r = comm_report(&params);
        assert_eq!((r.m, r.total_payload_bytes, r.cc_per_bit), (363, 5816, 5816));
        let wide = comm_report_for_width(8, 363, 14);
        assert_eq!(wide.total_payload_bytes, 2 * r.total_payload_bytes);
        assert_eq!(wide.cc_per_bit, r.cc_per_bit);
        assert_eq!(comm_report_for_width(1, 30, 128).per_server_payload_bytes, 976);
    }

    #[test]
    fn honest_session() {
        for scheme in [Scheme::G1, Scheme::G2] {
            let (params, db) = setup(scheme, None);
            let t = run_session(&params, &db, 17, &AdversaryConfig::honest(), DecodeMode::Optimized, 3).unwrap();
            assert_eq!(t.output.values, vec![db.record(17).unwrap()]);
            assert_eq!(t.corrupted_count(), 0);
            assert_eq!(t.payload_bytes(), comm_report(&params).total_payload_bytes);
            assert_eq!(t.wire_bytes(), comm_report(&params).total_wire_bytes);
        }
    }

    #[test]
    fn silent_servers_are_skipped() {
        let (params, db) = setup(Scheme::G1, None);
        let adv = AdversaryConfig {
            strategy: Strategy::Silent,
            silent_set: BTreeSet::from([2, 5]),
            ..AdversaryConfig::honest()
        };
        let t = run_session(&params, &db, 1000, &adv, DecodeMode::Naive, 9).unwrap();
        assert_eq!(t.responders, vec![1, 3, 4, 6, 7, 8]);
        assert!(t.success);
    }

    #[test]
    fn consistent_fake_gives_two_values() {
        let (params, db) = setup(Scheme::G1, Some(2));
        let adv = AdversaryConfig {
            strategy: Strategy::ConsistentFake,
            corrupt_set: BTreeSet::from([4, 5, 6]),
            silent_set: BTreeSet::new(),
            knowledge: Knowledge::Omniscient,
            seed: 11,
        };
        for seed in 0..20 {
            let t = run_session(&params, &db, 1 + seed as usize * 31, &adv, DecodeMode::Optimized, seed).unwrap();
            let mut want = vec![t.true_value, t.fake_value.unwrap()];
            want.sort();
            assert_eq!(t.output.values, want);
            assert_eq!(t.corrupted_count(), 3);
        }
    }

    #[test]
    fn every_strategy_keeps_the_record() {
        for scheme in [Scheme::G1, Scheme::G2] {
            let (params, db) = setup(scheme, None);
            for strategy in [Strategy::Silent, Strategy::RandomGarbage, Strategy::AdditiveNoise, Strategy::ConsistentFake] {
                for knowledge in [Knowledge::Oblivious, Knowledge::Colluding, Knowledge::Omniscient] {
                    let spec = AdversarySpec { strategy, knowledge, seed: 5 };
                    let rows = run_trials(&params, &db, &spec, DecodeMode::Optimized, 30, 1).unwrap();
                    let s = SweepSummary::from_rows(&rows);
                    assert_eq!(s.successes, 30, "{scheme} {strategy} {knowledge}");
                    assert!(s.max_corrupted <= params.b);
                }
            }
        }
    }

    #[test]
    fn sessions_are_deterministic() {
        let (params, db) = setup(Scheme::G2, None);
        let spec = AdversarySpec {
            strategy: Strategy::RandomGarbage,
            knowledge: Knowledge::Colluding,
            seed: 2,
        };
        let adv = spec.plan(&params, 77);
        let a = run_session(&params, &db, 5, &adv, DecodeMode::Naive, 77).unwrap();
        let b = run_session(&params, &db, 5, &adv, DecodeMode::Naive, 77).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    }

    #[test]
    fn invalid_adversaries_rejected() {
        let (params, db) = setup(Scheme::G1, None);
        let mut adv = AdversaryConfig::honest();
        adv.corrupt_set = BTreeSet::from([1, 2, 3, 4]);
        assert!(run_session(&params, &db, 1, &adv, DecodeMode::Naive, 0).is_err());
        let mut adv = AdversaryConfig::honest();
        adv.silent_set = BTreeSet::from([1, 2, 3]);
        assert!(matches!(
            run_session(&params, &db, 1, &adv, DecodeMode::Naive, 0),
            Err(Error::InsufficientResponses { got: 5, need: 6 })
        ));
        let mut adv = AdversaryConfig::honest();
        adv.silent_set = BTreeSet::from([9]);
        assert!(adv.validate(&params).is_err());
    }
}
