//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL` line to
//! the real stdout, bypassing libtest capture, and then asserts.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use itertools::Itertools;
use ldpir::cli::{cmd_bench_comm, largest_prime_with_bits, BenchCell, BenchGrid};
use ldpir::encode::{select_params, EncodedDatabase, PirParams, Scheme};
use ldpir::error::Error;
use ldpir::listdecode::{interpolate_qbase, is_feasible};
use ldpir::oracle::{compare_decoders, privacy_enumerate, random_decoding_case, share_distribution, OracleLimits};
use ldpir::poly::order1_agreement_count;
use ldpir::protocol::{g1_list_bound_holds, g2_list_bound, DecodeMode};
use ldpir::sim::{
    comm_report, run_session, run_trials, AdversaryConfig, AdversarySpec, Knowledge, Strategy, SweepSummary, TrialRow,
};
use ldpir::{FieldModulus, HermiteSample, Polynomial};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[global_allocator]
static GLOBAL: mimalloc::MiMalloc = mimalloc::MiMalloc;

fn report(criterion: u32, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "criterion {criterion}: {status} ({detail})");
    let _ = out.flush();
}

fn fm(p: u64) -> FieldModulus {
    FieldModulus::new(p).unwrap()
}

const SWEEP_STRATEGIES: [(Strategy, Knowledge); 4] = [
    (Strategy::Silent, Knowledge::Colluding),
    (Strategy::RandomGarbage, Knowledge::Colluding),
    (Strategy::AdditiveNoise, Knowledge::Colluding),
    (Strategy::ConsistentFake, Knowledge::Omniscient),
];

// |cp| bounds for a list of `cp` candidate polynomials.
fn g1_bound_ok(cp: usize, k: usize, b: usize, wt: usize) -> bool {
    g1_list_bound_holds(cp, k, b, wt) && (2 * b <= k || cp <= k)
}

fn g2_bound_ok(cp: usize, k: usize, b: usize, wt: usize) -> bool {
    let rho = g2_list_bound(k, b, wt);
    cp <= rho && rho <= 2 * k && (2 * b <= k || cp <= k)
}

fn bound_ok(scheme: Scheme, cp: usize, k: usize, b: usize, wt: usize) -> bool {
    match scheme {
        Scheme::G1 => g1_bound_ok(cp, k, b, wt),
        Scheme::G2 => g2_bound_ok(cp, k, b, wt),
        Scheme::Wy => cp <= 1,
    }
}

fn criterion1_rows() -> Vec<(PirParams, Strategy, Vec<TrialRow>)> {
    let p = fm(131);
    let mut out = Vec::new();
    for (scheme, w) in [(Scheme::G1, 2), (Scheme::G2, 1)] {
        let params = PirParams::new(scheme, 1 << 10, 8, 6, 1, 3, w, p).unwrap();
        let db = EncodedDatabase::random(params.clone(), 101).unwrap();
        for (idx, (strategy, knowledge)) in SWEEP_STRATEGIES.into_iter().enumerate() {
            let spec = AdversarySpec {
                strategy,
                knowledge,
                seed: 1000 + idx as u64,
            };
            let rows = run_trials(&params, &db, &spec, DecodeMode::Optimized, 10_000, 7 + idx as u64).unwrap();
            out.push((params.clone(), strategy, rows));
        }
    }
    out
}

fn criterion2_cases() -> Vec<(ldpir::oracle::DecodingCase, ldpir::oracle::DecoderComparison)> {
    let limits = OracleLimits::default();
    (0..1000u64)
        .map(|seed| {
            let case = random_decoding_case(0xacce_0000 + seed);
            let cmp = compare_decoders(&case, &limits).unwrap();
            (case, cmp)
        })
        .collect()
}

#[test]
fn criterion_1_and_3_perfect_correctness_and_bounds() {
    let start = Instant::now();
    let runs = criterion1_rows();
    let mut failures = Vec::new();
    let mut bound_violations = 0;
    let mut detail = Vec::new();
    for (params, strategy, rows) in &runs {
        let s = SweepSummary::from_rows(rows);
        if s.successes != s.trials || s.max_corrupted > params.b {
            failures.push(format!("{} {strategy}: {}/{}", params.scheme, s.successes, s.trials));
        }
        bound_violations += rows
            .iter()
            .filter(|r| !bound_ok(params.scheme, r.candidates, params.k, params.b, params.wt()))
            .count();
        detail.push(format!("{}/{strategy} {}/{} worst {}", params.scheme, s.successes, s.trials, s.worst_list_size));
    }
    let cases = criterion2_cases();
    for (case, cmp) in &cases {
        let k = case.tuples.len();
        bound_violations += [&cmp.naive, &cmp.optimized]
            .iter()
            .filter(|cp| !g1_bound_ok(cp.len(), k, case.b, case.wt))
            .count();
        bound_violations += usize::from(!g2_bound_ok(cmp.interpolation.len(), k, case.b, case.wt));
    }
    report(
        1,
        failures.is_empty(),
        &format!("{} in {:.1?}", detail.join("; "), start.elapsed()),
    );
    report(
        3,
        bound_violations == 0,
        &format!(
            "{bound_violations} violations over {} sweep trials and {} oracle cases",
            runs.iter().map(|r| r.2.len()).sum::<usize>(),
            cases.len()
        ),
    );
    assert!(failures.is_empty(), "{failures:?}");
    assert_eq!(bound_violations, 0);
}

#[test]
fn criterion_2_oracle_equivalence() {
    let start = Instant::now();
    let cases = criterion2_cases();
    let mismatched: Vec<usize> = cases
        .iter()
        .enumerate()
        .filter(|(_, (_, cmp))| !cmp.all_equal())
        .map(|(i, _)| i)
        .collect();
    let primes: BTreeMap<u64, usize> = cases.iter().counts_by(|(c, _)| c.modulus.p()).into_iter().collect();
    let max_list = cases.iter().map(|(_, c)| c.brute_force.len()).max().unwrap_or(0);
    report(
        2,
        mismatched.is_empty(),
        &format!(
            "{} of {} instances agree across naive, optimized, bivariate and brute force; primes {primes:?}; largest list {max_list}; {:.1?}",
            cases.len() - mismatched.len(),
            cases.len(),
            start.elapsed()
        ),
    );
    assert!(mismatched.is_empty(), "mismatched instances {mismatched:?}");
}

#[test]
fn criterion_4_worst_list_size_at_scale() {
    let start = Instant::now();
    let trials = 100_000;
    let mut worst = BTreeMap::new();
    let mut ok = true;
    let mut detail = Vec::new();
    for p in [131, 1031] {
        for scheme in [Scheme::G1, Scheme::G2] {
            let params = select_params(1 << 16, 8, 6, 1, 3, scheme, fm(p)).unwrap();
            let db = EncodedDatabase::random(params.clone(), p).unwrap();
            let spec = AdversarySpec {
                strategy: Strategy::ConsistentFake,
                knowledge: Knowledge::Omniscient,
                seed: p ^ 0x7ab1e3,
            };
            let rows = run_trials(&params, &db, &spec, DecodeMode::Optimized, trials, p + scheme as u64).unwrap();
            let s = SweepSummary::from_rows(&rows);
            ok &= s.successes == s.trials;
            ok &= match scheme {
                Scheme::G1 => s.worst_list_size == 2,
                _ => (2..=5).contains(&s.worst_list_size),
            };
            worst.insert((scheme.to_string(), p), s.worst_list_size);
            detail.push(format!(
                "{scheme} p={p} w={} m={}: worst {} histogram {:?}",
                params.w, params.m, s.worst_list_size, s.list_size_histogram
            ));
        }
    }
    // Two distinct polynomials of degree ≤ wt agree to first order on at
    // most ⌊wt/2⌋ points; with b = k−b = 3 and wt ≤ 2, every candidate must
    // match all honest or all forged samples, so at most two survive.
    let mut out = std::io::stdout().lock();
    for d in &detail {
        let _ = writeln!(out, "    {d}");
    }
    drop(out);
    report(
        4,
        ok,
        &format!("{trials} trials per cell, worst sizes {worst:?}, {:.0?}", start.elapsed()),
    );
    assert!(ok, "{detail:?}");
}

#[test]
fn criterion_5_privacy() {
    let p = fm(5);
    let limits = OracleLimits::default();
    let (mut equal, mut distinguished, mut total) = (0, 0, 0);
    for t in [1usize, 2] {
        let ell = 4;
        let lambdas: Vec<u64> = (1..=ell as u64).collect();
        for m in 1..=3usize {
            let views = |servers: &[usize]| {
                if m == 1 {
                    // one coordinate: compare the raw secrets 0 and 1
                    (
                        share_distribution(p, &lambdas, t, &[0], servers, &limits).unwrap(),
                        share_distribution(p, &lambdas, t, &[1], servers, &limits).unwrap(),
                    )
                } else {
                    let params = PirParams::new(Scheme::Wy, m, ell, 3, t, 0, 1, p).unwrap();
                    assert_eq!(params.m, m);
                    privacy_enumerate(&params, 1, 2, servers, &limits).unwrap()
                }
            };
            for coalition in (1..=ell).combinations(t) {
                let (a, b) = views(&coalition);
                total += 1;
                equal += usize::from(a == b);
            }
            for coalition in (1..=ell).combinations(t + 1) {
                let (a, b) = views(&coalition);
                total += 1;
                distinguished += usize::from(a != b);
            }
        }
    }
    let pass = equal + distinguished == total;
    report(
        5,
        pass,
        &format!("{equal} t-coalitions identical, {distinguished} (t+1)-coalitions distinguishable, {total} checks"),
    );
    assert!(pass);
}

#[test]
fn criterion_6_communication_accounting() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut exact = 0;
    let mut configs = 0;
    while configs < 100 {
        let scheme = [Scheme::Wy, Scheme::G1, Scheme::G2][rng.gen_range(0..3)];
        let k = rng.gen_range(2..=8);
        let t = rng.gen_range(1..k);
        let b = if scheme == Scheme::Wy { 0 } else { rng.gen_range(0..=k - 2) };
        let ell = k + rng.gen_range(0..=3);
        let bits = rng.gen_range(3..=62);
        let p = fm(largest_prime_with_bits(bits).unwrap());
        let n = rng.gen_range(1..=4096);
        let params = match select_params(n, ell, k, t, b, scheme, p) {
            Ok(params) => params,
            Err(Error::InfeasibleParameters(_)) => continue,
            Err(e) => panic!("{e}"),
        };
        configs += 1;
        let db = EncodedDatabase::random(params.clone(), configs).unwrap();
        let i = rng.gen_range(1..=n);
        let t = run_session(&params, &db, i, &AdversaryConfig::honest(), DecodeMode::Optimized, configs).unwrap();
        let width = (p.bit_width() as usize).div_ceil(8);
        let formula = params.ell * (2 * params.m + 1) * width;
        let r = comm_report(&params);
        if t.success
            && t.payload_bytes() == formula
            && r.total_payload_bytes == formula
            && t.wire_bytes() == r.total_wire_bytes
        {
            exact += 1;
        }
    }
    let grid = BenchGrid {
        n: 1 << 26,
        cells: (10..=14)
            .map(|b| BenchCell {
                scheme: Scheme::G1,
                k: 20,
                b,
                t: 1,
                bit_width: 128,
            })
            .collect(),
        measure_limit: 0,
    };
    let exponents: Vec<String> = cmd_bench_comm(&grid)
        .unwrap()
        .into_iter()
        .map(|r| r.exponent.unwrap_or_default())
        .collect();
    let want = ["1/16", "1/14", "1/12", "1/10", "1/8"];
    let pass = exact == configs && exponents == want;
    report(
        6,
        pass,
        &format!("{exact}/{configs} transcripts byte-exact; vary-b exponents {exponents:?}"),
    );
    assert!(pass);
}

#[test]
fn criterion_7_agreement_lemma() {
    let m = fm(131);
    let p = m.p();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut violations, mut tight, mut structured) = (0, 0, 0);
    let random_poly = |rng: &mut ChaCha8Rng, d: usize| {
        let mut c: Vec<u64> = (0..d).map(|_| rng.gen_range(0..p)).collect();
        c.push(rng.gen_range(1..p));
        Polynomial::new(m, c)
    };
    for pair in 0..10_000 {
        let d = rng.gen_range(0..=10);
        let f = random_poly(&mut rng, d);
        let g = if pair % 5 == 0 && d >= 2 {
            // g − f = c·Π(λ−a_i)²·(λ−e): exactly ⌊d/2⌋ double roots
            structured += 1;
            let pts: Vec<u64> = sample(&mut rng, p as usize, d / 2 + 1).iter().map(|x| x as u64).collect();
            let mut h = Polynomial::constant(m, rng.gen_range(1..p));
            for &a in &pts[..d / 2] {
                let lin = Polynomial::new(m, vec![m.neg(a), 1]);
                h = h.mul(&lin).mul(&lin);
            }
            if d % 2 == 1 {
                h = h.mul(&Polynomial::new(m, vec![m.neg(pts[d / 2]), 1]));
            }
            if h.leading() == m.neg(f.leading()) {
                h = h.scale(2);
            }
            f.add(&h)
        } else {
            loop {
                let g = random_poly(&mut rng, d);
                if g != f {
                    break g;
                }
            }
        };
        assert_eq!(g.degree(), f.degree());
        let dg = g.derivative();
        let full: Vec<HermiteSample> = (0..p)
            .map(|x| HermiteSample::from_raw(m, x, g.eval_raw(x), dg.eval_raw(x)))
            .collect();
        let agree = order1_agreement_count(&f, &full);
        violations += usize::from(agree > d / 2);
        tight += usize::from(d >= 2 && agree == d / 2);
    }
    report(
        7,
        violations == 0,
        &format!("{violations} violations in 10000 pairs; {structured} structured pairs, {tight} pairs reach ⌊d/2⌋"),
    );
    assert_eq!(violations, 0);
    assert!(tight >= structured);
}

#[test]
fn criterion_8_interpolation_feasibility() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let primes = [131u64, 1031, 65521, 2_147_483_647, (1 << 61) - 1];
    let mut sound = 0;
    for _ in 0..1000 {
        let (k, b, wt) = loop {
            let k = rng.gen_range(1..=12);
            let b = rng.gen_range(0..k);
            let wt = rng.gen_range(1..=2 * (k - b));
            if is_feasible(k, wt, 2 * (k - b) - 1) {
                break (k, b, wt);
            }
        };
        let m = fm(primes[rng.gen_range(0..primes.len())]);
        let points: Vec<u64> = sample(&mut rng, m.p().min(1000) as usize - 1, k).iter().map(|x| x as u64 + 1).collect();
        let tuples: Vec<HermiteSample> = points
            .iter()
            .map(|&x| HermiteSample::from_raw(m, x, rng.gen_range(0..m.p()), rng.gen_range(0..m.p())))
            .collect();
        let cap = 2 * (k - b) - 1;
        let q = interpolate_qbase(&tuples, wt, cap).unwrap();
        let vanishes = tuples
            .iter()
            .all(|s| q.eval(s.lambda, s.alpha).is_zero() && q.qext_eval(s.lambda, s.alpha, s.beta).is_zero());
        let nonzero = q.coefficients().iter().any(|c| !c.is_zero());
        if vanishes && nonzero && q.weighted_degree().is_some_and(|d| d <= cap) {
            sound += 1;
        }
    }
    let p = fm(131);
    let selected = select_params(1 << 26, 20, 20, 1, 12, Scheme::G2, p).map(|params| params.w);
    let w4 = PirParams::new(Scheme::G2, 1 << 26, 20, 20, 1, 12, 4, p);
    let pass = sound == 1000 && matches!(selected, Ok(3)) && matches!(w4, Err(Error::InfeasibleParameters(_)));
    report(
        8,
        pass,
        &format!(
            "{sound}/1000 interpolants nonzero, vanishing and within degree; (20,12,1) selects w={:?}, w=4 rejected: {}",
            selected.as_ref().ok(),
            w4.is_err()
        ),
    );
    assert!(pass);
}
