//! Acceptance suite. Each test checks one criterion at its pinned tolerance
//! and prints a single PASS/FAIL line (visible with `--nocapture`).

use std::io::Write;
use std::time::{Duration, Instant};

use cfmap::metric::weight;
use cfmap::{
    alternate_is_noncanonical, continuity_probe, convergents, dist, endpoint_probe, eval, expand,
    fib, fib_binet_check, forget, fundamental_interval, irrational_probe, preimage, rat, rho,
    tail_bound, Enclosure, ExtDigit, Preimage, Rational, Seq, Side, Stream, Value, Word,
};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn r(p: i64, q: i64) -> Rational {
    rat(p, q).unwrap()
}

fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + stream)
}

fn verdict(
    id: u32,
    name: &str,
    cases: usize,
    failures: &[String],
    started: Instant,
    budget: Duration,
) {
    let elapsed = started.elapsed();
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    // Written to the raw handle so the verdict shows up even when libtest
    // captures output.
    let mut report = format!(
        "criterion {id:>2} [{status}] {name}: {cases} cases, {} violations, {:.2?} (budget {:?})\n",
        failures.len(),
        elapsed,
        budget
    );
    for f in failures.iter().take(5) {
        report.push_str(&format!("    counterexample: {f}\n"));
    }
    let _ = std::io::stderr().lock().write_all(report.as_bytes());
    assert!(
        failures.is_empty(),
        "criterion {id} ({name}) failed: {:?}",
        &failures[..failures.len().min(5)]
    );
}

fn exact(v: Value) -> Rational {
    match v {
        Value::Exact(x) => x,
        Value::Enclosure(e) => panic!("expected an exact value, got {e}"),
    }
}

fn exact_dist(a: &Seq, b: &Seq) -> Rational {
    dist(a, b)
        .unwrap()
        .exact()
        .expect("finitely supported")
        .clone()
}

fn ext(d: u64) -> ExtDigit {
    ExtDigit::finite(d).unwrap()
}

/// Length `0..=max_len`, digits `1..=max_digit`, each position `∞` with
/// probability `p_inf`.
fn random_general(rng: &mut impl Rng, max_len: usize, max_digit: u64, p_inf: f64) -> Vec<ExtDigit> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| {
            if rng.gen_bool(p_inf) {
                ExtDigit::Infinite
            } else {
                ext(rng.gen_range(1..=max_digit))
            }
        })
        .collect()
}

/// A second sequence sharing a random prefix with `base`, so pairs agree on
/// their first few digits as often as they differ at position 1.
fn perturb(
    rng: &mut impl Rng,
    base: &[ExtDigit],
    max_len: usize,
    max_digit: u64,
    p_inf: f64,
) -> Vec<ExtDigit> {
    let keep = rng.gen_range(0..=base.len());
    let mut out = base[..keep].to_vec();
    let extra = random_general(rng, max_len.saturating_sub(keep), max_digit, p_inf);
    out.extend(extra);
    out
}

#[test]
fn criterion_01_round_trip() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut cases = 0;
    for q in 1..=500i64 {
        for p in 0..=q {
            if p.gcd(&q) != 1 {
                continue;
            }
            cases += 1;
            let x = r(p, q);
            let back = exact(eval(&Seq::Word(expand(&x).unwrap())));
            if back != x {
                failures.push(format!("{x} -> {back}"));
            }
        }
    }
    verdict(
        1,
        "eval(expand(p/q)) = p/q, q ≤ 500",
        cases,
        &failures,
        started,
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_02_lipschitz() {
    let started = Instant::now();
    let mut rng = rng(2);
    let mut failures = Vec::new();
    let n = 100_000;
    for i in 0..n {
        let a = random_general(&mut rng, 12, 50, 0.1);
        let b = if i % 2 == 0 {
            random_general(&mut rng, 12, 50, 0.1)
        } else {
            perturb(&mut rng, &a, 12, 50, 0.1)
        };
        let (s, t) = (Seq::general(a), Seq::general(b));
        let gap = (exact(eval(&s)) - exact(eval(&t))).abs();
        let d = exact_dist(&s, &t);
        if gap > d {
            failures.push(format!("{s} {t}: |Δφ| = {gap} > ρ = {d}"));
        }
    }
    verdict(
        2,
        "|φ̃(s) − φ̃(t)| ≤ ρ^ℕ(s, t)",
        n,
        &failures,
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_03_metric_axioms() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut pts: Vec<ExtDigit> = (1..=20).map(ext).collect();
    pts.push(ExtDigit::Infinite);
    let mut cases = 0;
    for m in &pts {
        for n in &pts {
            let mn = rho(m, n);
            if mn < Rational::zero() || mn.is_zero() != (m == n) || mn != rho(n, m) {
                failures.push(format!("ρ({m}, {n}) = {mn}"));
            }
            for p in &pts {
                cases += 1;
                if rho(m, p) > &mn + &rho(n, p) {
                    failures.push(format!("triangle ρ({m},{p}) > ρ({m},{n}) + ρ({n},{p})"));
                }
            }
        }
    }

    let mut rng = rng(3);
    let word = |rng: &mut ChaCha8Rng, base: Option<&[ExtDigit]>| {
        let digits = match base {
            Some(b) => perturb(rng, b, 12, 50, 0.0),
            None => random_general(rng, 12, 50, 0.0),
        };
        Seq::general(digits)
    };
    for _ in 0..10_000 {
        cases += 1;
        let a = word(&mut rng, None);
        let a_digits: Vec<ExtDigit> = (1..=a.support().unwrap()).map(|k| a.digit(k)).collect();
        let b = word(&mut rng, Some(&a_digits));
        let c = word(&mut rng, Some(&a_digits));
        let (ab, bc, ac) = (exact_dist(&a, &b), exact_dist(&b, &c), exact_dist(&a, &c));
        if ac > &ab + &bc {
            failures.push(format!("triangle {a} {b} {c}"));
        }
        if ab != exact_dist(&b, &a) || ab.is_zero() != (a == b) {
            failures.push(format!("symmetry/identity {a} {b}"));
        }
    }
    verdict(
        3,
        "ρ and ρ^ℕ metric axioms",
        cases,
        &failures,
        started,
        Duration::from_secs(20),
    );
}

/// Minimal polynomial `a x² + b x + c` of the purely periodic continued
/// fraction with the given period, from `x = (p_m + x p_{m-1})/(q_m + x q_{m-1})`.
fn periodic_polynomial(period: &[u64]) -> [BigInt; 3] {
    let (mut p_prev, mut p) = (BigInt::one(), BigInt::zero());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    for &d in period {
        let d = BigInt::from(d);
        (p_prev, p) = (p.clone(), &d * &p + &p_prev);
        (q_prev, q) = (q.clone(), &d * &q + &q_prev);
    }
    [q_prev, q - p_prev, -p]
}

fn poly_at(poly: &[BigInt; 3], x: &Rational) -> Rational {
    let [a, b, c] = poly;
    let a = Rational::from(a.clone());
    let b = Rational::from(b.clone());
    let c = Rational::from(c.clone());
    a * x * x + b * x + c
}

/// The unique positive root lies in `[lo, hi]` iff the polynomial changes
/// sign (or vanishes) across it; the other root is negative.
fn encloses_root(poly: &[BigInt; 3], e: &Enclosure) -> bool {
    let zero = Rational::zero();
    poly_at(poly, &e.lo) * poly_at(poly, &e.hi) <= zero && e.lo >= zero
}

#[test]
fn criterion_04_convergent_bounds() {
    let started = Instant::now();
    let mut rng = rng(4);
    let mut failures = Vec::new();
    let mut cases = 0;
    let fibs: Vec<BigUint> = (0..=40).map(fib).collect();

    for _ in 0..10_000 {
        cases += 1;
        let len = rng.gen_range(1..=15);
        let digits: Vec<u64> = (0..len)
            .map(|_| {
                if rng.gen_bool(0.3) {
                    1
                } else {
                    rng.gen_range(1..=30)
                }
            })
            .collect();
        let s = Seq::Word(Word::of(&digits));
        let table = convergents(&s, len).unwrap();
        for k in 1..=len {
            let q = table.q(k as isize);
            let all_ones = digits[..k].iter().all(|&d| d == 1);
            if q < &fibs[k + 1] || (q == &fibs[k + 1]) != all_ones {
                failures.push(format!("{s}: q*_{k} = {q}, F_{} = {}", k + 1, fibs[k + 1]));
            }
        }
    }

    let ones = Stream::of(&[], &[1], 25);
    let table = convergents(&Seq::Stream(ones.clone()), 25).unwrap();
    for k in 1..=25usize {
        cases += 1;
        if table.q(k as isize) != &fibs[k + 1] {
            failures.push(format!(
                "all-ones q*_{k} = {} ≠ F_{}",
                table.q(k as isize),
                k + 1
            ));
        }
    }

    // |φ − φ_k| ≤ 1/(q*_k q*_{k+1}) through enclosures of known quadratic roots.
    let mut periods: Vec<Vec<u64>> = vec![vec![1], vec![2], vec![1, 2], vec![3, 1, 4]];
    for _ in 0..20 {
        let m = rng.gen_range(1..=4);
        periods.push((0..m).map(|_| rng.gen_range(1..=9)).collect());
    }
    for period in &periods {
        let poly = periodic_polynomial(period);
        for budget in 2..=25usize {
            cases += 1;
            let stream = Stream::of(&[], period, budget);
            let Value::Enclosure(e) = eval(&Seq::Stream(stream.clone())) else {
                unreachable!()
            };
            let k = e.depth as isize;
            let t = convergents(&Seq::Stream(stream), budget).unwrap();
            let bound = Rational::new(1.into(), BigInt::from(t.q(k) * t.q(k + 1))).unwrap();
            if !encloses_root(&poly, &e) || e.width() > bound {
                failures.push(format!(
                    "period {period:?}, budget {budget}: {e}, bound {bound}"
                ));
            }
        }
    }
    verdict(
        4,
        "q*_k ≥ F_{k+1}, |φ − φ_k| ≤ 1/(q*_k q*_{k+1})",
        cases,
        &failures,
        started,
        Duration::from_secs(20),
    );
}

/// Every word of length `≤ max_len` with digits `≤ max_digit` whose value is
/// `p/q`. Subtrees are skipped only when every extension of the prefix
/// evaluates outside the closed interval between `φ(prefix)` and
/// `φ(prefix ⧺ [1])`, which cannot contain `p/q`.
fn brute_force_preimages(p: i64, q: i64, max_len: usize, max_digit: i64) -> Vec<Vec<i64>> {
    fn cmp(a: i128, b: i128, c: i128, d: i128) -> std::cmp::Ordering {
        (a * d).cmp(&(c * b))
    }
    #[allow(clippy::too_many_arguments)]
    fn walk(
        x: (i128, i128),
        prev: (i128, i128),
        cur: (i128, i128),
        word: &mut Vec<i64>,
        max_len: usize,
        max_digit: i64,
        found: &mut Vec<Vec<i64>>,
    ) {
        if cmp(cur.0, cur.1, x.0, x.1).is_eq() {
            found.push(word.clone());
        }
        if word.len() == max_len {
            return;
        }
        for d in 1..=max_digit {
            let d128 = d as i128;
            let next = (d128 * cur.0 + prev.0, d128 * cur.1 + prev.1);
            let far = (next.0 + cur.0, next.1 + cur.1);
            let (lo, hi) = if cmp(next.0, next.1, far.0, far.1).is_le() {
                (next, far)
            } else {
                (far, next)
            };
            if cmp(x.0, x.1, lo.0, lo.1).is_lt() || cmp(x.0, x.1, hi.0, hi.1).is_gt() {
                continue;
            }
            word.push(d);
            walk(x, cur, next, word, max_len, max_digit, found);
            word.pop();
        }
    }
    let mut found = Vec::new();
    walk(
        (p as i128, q as i128),
        (1, 0),
        (0, 1),
        &mut Vec::new(),
        max_len,
        max_digit,
        &mut found,
    );
    found
}

fn to_digits(w: &Word) -> Vec<i64> {
    w.block()
        .iter()
        .map(|d| i64::try_from(d).unwrap())
        .collect()
}

#[test]
fn criterion_05_preimage_doubleton() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut cases = 0;
    for q in 2..=200i64 {
        for p in 1..q {
            if p.gcd(&q) != 1 {
                continue;
            }
            cases += 1;
            let x = r(p, q);
            let Preimage::Pair(pair) = preimage(&x).unwrap() else {
                failures.push(format!("{x}: expected two preimages"));
                continue;
            };
            let canon = exact(eval(&Seq::Word(pair.canonical.clone())));
            let alt = exact(eval(&Seq::Word(pair.alternate.clone())));
            if canon != x || alt != x || pair.canonical != expand(&x).unwrap() {
                failures.push(format!(
                    "{x}: {} / {} evaluate to {canon} / {alt}",
                    pair.canonical, pair.alternate
                ));
            }
            if !alternate_is_noncanonical(&pair) {
                failures.push(format!("{x}: alternate {} is canonical", pair.alternate));
            }
            let mut expected = vec![to_digits(&pair.canonical), to_digits(&pair.alternate)];
            expected.sort();
            let mut found = brute_force_preimages(p, q, pair.canonical.len() + 1, 2 * q);
            found.sort();
            if found != expected {
                failures.push(format!(
                    "{x}: search found {found:?}, expected {expected:?}"
                ));
            }
        }
    }
    verdict(
        5,
        "φ⁻¹(p/q) = {σ, σ′}, q ≤ 200",
        cases,
        &failures,
        started,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_06_one_sided_continuity() {
    let started = Instant::now();
    let mut rng = rng(6);
    let mut failures = Vec::new();
    let count = 8;
    let threshold = r(1, 100);
    let mut points = vec![r(1, 2)];
    while points.len() < 31 {
        let q = rng.gen_range(2..=50i64);
        let p = rng.gen_range(1..q);
        if p.gcd(&q) == 1 {
            points.push(r(p, q));
        }
    }
    for x in &points {
        let Preimage::Pair(pair) = preimage(x).unwrap() else {
            unreachable!()
        };
        let interval = fundamental_interval(&pair.canonical).unwrap();
        for side in [Side::Inside, Side::Outside] {
            let report = continuity_probe(x, side, count).unwrap();
            let limit = if side == Side::Inside {
                &pair.canonical
            } else {
                &pair.alternate
            };
            if &report.limit_word != limit {
                failures.push(format!("{x} {side}: limit {}", report.limit_word));
            }
            for s in &report.samples {
                if interval.contains(&s.t) != (side == Side::Inside) {
                    failures.push(format!("{x} {side}: sample {} on the wrong side", s.t));
                }
            }
            if report.decreasing_from() > count / 2 {
                failures.push(format!("{x} {side}: distances not eventually decreasing"));
            }
            if report.final_distance().unwrap() >= &threshold {
                failures.push(format!(
                    "{x} {side}: final distance {}",
                    report.final_distance().unwrap()
                ));
            }
        }
        // Inside samples keep σ's first n digits, which differ from τ at n.
        let n = pair.canonical.len();
        let mismatch = rho(&pair.canonical.digit(n), &pair.alternate.digit(n)) * weight(n);
        let half = mismatch / r(2, 1);
        let wrong = continuity_probe(x, Side::Inside, count)
            .unwrap()
            .against(&pair.alternate);
        for d in wrong.distances() {
            if d < &half {
                failures.push(format!("{x}: inside sample within {d} of τ"));
            }
        }
    }
    verdict(
        6,
        "one-sided limits at rationals",
        points.len(),
        &failures,
        started,
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_07_continuity_at_endpoints_and_irrationals() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let zero = endpoint_probe(&r(0, 1), 10).unwrap();
    for (j, s) in (3i64..).zip(&zero.samples) {
        if s.t != r(1, j) || s.distance != r(1, j) {
            failures.push(format!("x=0, j={j}: t={} distance={}", s.t, s.distance));
        }
    }
    let one = endpoint_probe(&r(1, 1), 10).unwrap();
    if one.decreasing_from() != 0 || one.final_distance().unwrap() >= &r(1, 10) {
        failures.push(format!(
            "x=1 distances {:?}",
            one.distances().collect::<Vec<_>>()
        ));
    }
    let golden = irrational_probe(&Stream::of(&[], &[1], 12), 10).unwrap();
    let bound = weight(9);
    if golden.decreasing_from() != 0 || golden.final_distance().unwrap() >= &bound {
        failures.push(format!(
            "all-ones probe final distance {} ≥ 1/F_9²",
            golden.final_distance().unwrap()
        ));
    }
    verdict(
        7,
        "continuity at 0, 1 and the golden irrational",
        3,
        &failures,
        started,
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_08_forget_composition() {
    let started = Instant::now();
    let mut rng = rng(8);
    let mut failures = Vec::new();
    for _ in 0..10_000 {
        let s = Seq::general(random_general(&mut rng, 12, 50, 0.1));
        let g = forget(&s);
        if eval(&s) != eval(&g) {
            failures.push(format!("φ̃({s}) ≠ φ({g})"));
        }
        if forget(&g) != g {
            failures.push(format!("g not idempotent at {s}"));
        }
    }
    verdict(
        8,
        "φ̃ = φ ∘ g, g ∘ g = g",
        10_000,
        &failures,
        started,
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_09_fibonacci() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for n in 0..=70u32 {
        if !fib_binet_check(n).unwrap() {
            failures.push(format!("Binet disagrees at n = {n}"));
        }
    }
    for n in 1..=40u32 {
        let lhs = BigInt::from(fib(n + 1) * fib(n - 1)) - BigInt::from(fib(n) * fib(n));
        let rhs = if n % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        if lhs != rhs {
            failures.push(format!("Cassini fails at n = {n}"));
        }
    }
    verdict(
        9,
        "Fibonacci vs Binet and Cassini",
        111,
        &failures,
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_10_tail_bound() {
    let started = Instant::now();
    let mut failures = Vec::new();
    // Independent Fibonacci table in u128 (F_90² < 2^128).
    let mut f = vec![0u128, 1];
    while f.len() <= 91 {
        let n = f.len();
        f.push(f[n - 1] + f[n - 2]);
    }
    for k in 4..=30usize {
        let tail: Rational = (k + 1..=k + 60)
            .map(|j| Rational::new(2.into(), BigInt::from(f[j] * f[j])).unwrap())
            .sum();
        let bound = tail_bound(k).unwrap();
        if tail > bound {
            failures.push(format!(
                "K = {k}: tail {} > bound {}",
                tail.to_f64(),
                bound.to_f64()
            ));
        }
    }
    verdict(
        10,
        "tail_bound(K) ≥ Σ_{K<k≤K+60} 2/F_k²",
        27,
        &failures,
        started,
        Duration::from_secs(1),
    );
}
