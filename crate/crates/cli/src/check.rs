//! Randomized invariant suites behind `cfmap check`.
//!
//! Each suite draws from its own ChaCha stream, so the output depends only
//! on the seed and the size preset.

use std::fmt::Write as _;

use cfmap::{
    alternate_is_noncanonical, continuity_probe, dist, endpoint_probe, eval, expand, forget, rat,
    rho, DistResult, ExtDigit, Preimage, Rational, Seq, Side, Stream, Word,
};
use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::Output;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Metric,
    Lipschitz,
    Roundtrip,
    Preimage,
    Probe,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Size {
    Small,
    Medium,
    Large,
}

struct Scale {
    samples: usize,
    max_q: i64,
    probe_points: usize,
}

impl Size {
    fn scale(self) -> Scale {
        match self {
            Size::Small => Scale {
                samples: 500,
                max_q: 40,
                probe_points: 5,
            },
            Size::Medium => Scale {
                samples: 5_000,
                max_q: 120,
                probe_points: 20,
            },
            Size::Large => Scale {
                samples: 50_000,
                max_q: 300,
                probe_points: 60,
            },
        }
    }
}

const MAX_SHOWN: usize = 5;

type SuiteFn = fn(&mut ChaCha8Rng, &Scale) -> Outcome;

struct Outcome {
    name: &'static str,
    cases: usize,
    counterexamples: Vec<String>,
}

impl Outcome {
    fn new(name: &'static str) -> Self {
        Outcome {
            name,
            cases: 0,
            counterexamples: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.counterexamples.push(describe());
        }
    }
}

pub fn run(suite: Suite, seed: u64, size: Size) -> (Output, bool) {
    let scale = size.scale();
    let suites: &[(Suite, SuiteFn)] = &[
        (Suite::Metric, metric),
        (Suite::Lipschitz, lipschitz),
        (Suite::Roundtrip, roundtrip),
        (Suite::Preimage, preimages),
        (Suite::Probe, probes),
    ];
    let outcomes: Vec<Outcome> = suites
        .iter()
        .enumerate()
        .filter(|(_, (s, _))| suite == Suite::All || suite == *s)
        .map(|(i, (_, f))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            f(&mut rng, &scale)
        })
        .collect();

    let passed = outcomes.iter().all(|o| o.counterexamples.is_empty());
    let mut text = String::new();
    for o in &outcomes {
        let status = if o.counterexamples.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        let _ = writeln!(text, "{status} {} ({} cases)", o.name, o.cases);
        for c in o.counterexamples.iter().take(MAX_SHOWN) {
            let _ = writeln!(text, "  counterexample: {c}");
        }
    }
    let _ = writeln!(
        text,
        "{}",
        if passed {
            "all suites passed"
        } else {
            "suite failure"
        }
    );
    let json = json!({
        "seed": seed,
        "size": format!("{size:?}").to_lowercase(),
        "passed": passed,
        "suites": outcomes.iter().map(|o| json!({
            "name": o.name,
            "cases": o.cases,
            "passed": o.counterexamples.is_empty(),
            "counterexamples": o.counterexamples.iter().take(MAX_SHOWN).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    (Output { text, json }, passed)
}

fn digit(rng: &mut ChaCha8Rng, max: u64) -> ExtDigit {
    ExtDigit::finite(rng.gen_range(1..=max)).expect("positive digit")
}

fn general(rng: &mut ChaCha8Rng, max_len: usize, p_inf: f64) -> Vec<ExtDigit> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| {
            if rng.gen_bool(p_inf) {
                ExtDigit::Infinite
            } else {
                digit(rng, 50)
            }
        })
        .collect()
}

/// Keeps a random prefix of `base` so that close pairs are common.
fn near(rng: &mut ChaCha8Rng, base: &[ExtDigit], p_inf: f64) -> Vec<ExtDigit> {
    let keep = rng.gen_range(0..=base.len());
    let mut out = base[..keep].to_vec();
    out.extend(general(rng, 12 - keep, p_inf));
    out
}

fn exact_dist(s: &Seq, t: &Seq) -> Rational {
    match dist(s, t).expect("finitely supported") {
        DistResult::Exact(d) => d,
        other => panic!("expected an exact distance, got {other}"),
    }
}

fn exact_value(s: &Seq) -> Rational {
    eval(s).exact().cloned().expect("finitely supported")
}

fn coprime_pairs(max_q: i64) -> impl Iterator<Item = (i64, i64)> {
    (1..=max_q)
        .flat_map(|q| (0..=q).map(move |p| (p, q)))
        .filter(|&(p, q)| gcd(p, q) == 1)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn metric(rng: &mut ChaCha8Rng, scale: &Scale) -> Outcome {
    let mut o = Outcome::new("metric");
    let mut pts: Vec<ExtDigit> = (1..=20u64).map(|d| ExtDigit::finite(d).unwrap()).collect();
    pts.push(ExtDigit::Infinite);
    for m in &pts {
        for n in &pts {
            let mn = rho(m, n);
            o.check(mn.is_zero() == (m == n) && mn == rho(n, m), || {
                format!("rho({m}, {n}) = {mn}")
            });
            for p in &pts {
                o.check(rho(m, p) <= &mn + &rho(n, p), || {
                    format!("rho triangle at {m}, {n}, {p}")
                });
            }
        }
    }
    for _ in 0..scale.samples {
        let a = general(rng, 12, 0.1);
        let b = near(rng, &a, 0.1);
        let c = near(rng, &a, 0.1);
        let (a, b, c) = (Seq::general(a), Seq::general(b), Seq::general(c));
        let (ab, bc, ac) = (exact_dist(&a, &b), exact_dist(&b, &c), exact_dist(&a, &c));
        o.check(ac <= &ab + &bc, || format!("triangle {a} {b} {c}"));
        o.check(ab == exact_dist(&b, &a) && ab.is_zero() == (a == b), || {
            format!("symmetry {a} {b}")
        });
    }
    o
}

fn lipschitz(rng: &mut ChaCha8Rng, scale: &Scale) -> Outcome {
    let mut o = Outcome::new("lipschitz");
    for i in 0..scale.samples {
        let a = general(rng, 12, 0.1);
        let b = if i % 2 == 0 {
            general(rng, 12, 0.1)
        } else {
            near(rng, &a, 0.1)
        };
        let (s, t) = (Seq::general(a), Seq::general(b));
        let gap = (exact_value(&s) - exact_value(&t)).abs();
        let d = exact_dist(&s, &t);
        o.check(gap <= d, || {
            format!("{s} {t}: |value gap| {gap} > distance {d}")
        });
        let g = forget(&s);
        o.check(eval(&g) == eval(&s) && forget(&g) == g, || {
            format!("forget breaks value of {s}")
        });
    }
    o
}

fn roundtrip(rng: &mut ChaCha8Rng, scale: &Scale) -> Outcome {
    let mut o = Outcome::new("roundtrip");
    for (p, q) in coprime_pairs(scale.max_q) {
        let x = rat(p, q).unwrap();
        let w = expand(&x).unwrap();
        o.check(exact_value(&Seq::Word(w.clone())) == x, || {
            format!("{x} -> {w}")
        });
        o.check(
            x.to_string().parse::<Rational>().ok() == Some(x.clone()),
            || format!("print/parse {x}"),
        );
    }
    for _ in 0..scale.samples {
        let digits: Vec<u64> = (0..rng.gen_range(0..=8))
            .map(|_| rng.gen_range(1..=99))
            .collect();
        let w = Word::of(&digits);
        o.check(
            w.to_string().parse::<Word>().ok() == Some(w.clone()),
            || format!("print/parse {w}"),
        );

        let pre: Vec<u64> = (0..rng.gen_range(0..=3))
            .map(|_| rng.gen_range(1..=9))
            .collect();
        let per: Vec<u64> = (0..rng.gen_range(1..=3))
            .map(|_| rng.gen_range(1..=9))
            .collect();
        let s = Seq::Stream(Stream::of(&pre, &per, 32));
        o.check(s.to_string().parse::<Seq>().ok() == Some(s.clone()), || {
            format!("print/parse {s}")
        });

        let t = Seq::general(general(rng, 8, 0.1));
        let d = dist(&s, &t).unwrap();
        o.check(
            d.to_string().parse::<DistResult>().ok() == Some(d.clone()),
            || format!("print/parse {d}"),
        );
    }
    o
}

fn preimages(_rng: &mut ChaCha8Rng, scale: &Scale) -> Outcome {
    let mut o = Outcome::new("preimage");
    for (p, q) in coprime_pairs(scale.max_q).filter(|&(p, q)| 0 < p && p < q) {
        let x = rat(p, q).unwrap();
        match cfmap::preimage(&x) {
            Ok(Preimage::Pair(pair)) => {
                let ok = exact_value(&Seq::Word(pair.canonical.clone())) == x
                    && exact_value(&Seq::Word(pair.alternate.clone())) == x
                    && pair.canonical == expand(&x).unwrap()
                    && alternate_is_noncanonical(&pair);
                o.check(ok, || format!("{x}: {} {}", pair.canonical, pair.alternate));
            }
            other => o.check(false, || format!("{x}: {other:?}")),
        }
    }
    o
}

fn probes(rng: &mut ChaCha8Rng, scale: &Scale) -> Outcome {
    let mut o = Outcome::new("probe");
    let count = 8;
    let threshold = rat(1, 100).unwrap();
    let mut points = vec![rat(1, 2).unwrap()];
    while points.len() < scale.probe_points {
        let q = rng.gen_range(2..=50i64);
        let p = rng.gen_range(1..q);
        if gcd(p, q) == 1 {
            points.push(rat(p, q).unwrap());
        }
    }
    for x in &points {
        for side in [Side::Inside, Side::Outside] {
            match continuity_probe(x, side, count) {
                Ok(r) => o.check(
                    r.decreasing_from() <= count / 2 && r.final_distance().unwrap() < &threshold,
                    || {
                        format!(
                            "{x} {side}: distances {:?}",
                            r.distances().map(|d| d.to_string()).collect::<Vec<_>>()
                        )
                    },
                ),
                Err(e) => o.check(false, || format!("{x} {side}: {e}")),
            }
        }
    }
    for x in [rat(0, 1).unwrap(), rat(1, 1).unwrap()] {
        let r = endpoint_probe(&x, count).unwrap();
        o.check(r.decreasing_from() == 0, || {
            format!("endpoint {x} not decreasing")
        });
    }
    o
}
