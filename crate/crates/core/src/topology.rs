//! Fundamental intervals, rational preimages, and continuity probes.
//!
//! Every rational `x ∈ (0,1)` has two preimages under evaluation: its
//! canonical expansion `σ ∈ Σ_n` (last digit `≥ 2`) and the alternate
//! `τ ∈ Σ_{n+1}` ending in `…, σ_n − 1, 1`. The expansion map tends to `σ`
//! as `t → x` inside the fundamental interval `I_n(σ)` and to `τ` from the
//! other side. The probes here sample both sides and report exact distances.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::evaluator::{convergents, eval, eval_k, expand, Value};
use crate::metric::{class_dist, dist};
use crate::symbolic::{truncate, Seq, Stream, Word};

/// An interval with exact endpoints and per-endpoint inclusion flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_closed {
            x >= &self.lo
        } else {
            x > &self.lo
        };
        let below = if self.hi_closed {
            x <= &self.hi
        } else {
            x < &self.hi
        };
        above && below
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lo_closed { '[' } else { '(' };
        let close = if self.hi_closed { ']' } else { ')' };
        write!(f, "{open}{}, {}{close}", self.lo, self.hi)
    }
}

/// Whether the first `n = |sigma|` partial quotients of `x` are `sigma`.
fn digits_match(x: &Rational, sigma: &Word) -> bool {
    let w = expand(x).expect("endpoints lie in [0,1]");
    w.len() >= sigma.len() && w.block()[..sigma.len()] == *sigma.block()
}

/// `I_n(σ)`: all `x ∈ [0,1]` whose first `n` partial quotients are `σ`.
///
/// The endpoints are `p_n/q_n` and `(p_n + p_{n-1})/(q_n + q_{n-1})`; each is
/// included iff its own expansion starts with `σ`.
pub fn fundamental_interval(sigma: &Word) -> Result<Interval> {
    if sigma.is_empty() {
        return Err(Error::InvalidCylinderBase);
    }
    let n = sigma.len() as isize;
    let table = convergents(&Seq::Word(sigma.clone()), sigma.len())?;
    let a = table.value(sigma.len());
    let b = Rational::new(
        BigInt::from(table.p(n) + table.p(n - 1)),
        BigInt::from(table.q(n) + table.q(n - 1)),
    )?;
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    Ok(Interval {
        lo_closed: digits_match(&lo, sigma),
        hi_closed: digits_match(&hi, sigma),
        lo,
        hi,
    })
}

/// The two preimages of a rational in `(0,1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreimagePair {
    pub x: Rational,
    pub canonical: Word,
    pub alternate: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preimage {
    Single(Word),
    Pair(PreimagePair),
}

impl fmt::Display for Preimage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preimage::Single(w) => write!(f, "{w}"),
            Preimage::Pair(p) => write!(f, "{} {}", p.canonical, p.alternate),
        }
    }
}

/// `[d_1, …, d_{n-1}, d_n − 1, 1]` from `[d_1, …, d_n]`, `d_n ≥ 2`.
fn alternate_of(canonical: &Word) -> Word {
    let mut block = canonical.block().to_vec();
    let last = block.last_mut().expect("non-empty canonical word");
    *last -= 1u32;
    block.push(BigUint::one());
    Word::new(block).expect("last digit was at least 2")
}

/// All sequences in `Σ` evaluating to `x`.
pub fn preimage(x: &Rational) -> Result<Preimage> {
    let canonical = expand(x)?;
    if x.is_zero() || x == &Rational::one() {
        return Ok(Preimage::Single(canonical));
    }
    Ok(Preimage::Pair(PreimagePair {
        x: x.clone(),
        alternate: alternate_of(&canonical),
        canonical,
    }))
}

/// Whether the alternate word is never produced by the expansion map.
pub fn alternate_is_noncanonical(pair: &PreimagePair) -> bool {
    let value = eval(&Seq::Word(pair.alternate.clone()));
    let x = value.exact().expect("words evaluate exactly");
    expand(x).map(|w| w != pair.alternate).unwrap_or(true)
}

/// Which side of a rational point the samples approach from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Within the fundamental interval of the canonical expansion.
    Inside,
    /// From the opposite side.
    Outside,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Inside => "inside",
            Side::Outside => "outside",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inside" => Ok(Side::Inside),
            "outside" => Ok(Side::Outside),
            other => Err(Error::Parse(format!(
                "side must be inside or outside, got `{other}`"
            ))),
        }
    }
}

/// How a probe approaches its target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Approach {
    OneSided(Side),
    TwoSided,
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Approach::OneSided(side) => side.fmt(f),
            Approach::TwoSided => f.write_str("two-sided"),
        }
    }
}

/// One sample point `t`, its expansion, and two exact distances from the
/// expansion to the probe's limit word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub t: Rational,
    pub word: Word,
    /// Distance in `Σ`: to the `~_g` class of the limit word for rational
    /// targets, to the limit prefix for streams.
    pub distance: Rational,
    /// Plain `ρ^ℕ` distance to the limit word.
    pub product_distance: Rational,
}

/// Sample points approaching a target, their expansions, and their exact
/// distances to `limit_word`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    pub target: Value,
    pub approach: Approach,
    pub limit_word: Word,
    pub samples: Vec<Sample>,
}

impl ProbeReport {
    pub fn distances(&self) -> impl Iterator<Item = &Rational> {
        self.samples.iter().map(|s| &s.distance)
    }

    /// First index from which the distances decrease strictly.
    pub fn decreasing_from(&self) -> usize {
        let d: Vec<&Rational> = self.distances().collect();
        let mut start = d.len().saturating_sub(1);
        while start > 0 && d[start] < d[start - 1] {
            start -= 1;
        }
        start
    }

    pub fn final_distance(&self) -> Option<&Rational> {
        self.samples.last().map(|s| &s.distance)
    }

    /// The same samples measured against another limit word in `Σ`.
    pub fn against(&self, limit: &Word) -> ProbeReport {
        let samples = self
            .samples
            .iter()
            .map(|s| sample(s.t.clone(), limit, Metric::Class))
            .collect::<Result<_>>()
            .expect("samples lie in [0,1]");
        ProbeReport {
            limit_word: limit.clone(),
            samples,
            ..self.clone()
        }
    }
}

fn word_distance(a: &Word, b: &Word) -> Rational {
    dist(&Seq::Word(a.clone()), &Seq::Word(b.clone()))
        .expect("words are unbudgeted")
        .exact()
        .expect("word distances are exact")
        .clone()
}

#[derive(Clone, Copy)]
enum Metric {
    Class,
    Product,
}

fn sample(t: Rational, limit: &Word, metric: Metric) -> Result<Sample> {
    let word = expand(&t)?;
    let product_distance = word_distance(&word, limit);
    let distance = match metric {
        Metric::Class => class_dist(&Seq::Word(word.clone()), limit),
        Metric::Product => product_distance.clone(),
    };
    Ok(Sample {
        t,
        word,
        distance,
        product_distance,
    })
}

/// Probes one-sided limits of the expansion map at a rational `x ∈ (0,1)`.
///
/// Samples are `t_j = x ± δ/10^j`, `j = 1..=count`. Inside, they approach
/// through `I_n(σ)` and are measured against `σ`; outside, they approach
/// from the other side and are measured against the alternate `τ`.
///
/// Expansions of such samples look like `[σ, M_j, …]` with `M_j → ∞` but a
/// fixed tail after `M_j`, so they converge to `σ` only after forgetting
/// what follows the first `∞`. The reported `distance` is therefore the
/// distance to the class of the limit; `product_distance` keeps plain `ρ^ℕ`.
pub fn continuity_probe(x: &Rational, side: Side, count: usize) -> Result<ProbeReport> {
    if count < 3 {
        return Err(Error::TooFewSamples);
    }
    let pair = match preimage(x)? {
        Preimage::Pair(pair) => pair,
        Preimage::Single(_) => return Err(Error::OutOfDomain("(0,1)")),
    };
    let interval = fundamental_interval(&pair.canonical)?;
    // x is the closed endpoint of I_n(σ); the interval extends away from it.
    let (toward, span) = if &interval.lo == x {
        (1, interval.length())
    } else {
        (-1, interval.length())
    };
    let edge = std::cmp::min(x.clone(), Rational::one() - x.clone());
    let two = Rational::from_integer(2);
    let (sign, delta, limit) = match side {
        Side::Inside => (toward, std::cmp::min(edge, span) / two, &pair.canonical),
        Side::Outside => (-toward, edge / two, &pair.alternate),
    };
    let ten = Rational::from_integer(10);
    let mut step = delta;
    let mut samples = Vec::with_capacity(count);
    for _ in 0..count {
        step = step / ten.clone();
        let t = if sign > 0 { x + &step } else { x - &step };
        let placed = t > Rational::zero()
            && t < Rational::one()
            && interval.contains(&t) == (side == Side::Inside);
        if !placed {
            return Err(Error::CannotPlaceSamples);
        }
        samples.push(sample(t, limit, Metric::Class)?);
    }
    Ok(ProbeReport {
        target: Value::Exact(x.clone()),
        approach: Approach::OneSided(side),
        limit_word: limit.clone(),
        samples,
    })
}

/// Probes two-sided continuity at `0` (with `t_j = 1/j`) or at `1` (with
/// `t_j = 1 − 1/j`), for `j = 3, …, count + 2`.
pub fn endpoint_probe(x: &Rational, count: usize) -> Result<ProbeReport> {
    let at_zero = x.is_zero();
    if !at_zero && x != &Rational::one() {
        return Err(Error::OutOfDomain("{0,1}"));
    }
    let limit = expand(x)?;
    let samples = (3..count as i64 + 3)
        .map(|j| {
            let inv = Rational::new(1.into(), j.into())?;
            let t = if at_zero { inv } else { Rational::one() - inv };
            sample(t, &limit, Metric::Class)
        })
        .collect::<Result<_>>()?;
    Ok(ProbeReport {
        target: Value::Exact(x.clone()),
        approach: Approach::TwoSided,
        limit_word: limit,
        samples,
    })
}

/// Probes continuity at the irrational value of a stream.
///
/// The samples are its convergents `φ_k`, `k = 3, …, count + 2`, which
/// approach the value from alternating sides. Each is expanded and measured
/// against the deepest available prefix `s^(count+2)`.
pub fn irrational_probe(s: &Stream, count: usize) -> Result<ProbeReport> {
    if count == 0 {
        return Err(Error::TooFewSamples);
    }
    let depth = count + 2;
    let seq = Seq::Stream(s.clone());
    let limit = match truncate(&seq, depth)? {
        Seq::Word(w) => w,
        _ => unreachable!("stream prefixes are words"),
    };
    let samples = (3..=depth)
        .map(|k| sample(eval_k(&seq, k)?, &limit, Metric::Product))
        .collect::<Result<_>>()?;
    Ok(ProbeReport {
        target: eval(&seq),
        approach: Approach::TwoSided,
        limit_word: limit,
        samples,
    })
}
