//! Sequences over the extended digits `ℕ ∪ {∞}`.
//!
//! The stratified space `Σ` is the union of `Σ_0` (all `∞`), `Σ_n` (exactly
//! `n` finite digits followed by `∞` forever) and `Σ_∞` (no `∞` at all).
//! [`Word`] covers `Σ_0` and every `Σ_n`, [`Stream`] covers the eventually
//! periodic part of `Σ_∞`, and [`GeneralWord`] covers finitely supported
//! sequences with an `∞` followed by a finite digit, which lie outside `Σ`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Depth budget given to streams parsed from text.
pub const DEFAULT_DEPTH_BUDGET: usize = 32;

/// An element of `ℕ ∪ {∞}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ExtDigit {
    Finite(BigUint),
    Infinite,
}

impl ExtDigit {
    /// A finite digit; fails on zero.
    pub fn finite<T: Into<BigUint>>(d: T) -> Result<Self> {
        let d = d.into();
        if d.is_zero() {
            return Err(Error::Parse("digits must be positive".into()));
        }
        Ok(ExtDigit::Finite(d))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtDigit::Infinite)
    }

    pub fn as_finite(&self) -> Option<&BigUint> {
        match self {
            ExtDigit::Finite(d) => Some(d),
            ExtDigit::Infinite => None,
        }
    }
}

impl From<BigUint> for ExtDigit {
    fn from(d: BigUint) -> Self {
        debug_assert!(!d.is_zero());
        ExtDigit::Finite(d)
    }
}

impl fmt::Display for ExtDigit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtDigit::Finite(d) => write!(f, "{d}"),
            ExtDigit::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtDigit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" => Ok(ExtDigit::Infinite),
            t => {
                if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(Error::Parse(format!("invalid digit `{t}`")));
                }
                let d = BigUint::from_str(t).map_err(|e| Error::Parse(e.to_string()))?;
                ExtDigit::finite(d)
            }
        }
    }
}

fn check_positive(block: &[BigUint]) -> Result<()> {
    if block.iter().any(Zero::is_zero) {
        return Err(Error::Parse("digits must be positive".into()));
    }
    Ok(())
}

/// A finite block of positive digits followed by `∞` forever.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word {
    block: Vec<BigUint>,
}

impl Word {
    pub fn new(block: Vec<BigUint>) -> Result<Self> {
        check_positive(&block)?;
        Ok(Word { block })
    }

    /// The all-`∞` sequence.
    pub fn empty() -> Self {
        Word::default()
    }

    /// Convenience constructor for small digits.
    ///
    /// Panics if a digit is zero.
    pub fn of(digits: &[u64]) -> Self {
        Word::new(digits.iter().map(|&d| BigUint::from(d)).collect())
            .expect("digits must be positive")
    }

    pub fn block(&self) -> &[BigUint] {
        &self.block
    }

    pub fn into_block(self) -> Vec<BigUint> {
        self.block
    }

    pub fn len(&self) -> usize {
        self.block.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block.is_empty()
    }

    /// The `k`-th digit, 1-based.
    pub fn digit(&self, k: usize) -> ExtDigit {
        match k.checked_sub(1).and_then(|i| self.block.get(i)) {
            Some(d) => ExtDigit::Finite(d.clone()),
            None => ExtDigit::Infinite,
        }
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word {
            block: self.block[..n.min(self.block.len())].to_vec(),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        write_digits(f, &self.block)?;
        f.write_str("]")
    }
}

fn write_digits<T: fmt::Display>(f: &mut fmt::Formatter<'_>, digits: &[T]) -> fmt::Result {
    for (i, d) in digits.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{d}")?;
    }
    Ok(())
}

/// A finitely supported sequence with at least one `∞` strictly before a
/// finite digit. Built through [`Seq::general`], which sends every other
/// finitely supported sequence to a [`Word`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GeneralWord {
    digits: Vec<ExtDigit>,
}

impl GeneralWord {
    pub fn digits(&self) -> &[ExtDigit] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digit(&self, k: usize) -> ExtDigit {
        match k.checked_sub(1).and_then(|i| self.digits.get(i)) {
            Some(d) => d.clone(),
            None => ExtDigit::Infinite,
        }
    }

    /// Number of finite digits before the first `∞`.
    pub fn leading_finite(&self) -> usize {
        self.digits.iter().take_while(|d| !d.is_infinite()).count()
    }
}

impl fmt::Display for GeneralWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        write_digits(f, &self.digits)?;
        f.write_str("]")
    }
}

/// An eventually periodic sequence of positive digits,
/// `preperiod ⧺ period ⧺ period ⧺ …`, read to at most `depth_budget` digits.
///
/// The representation is kept minimal: the period is primitive and the
/// preperiod is as short as possible. Equality ignores the budget.
#[derive(Clone, Debug)]
pub struct Stream {
    preperiod: Vec<BigUint>,
    period: Vec<BigUint>,
    depth_budget: usize,
}

impl Stream {
    pub fn new(preperiod: Vec<BigUint>, period: Vec<BigUint>, depth_budget: usize) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Parse("stream period must be non-empty".into()));
        }
        if depth_budget == 0 {
            return Err(Error::Parse("depth budget must be positive".into()));
        }
        check_positive(&preperiod)?;
        check_positive(&period)?;
        let mut s = Stream {
            preperiod,
            period,
            depth_budget,
        };
        s.normalize();
        Ok(s)
    }

    /// Convenience constructor for small digits. Panics on invalid input.
    pub fn of(preperiod: &[u64], period: &[u64], depth_budget: usize) -> Self {
        let big = |ds: &[u64]| ds.iter().map(|&d| BigUint::from(d)).collect();
        Stream::new(big(preperiod), big(period), depth_budget).expect("invalid stream")
    }

    fn normalize(&mut self) {
        let n = self.period.len();
        if let Some(p) = (1..=n)
            .filter(|p| n.is_multiple_of(*p))
            .find(|&p| (p..n).all(|i| self.period[i] == self.period[i - p]))
        {
            self.period.truncate(p);
        }
        while let Some(last) = self.preperiod.last() {
            if last != self.period.last().expect("non-empty period") {
                break;
            }
            self.preperiod.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn preperiod(&self) -> &[BigUint] {
        &self.preperiod
    }

    pub fn period(&self) -> &[BigUint] {
        &self.period
    }

    pub fn depth_budget(&self) -> usize {
        self.depth_budget
    }

    pub fn with_budget(mut self, depth_budget: usize) -> Self {
        self.depth_budget = depth_budget.max(1);
        self
    }

    /// The `k`-th digit, 1-based. Not budget-checked.
    pub fn digit(&self, k: usize) -> &BigUint {
        assert!(k >= 1, "digits are 1-based");
        let i = k - 1;
        if i < self.preperiod.len() {
            &self.preperiod[i]
        } else {
            &self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    /// The first `n` digits, within budget.
    pub fn prefix(&self, n: usize) -> Result<Vec<BigUint>> {
        if n > self.depth_budget {
            return Err(Error::DepthBudgetExceeded);
        }
        Ok((1..=n).map(|k| self.digit(k).clone()).collect())
    }
}

impl PartialEq for Stream {
    fn eq(&self, other: &Self) -> bool {
        self.preperiod == other.preperiod && self.period == other.period
    }
}

impl Eq for Stream {}

impl fmt::Display for Stream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        write_digits(f, &self.preperiod)?;
        f.write_str("|")?;
        write_digits(f, &self.period)?;
        f.write_str("]")
    }
}

/// Any sequence the crate can represent.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Seq {
    Word(Word),
    General(GeneralWord),
    Stream(Stream),
}

/// Which stratum of `Σ` a sequence lies in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Stratum {
    Finite(usize),
    Infinite,
    NotInSigma,
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stratum::Finite(n) => write!(f, "{n}"),
            Stratum::Infinite => f.write_str("inf"),
            Stratum::NotInSigma => f.write_str("not-in-sigma"),
        }
    }
}

impl Seq {
    /// Normalizes a finitely supported sequence: trailing `∞` digits are
    /// dropped, and the result is a [`Word`] unless an `∞` precedes a finite
    /// digit.
    pub fn general(mut digits: Vec<ExtDigit>) -> Seq {
        while digits.last().is_some_and(ExtDigit::is_infinite) {
            digits.pop();
        }
        if digits.iter().any(ExtDigit::is_infinite) {
            Seq::General(GeneralWord { digits })
        } else {
            let block = digits
                .into_iter()
                .map(|d| match d {
                    ExtDigit::Finite(d) => d,
                    ExtDigit::Infinite => unreachable!(),
                })
                .collect();
            Seq::Word(Word { block })
        }
    }

    /// The `k`-th digit, 1-based. Streams are not budget-checked here.
    pub fn digit(&self, k: usize) -> ExtDigit {
        match self {
            Seq::Word(w) => w.digit(k),
            Seq::General(g) => g.digit(k),
            Seq::Stream(s) => ExtDigit::Finite(s.digit(k).clone()),
        }
    }

    /// The first `n` digits, failing past a stream's budget.
    pub fn prefix(&self, n: usize) -> Result<Vec<ExtDigit>> {
        if let Seq::Stream(s) = self {
            if n > s.depth_budget() {
                return Err(Error::DepthBudgetExceeded);
            }
        }
        Ok((1..=n).map(|k| self.digit(k)).collect())
    }

    /// Length of the explicit part: beyond it every digit is `∞`.
    /// `None` for streams.
    pub fn support(&self) -> Option<usize> {
        match self {
            Seq::Word(w) => Some(w.len()),
            Seq::General(g) => Some(g.len()),
            Seq::Stream(_) => None,
        }
    }

    pub fn as_word(&self) -> Option<&Word> {
        match self {
            Seq::Word(w) => Some(w),
            _ => None,
        }
    }

    pub fn as_stream(&self) -> Option<&Stream> {
        match self {
            Seq::Stream(s) => Some(s),
            _ => None,
        }
    }

    /// Replaces a stream's depth budget; other sequences are returned as is.
    pub fn with_budget(self, depth_budget: usize) -> Seq {
        match self {
            Seq::Stream(s) => Seq::Stream(s.with_budget(depth_budget)),
            other => other,
        }
    }
}

impl From<Word> for Seq {
    fn from(w: Word) -> Self {
        Seq::Word(w)
    }
}

impl From<Stream> for Seq {
    fn from(s: Stream) -> Self {
        Seq::Stream(s)
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seq::Word(w) => w.fmt(f),
            Seq::General(g) => g.fmt(f),
            Seq::Stream(s) => s.fmt(f),
        }
    }
}

fn parse_list(body: &str) -> Result<Vec<ExtDigit>> {
    if body.trim().is_empty() {
        return Ok(Vec::new());
    }
    body.split(',').map(str::parse).collect()
}

fn finite_only(digits: Vec<ExtDigit>) -> Result<Vec<BigUint>> {
    digits
        .into_iter()
        .map(|d| match d {
            ExtDigit::Finite(d) => Ok(d),
            ExtDigit::Infinite => Err(Error::Parse("streams take finite digits only".into())),
        })
        .collect()
}

impl Seq {
    /// Parses the sequence grammar and gives any stream the stated budget.
    pub fn parse_with_budget(s: &str, depth_budget: usize) -> Result<Seq> {
        let s = s.trim();
        let body = s
            .strip_prefix('[')
            .and_then(|rest| rest.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected `[...]`, got `{s}`")))?;
        match body.split_once('|') {
            Some((pre, per)) => {
                let pre = finite_only(parse_list(pre)?)?;
                let per = finite_only(parse_list(per)?)?;
                Ok(Seq::Stream(Stream::new(pre, per, depth_budget)?))
            }
            None => Ok(Seq::general(parse_list(body)?)),
        }
    }
}

/// Grammar: `[d1,...,dn]` (with `inf` allowed as a digit) or `[p1,...|a1,...]`
/// for the stream with preperiod `p` and period `a`.
impl FromStr for Seq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Seq> {
        Seq::parse_with_budget(s, DEFAULT_DEPTH_BUDGET)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        match s.parse::<Seq>()? {
            Seq::Word(w) => Ok(w),
            other => Err(Error::Parse(format!("`{other}` is not a finite word in Σ"))),
        }
    }
}

pub fn stratum(s: &Seq) -> Stratum {
    match s {
        Seq::Word(w) => Stratum::Finite(w.len()),
        Seq::General(_) => Stratum::NotInSigma,
        Seq::Stream(_) => Stratum::Infinite,
    }
}

/// `σ^(n)`: the first `n` digits of `s` followed by `∞`.
pub fn truncate(s: &Seq, n: usize) -> Result<Seq> {
    Ok(match s {
        Seq::Word(w) => Seq::Word(w.prefix(n)),
        Seq::General(g) => Seq::general(g.digits[..n.min(g.len())].to_vec()),
        Seq::Stream(st) => Seq::Word(Word {
            block: st.prefix(n)?,
        }),
    })
}

/// The forgetting map `g`: everything after the first `∞` becomes `∞`.
pub fn forget(s: &Seq) -> Seq {
    match s {
        Seq::General(g) => {
            let block = g.digits[..g.leading_finite()]
                .iter()
                .map(|d| d.as_finite().expect("leading digits are finite").clone())
                .collect();
            Seq::Word(Word { block })
        }
        other => other.clone(),
    }
}

/// `s ~ t` iff both forget to the same element of `Σ`.
pub fn equivalent(s: &Seq, t: &Seq) -> bool {
    forget(s) == forget(t)
}

/// Membership of `u` in the cylinder set of `sigma ∈ Σ_n`, `n ≥ 1`.
pub fn in_cylinder(u: &Seq, sigma: &Word) -> Result<bool> {
    if sigma.is_empty() {
        return Err(Error::InvalidCylinderBase);
    }
    if stratum(u) == Stratum::NotInSigma {
        return Err(Error::NotInSigma);
    }
    let n = sigma.len();
    Ok(truncate(u, n)? == Seq::Word(sigma.clone()))
}
