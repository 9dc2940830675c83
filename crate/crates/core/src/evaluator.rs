//! Both directions of the correspondence between `[0,1]` and sequences.
//!
//! [`expand`] runs the extended Gauss map on a rational until the `∞` digit
//! appears. [`eval_k`] and [`eval`] evaluate continued fractions with the
//! convention `1/∞ = 0`. Irrational values of streams come back as rational
//! [`Enclosure`]s built from two consecutive convergents.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::symbolic::{ExtDigit, Seq, Word};

fn check_unit(x: &Rational) -> Result<()> {
    if x.in_unit_interval() {
        Ok(())
    } else {
        Err(Error::OutOfDomain("[0,1]"))
    }
}

/// Numerator and denominator of a rational in `[0,1]` as naturals.
fn unit_parts(x: &Rational) -> (BigUint, BigUint) {
    let p = x.numer().to_biguint().expect("non-negative");
    let q = x.denom().to_biguint().expect("positive");
    (p, q)
}

/// The first partial quotient: `⌊1/x⌋`, or `∞` at zero.
pub fn gauss_digit(x: &Rational) -> Result<ExtDigit> {
    check_unit(x)?;
    if x.is_zero() {
        return Ok(ExtDigit::Infinite);
    }
    let (p, q) = unit_parts(x);
    Ok(ExtDigit::Finite(q / p))
}

/// The extended Gauss map: the fractional part of `1/x`, and `0` at zero.
pub fn gauss_step(x: &Rational) -> Result<Rational> {
    check_unit(x)?;
    if x.is_zero() {
        return Ok(Rational::zero());
    }
    let (p, q) = unit_parts(x);
    Rational::new(BigInt::from(q % &p), BigInt::from(p))
}

/// The expansion `f(x)` of a rational in `[0,1]`, as its block of finite
/// partial quotients.
pub fn expand(x: &Rational) -> Result<Word> {
    check_unit(x)?;
    let (mut p, mut q) = unit_parts(x);
    let mut block = Vec::new();
    // T(p/q) = (q mod p)/p, so the numerator strictly drops each step.
    while !p.is_zero() {
        let (d, r) = q.div_rem(&p);
        block.push(d);
        q = std::mem::replace(&mut p, r);
    }
    debug_assert!(
        block.len() < 2 || block.last().is_some_and(|d| *d >= BigUint::from(2u32)),
        "canonical expansion ends in a digit ≥ 2"
    );
    Ok(Word::new(block).expect("partial quotients of x ∈ (0,1] are positive"))
}

/// The convergent table `p*_k, q*_k` for `k = -1, 0, …, n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergents {
    // Index 0 holds k = -1.
    p: Vec<BigUint>,
    q: Vec<BigUint>,
}

impl Convergents {
    fn from_digits<'a>(digits: impl IntoIterator<Item = &'a BigUint>) -> Self {
        let mut p = vec![BigUint::one(), BigUint::zero()];
        let mut q = vec![BigUint::zero(), BigUint::one()];
        for d in digits {
            let k = p.len();
            p.push(d * &p[k - 1] + &p[k - 2]);
            q.push(d * &q[k - 1] + &q[k - 2]);
        }
        Convergents { p, q }
    }

    /// The largest `k` in the table.
    pub fn depth(&self) -> usize {
        self.p.len() - 2
    }

    fn index(&self, k: isize) -> usize {
        assert!(
            k >= -1 && k <= self.depth() as isize,
            "convergent index {k} outside -1..={}",
            self.depth()
        );
        (k + 1) as usize
    }

    pub fn p(&self, k: isize) -> &BigUint {
        &self.p[self.index(k)]
    }

    pub fn q(&self, k: isize) -> &BigUint {
        &self.q[self.index(k)]
    }

    /// `φ_k = p*_k / q*_k` for `0 ≤ k ≤ depth`.
    pub fn value(&self, k: usize) -> Rational {
        let i = self.index(k as isize);
        Rational::new_reduced(
            BigInt::from(self.p[i].clone()),
            BigInt::from(self.q[i].clone()),
        )
    }

    /// Rows `(k, p*_k, q*_k)` from `k = -1`.
    pub fn rows(&self) -> impl Iterator<Item = (isize, &BigUint, &BigUint)> {
        self.p
            .iter()
            .zip(&self.q)
            .enumerate()
            .map(|(i, (p, q))| (i as isize - 1, p, q))
    }
}

/// Convergents of the first `n` digits of `s`, which must all be finite.
pub fn convergents(s: &Seq, n: usize) -> Result<Convergents> {
    let prefix = s.prefix(n)?;
    let digits = prefix
        .iter()
        .map(|d| d.as_finite().ok_or(Error::InfiniteDigit))
        .collect::<Result<Vec<_>>>()?;
    Ok(Convergents::from_digits(digits))
}

/// `φ̃_k(s) = [s_1, …, s_k, ∞, ∞, …]`, evaluated from the innermost level
/// outward so that an `∞` digit cuts everything below it off.
pub fn eval_k(s: &Seq, k: usize) -> Result<Rational> {
    let prefix = s.prefix(k)?;
    // Invariant: value = a/b with gcd(a, b) = 1.
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for d in prefix.iter().rev() {
        match d {
            ExtDigit::Infinite => (a, b) = (BigUint::zero(), BigUint::one()),
            ExtDigit::Finite(d) => {
                let next = d * &b + &a;
                (a, b) = (b, next);
            }
        }
    }
    Ok(Rational::new_reduced(a.into(), b.into()))
}

/// A rational interval known to contain an irrational value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
    /// Convergent index `k` of the pair `φ_k, φ_{k+1}` spanning the interval.
    pub depth: usize,
}

impl Enclosure {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2)
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "enclosure {} {} depth={}", self.lo, self.hi, self.depth)
    }
}

/// The value of a sequence: exact for finitely supported ones, an enclosure
/// for streams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Exact(Rational),
    Enclosure(Enclosure),
}

impl Value {
    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Value::Exact(x) => Some(x),
            Value::Enclosure(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(x) => x.fmt(f),
            Value::Enclosure(e) => e.fmt(f),
        }
    }
}

/// `φ̃(s)`. Streams are enclosed between `φ_{B-1}` and `φ_B`, `B` being
/// the depth budget.
pub fn eval(s: &Seq) -> Value {
    match s {
        Seq::Word(w) => Value::Exact(eval_k(s, w.len()).expect("words are unbudgeted")),
        Seq::General(g) => Value::Exact(eval_k(s, g.len()).expect("words are unbudgeted")),
        Seq::Stream(st) => {
            let budget = st.depth_budget();
            let table = convergents(s, budget).expect("within budget and finite");
            let depth = budget - 1;
            let (a, b) = (table.value(depth), table.value(budget));
            let (lo, hi) = match a.cmp(&b) {
                Ordering::Greater => (b, a),
                _ => (a, b),
            };
            Value::Enclosure(Enclosure { lo, hi, depth })
        }
    }
}
