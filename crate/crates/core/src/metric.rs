//! The metric `ρ` on `ℕ ∪ {∞}` and the Fibonacci-weighted product metric
//! `ρ^ℕ(σ, τ) = Σ_k ρ(σ_k, τ_k) / F_k²` on sequences.
//!
//! Finitely supported pairs agree from some position on, so their distance is
//! a finite sum and comes back exact. As soon as a stream is involved the
//! series is cut at a depth `K` and the remainder is bounded by
//! [`tail_bound`], giving a rational bracket.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::arith::{fib, Fibonacci, Rational};
use crate::error::{Error, Result};
use crate::symbolic::{ExtDigit, Seq, Word};

/// `1/d`, with `1/∞ = 0`.
fn reciprocal(d: &ExtDigit) -> Rational {
    match d {
        ExtDigit::Finite(d) => Rational::new_reduced(BigInt::one(), BigInt::from(d.clone())),
        ExtDigit::Infinite => Rational::zero(),
    }
}

/// `ρ(m, n) = 1/m + 1/n` for `m ≠ n`, and `0` otherwise.
pub fn rho(m: &ExtDigit, n: &ExtDigit) -> Rational {
    if m == n {
        Rational::zero()
    } else {
        reciprocal(m) + reciprocal(n)
    }
}

/// The weight `1/F_k²` of position `k ≥ 1`.
pub fn weight(k: usize) -> Rational {
    weight_of(&fib(k as u32))
}

fn weight_of(f: &BigUint) -> Rational {
    Rational::new_reduced(BigInt::one(), BigInt::from(f * f))
}

/// Upper bound on `Σ_{k>K} 2/F_k²`, valid for `K ≥ 4`.
///
/// From `F_{k+1} ≥ (3/2) F_k` for `k ≥ 3`, the terms past `K` shrink by a
/// factor of at most `4/9`, so the remainder is at most
/// `2/F_{K+1}² · 9/5 = (18/5)/F_{K+1}²`.
pub fn tail_bound(depth: usize) -> Result<Rational> {
    if depth < 4 {
        return Err(Error::TailBoundDepth);
    }
    let f = fib(depth as u32 + 1);
    Ok(Rational::new(BigInt::from(18u32), BigInt::from(&f * &f * 5u32)).expect("non-zero"))
}

/// A distance value: exact, or a bracket `lo ≤ ρ^ℕ ≤ hi` obtained at `depth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DistResult {
    Exact(Rational),
    Bracket {
        lo: Rational,
        hi: Rational,
        depth: usize,
    },
}

impl DistResult {
    pub fn exact(&self) -> Option<&Rational> {
        match self {
            DistResult::Exact(d) => Some(d),
            DistResult::Bracket { .. } => None,
        }
    }

    /// Lower end of the bracket, or the exact value.
    pub fn lower(&self) -> &Rational {
        match self {
            DistResult::Exact(d) => d,
            DistResult::Bracket { lo, .. } => lo,
        }
    }

    /// Upper end of the bracket, or the exact value.
    pub fn upper(&self) -> &Rational {
        match self {
            DistResult::Exact(d) => d,
            DistResult::Bracket { hi, .. } => hi,
        }
    }
}

impl fmt::Display for DistResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistResult::Exact(d) => write!(f, "exact {d}"),
            DistResult::Bracket { lo, hi, depth } => write!(f, "bracket {lo} {hi} depth={depth}"),
        }
    }
}

impl FromStr for DistResult {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid distance `{s}`"));
        let mut parts = s.split_whitespace();
        match parts.next() {
            Some("exact") => {
                let d = parts.next().ok_or_else(bad)?.parse()?;
                if parts.next().is_some() {
                    return Err(bad());
                }
                Ok(DistResult::Exact(d))
            }
            Some("bracket") => {
                let lo = parts.next().ok_or_else(bad)?.parse()?;
                let hi = parts.next().ok_or_else(bad)?.parse()?;
                let depth = parts
                    .next()
                    .and_then(|t| t.strip_prefix("depth="))
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(bad)?;
                if parts.next().is_some() {
                    return Err(bad());
                }
                Ok(DistResult::Bracket { lo, hi, depth })
            }
            _ => Err(bad()),
        }
    }
}

/// `Σ_{k=1}^{n} ρ(s_k, t_k) / F_k²`.
fn partial_sum(s: &Seq, t: &Seq, n: usize) -> Rational {
    Fibonacci::default()
        .skip(1)
        .take(n)
        .enumerate()
        .filter_map(|(i, f)| {
            let (a, b) = (s.digit(i + 1), t.digit(i + 1));
            (a != b).then(|| rho(&a, &b) * weight_of(&f))
        })
        .sum()
}

/// `ρ^ℕ(s, t)`, cutting any stream at its depth budget.
pub fn dist(s: &Seq, t: &Seq) -> Result<DistResult> {
    dist_with_depth(s, t, None)
}

/// `ρ^ℕ(s, t)`. When a stream is involved the series is cut at `depth`
/// (default: the smallest budget among the streams), which must lie within
/// every budget and be at least 4.
pub fn dist_with_depth(s: &Seq, t: &Seq, depth: Option<usize>) -> Result<DistResult> {
    let budgets: Vec<usize> = [s, t]
        .iter()
        .filter_map(|x| x.as_stream().map(|st| st.depth_budget()))
        .collect();
    let Some(&available) = budgets.iter().min() else {
        let n = s.support().max(t.support()).expect("finitely supported");
        return Ok(DistResult::Exact(partial_sum(s, t, n)));
    };
    if s == t {
        return Ok(DistResult::Exact(Rational::zero()));
    }
    let depth = depth.unwrap_or(available);
    if depth > available {
        return Err(Error::DepthBudgetExceeded);
    }
    let tail = tail_bound(depth)?;
    let lo = partial_sum(s, t, depth);
    let hi = &lo + &tail;
    Ok(DistResult::Bracket { lo, hi, depth })
}

/// Distance from `s` to the class `{υ : g(υ) = σ}` of a word `σ ∈ Σ_n`.
///
/// The class fixes the first `n` digits to `σ` and digit `n + 1` to `∞`,
/// leaving the rest free, so the infimum of `ρ^ℕ(s, υ)` over it is the
/// exact finite sum over positions `1..=n+1`. A sequence tends to `σ` in the
/// quotient topology on `Σ` iff this distance tends to zero.
pub fn class_dist(s: &Seq, sigma: &Word) -> Rational {
    partial_sum(s, &Seq::Word(sigma.clone()), sigma.len() + 1)
}
