//! Exact rationals and the Fibonacci numbers.
//!
//! [`Rational`] is a thin newtype over `num_rational::BigRational`, which is
//! always kept in lowest terms with a positive denominator. Fibonacci numbers
//! come from the recurrence; Binet's closed form is only used as a float
//! cross-check.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest index for which the float Binet formula still resolves integers.
pub const BINET_MAX_INDEX: u32 = 70;

/// An exact fraction of unbounded integers in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

/// Builds `p/q` in lowest terms.
pub fn rat(p: i64, q: i64) -> Result<Rational> {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

impl Rational {
    pub fn new(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    /// Builds a fraction the caller already knows to be reduced with `denom > 0`.
    pub(crate) fn new_reduced(numer: BigInt, denom: BigInt) -> Self {
        debug_assert!(denom.is_positive());
        debug_assert!(numer.gcd(&denom).is_one());
        Rational(BigRational::new_raw(numer, denom))
    }

    pub fn from_integer<T: Into<BigInt>>(n: T) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// `1/x`; fails on zero.
    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(self.0.recip()))
    }

    /// Greatest integer `≤ self`.
    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// `self − ⌊self⌋`, always in `[0, 1)`.
    pub fn fract(&self) -> Self {
        Rational(&self.0 - self.0.floor())
    }

    /// Whether `0 ≤ self ≤ 1`.
    pub fn in_unit_interval(&self) -> bool {
        !self.0.is_negative() && self.0 <= BigRational::one()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering rounded half away from zero to `places` digits.
    pub fn to_decimal(&self, places: usize) -> String {
        let scale = BigInt::from(10u32).pow(places as u32);
        let scaled = &self.0 * BigRational::from_integer(scale.clone());
        let rounded = scaled.round().to_integer();
        let negative = rounded.is_negative();
        let (int_part, frac_part) = rounded.abs().div_rem(&scale);
        let sign = if negative { "-" } else { "" };
        if places == 0 {
            return format!("{sign}{int_part}");
        }
        format!(
            "{sign}{int_part}.{:0>width$}",
            frac_part.to_string(),
            width = places
        )
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

// Division panics on a zero divisor, like the integer types; use
// `Rational::recip` for a checked reciprocal.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_int(s: &str) -> Result<BigInt> {
    let digits = s.strip_prefix('+').unwrap_or(s);
    let body = digits.strip_prefix('-').unwrap_or(digits);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("invalid integer `{s}`")));
    }
    BigInt::from_str(digits).map_err(|e| Error::Parse(format!("invalid integer `{s}`: {e}")))
}

/// Accepts `p/q`, a bare integer, or a finite decimal such as `0.49`
/// (read exactly as `49/100`).
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            return Rational::new(parse_int(p.trim())?, parse_int(q.trim())?);
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            let negative = int_part.starts_with('-');
            let int_digits = int_part.trim_start_matches(['+', '-']);
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parse(format!("invalid decimal `{s}`")));
            }
            if !int_digits.bytes().all(|b| b.is_ascii_digit())
                || int_part.len() > int_digits.len() + 1
            {
                return Err(Error::Parse(format!("invalid decimal `{s}`")));
            }
            let whole = format!("{int_digits}{frac_part}");
            let mut numer = parse_int(&whole)?;
            if negative {
                numer = -numer;
            }
            let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
            return Rational::new(numer, denom);
        }
        Ok(Rational::from_integer(parse_int(s)?))
    }
}

/// The Fibonacci number `F_n` with `F_0 = 0`, `F_1 = 1`.
pub fn fib(n: u32) -> BigUint {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// `F_0, F_1, F_2, …` by the recurrence.
#[derive(Debug, Clone)]
pub struct Fibonacci {
    current: BigUint,
    next: BigUint,
}

impl Default for Fibonacci {
    fn default() -> Self {
        Fibonacci {
            current: BigUint::zero(),
            next: BigUint::one(),
        }
    }
}

impl Iterator for Fibonacci {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        let following = &self.current + &self.next;
        let out = std::mem::replace(
            &mut self.current,
            std::mem::replace(&mut self.next, following),
        );
        Some(out)
    }
}

/// Binet's closed form in double precision.
pub fn binet(n: u32) -> f64 {
    let sqrt5 = 5f64.sqrt();
    let phi = (1.0 + sqrt5) / 2.0;
    let psi = (1.0 - sqrt5) / 2.0;
    (phi.powi(n as i32) - psi.powi(n as i32)) / sqrt5
}

/// Whether the recurrence and the rounded float Binet value agree at `n`.
pub fn fib_binet_check(n: u32) -> Result<bool> {
    if n > BINET_MAX_INDEX {
        return Err(Error::FloatUnsafeDepth);
    }
    let exact = fib(n).to_u64().expect("F_70 fits in u64");
    Ok(binet(n).round() as u64 == exact)
}
