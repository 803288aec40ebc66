//! Exact rational scalars and N-adic structure predicates.
//!
//! Every coordinate, slope and translation in the crate is a [`Rational`].
//! Values are always reduced with a positive denominator, so derived
//! equality is structural.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    /// Convenience constructor for literals; panics on a zero denominator.
    pub fn frac(numer: i64, denom: i64) -> Self {
        Self::new(numer, denom).expect("nonzero denominator")
    }

    pub fn integer(value: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(value.into()))
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

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(self.0.recip()))
    }

    /// `base^exponent` for any integer exponent.
    pub fn power(base: u32, exponent: i64) -> Self {
        let magnitude = BigInt::from(base).pow(exponent.unsigned_abs() as u32);
        if exponent >= 0 {
            Rational::integer(magnitude)
        } else {
            Rational(BigRational::new(BigInt::one(), magnitude))
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(value: BigRational) -> Self {
        Rational(value)
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::integer(value)
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
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `a` or `a/b` with optional sign on `a`; surrounding whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        let offset = s.len() - s.trim_start().len();
        let parse_int = |text: &str, pos: usize| -> Result<BigInt> {
            if text.is_empty() {
                return Err(Error::parse(pos, "expected an integer"));
            }
            text.parse::<BigInt>()
                .map_err(|_| Error::parse(pos, format!("invalid integer `{text}`")))
        };
        match trimmed.split_once('/') {
            None => Ok(Rational::integer(parse_int(trimmed, offset)?)),
            Some((num, den)) => {
                let n = parse_int(num, offset)?;
                let den_pos = offset + num.len() + 1;
                if den.starts_with(['+', '-']) {
                    return Err(Error::parse(den_pos, "denominator must be unsigned"));
                }
                let d = parse_int(den, den_pos)?;
                Rational::new(n, d).map_err(|_| Error::parse(den_pos, "zero denominator"))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
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
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Division panics on a zero divisor, like the integer types.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

fn check_base(n: u32) -> Result<()> {
    if n < 2 {
        Err(Error::InvalidBase(n))
    } else {
        Ok(())
    }
}

/// True iff the reduced denominator of `q` divides some power of `n`.
///
/// Works for composite `n` by repeatedly stripping `gcd(denominator, n)`.
pub fn is_nadic(q: &Rational, n: u32) -> Result<bool> {
    check_base(n)?;
    let base = BigInt::from(n);
    let mut den = q.denom().clone();
    loop {
        if den.is_one() {
            return Ok(true);
        }
        let g = den.gcd(&base);
        if g.is_one() {
            return Ok(false);
        }
        den /= g;
    }
}

/// Smallest `r >= 0` with `q * n^r` integral, or `None` when `q` is not N-adic.
pub fn nadic_level(q: &Rational, n: u32) -> Result<Option<u32>> {
    if !is_nadic(q, n)? {
        return Ok(None);
    }
    let base = BigInt::from(n);
    let mut power = BigInt::one();
    let mut level = 0u32;
    while !(&power % q.denom()).is_zero() {
        power *= &base;
        level += 1;
    }
    Ok(Some(level))
}

/// The integer `a` with `q = a / n^r`.
pub fn numerator_at_level(q: &Rational, n: u32, r: u32) -> Result<BigInt> {
    check_base(n)?;
    let scaled = q.as_big() * BigRational::from_integer(BigInt::from(n).pow(r));
    if !scaled.is_integer() {
        return Err(Error::LevelTooLow {
            value: q.to_string(),
            base: n,
            level: r,
        });
    }
    Ok(scaled.to_integer())
}

/// Returns `p` when `q = n^p`.
pub fn power_of_n_exponent(q: &Rational, n: u32) -> Result<Option<i64>> {
    check_base(n)?;
    if !q.is_positive() {
        return Err(Error::NonPositive(q.to_string()));
    }
    let (magnitude, sign) = if q.numer().is_one() {
        (q.denom(), -1)
    } else if q.denom().is_one() {
        (q.numer(), 1)
    } else {
        return Ok(None);
    };
    let base = BigInt::from(n);
    let mut rest = magnitude.clone();
    let mut count = 0i64;
    while !rest.is_one() {
        let (quot, rem) = rest.div_rem(&base);
        if !rem.is_zero() {
            return Ok(None);
        }
        rest = quot;
        count += 1;
    }
    Ok(Some(sign * count))
}
