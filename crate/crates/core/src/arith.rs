//! Exact-arithmetic helpers shared by every module: the [`Prime`] newtype,
//! rational powers of `p`, and decimal rendering of exact rationals.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// A rational prime `p`, checked on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn big(self) -> BigUint {
        BigUint::from(self.0)
    }

    /// `p^e` as an exact integer.
    pub fn pow(self, e: u32) -> BigUint {
        self.big().pow(e)
    }

    /// `q^e = p^(-e)` as an exact rational.
    pub fn q_pow(self, e: u32) -> Rational {
        Rational::new(BigInt::one(), BigInt::from(self.pow(e)))
    }

    /// `p^e` for a signed exponent.
    pub fn pow_signed(self, e: i64) -> Rational {
        if e >= 0 {
            Rational::from_integer(BigInt::from(self.pow(e as u32)))
        } else {
            self.q_pow((-e) as u32)
        }
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for Prime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let p: u64 = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("not an integer: {s:?}")))?;
        Prime::new(p)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int<T: Into<BigInt>>(n: T) -> Rational {
    Rational::from_integer(n.into())
}

/// `∏_{i=lo}^{hi} (1 - p^{-i})`, empty (= 1) when `lo > hi`.
pub fn q_pochhammer(p: Prime, lo: u32, hi: u32) -> Rational {
    let mut acc = Rational::one();
    for i in lo.max(1)..=hi {
        acc *= Rational::one() - p.q_pow(i);
    }
    acc
}

/// `|GL(r, p)| = ∏_{i=0}^{r-1} (p^r - p^i)`.
pub fn gl_order(r: u32, p: Prime) -> BigUint {
    let pr = p.pow(r);
    (0..r).fold(BigUint::one(), |acc, i| acc * (&pr - p.pow(i)))
}

pub fn to_f64(x: &Rational) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Scale down huge numerators/denominators before converting.
    let n = x.numer().bits() as i64;
    let d = x.denom().bits() as i64;
    let shift = (n - d) - 60;
    let scaled = if shift > 0 {
        x / Rational::from_integer(BigInt::one() << shift as usize)
    } else {
        x * Rational::from_integer(BigInt::one() << (-shift) as usize)
    };
    let num = scaled.numer() / scaled.denom();
    num.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

/// Round `x` to `digits` decimal places, ties to even.
pub fn round_half_even(x: &Rational, digits: u32) -> BigInt {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = x * Rational::from_integer(scale);
    let (num, den) = (scaled.numer().clone(), scaled.denom().clone());
    let (q, r) = num.div_mod_floor(&den);
    let twice = r * 2u32;
    match twice.cmp(&den) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1u32,
        std::cmp::Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1u32
            }
        }
    }
}

/// Fixed-point decimal rendering with half-even rounding.
pub fn decimal_string(x: &Rational, digits: u32) -> String {
    let rounded = round_half_even(x, digits);
    let neg = rounded.sign() == Sign::Minus;
    let mut s = rounded.abs().to_string();
    if digits == 0 {
        return if neg { format!("-{s}") } else { s };
    }
    let d = digits as usize;
    if s.len() <= d {
        s = format!("{}{}", "0".repeat(d + 1 - s.len()), s);
    }
    let (int, frac) = s.split_at(s.len() - d);
    format!("{}{}.{}", if neg { "-" } else { "" }, int, frac)
}

/// Short scientific rendering of a nonnegative bound, rounded upwards so the
/// printed number is still a valid upper bound.
pub fn bound_string(x: &Rational) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let v = to_f64(x);
    if v == 0.0 {
        return "0".to_string();
    }
    let exp = v.log10().floor() as i32;
    let mant = v / 10f64.powi(exp);
    let mant = (mant * 100.0).ceil() / 100.0;
    format!("{mant:.2}e{exp}")
}

/// `10^{-digits} / 2` as an exact rational.
pub fn half_ulp(digits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(10u32).pow(digits) * 2u32)
}
