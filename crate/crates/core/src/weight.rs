//! Exact rational weights.
//!
//! Every edge weight, dual variable and objective value in the decoder is a
//! [`Weight`]: an arbitrary-precision rational kept in lowest terms. There is
//! no tolerance anywhere; tightness and optimality are decided by equality.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Weight(BigRational);

impl Weight {
    pub fn zero() -> Self {
        Weight(BigRational::zero())
    }

    pub fn one() -> Self {
        Weight(BigRational::one())
    }

    pub fn from_integer(value: i64) -> Self {
        Weight(BigRational::from_integer(BigInt::from(value)))
    }

    /// Panics if `denominator` is zero.
    pub fn new(numerator: i64, denominator: i64) -> Self {
        assert!(denominator != 0, "zero denominator");
        Weight(BigRational::new(BigInt::from(numerator), BigInt::from(denominator)))
    }

    pub fn from_big(numerator: BigInt, denominator: BigInt) -> Result<Self, Error> {
        if denominator.is_zero() {
            return Err(Error::MalformedRational(format!("{numerator}/0")));
        }
        Ok(Weight(BigRational::new(numerator, denominator)))
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always positive.
    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Weight(self.0.abs())
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    /// Lossy; for reporting only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Edge weight `ln((1 - p) / p)` for an error probability `p` in `(0, 1)`.
    ///
    /// The logarithm is approximated to `fractional_bits` binary digits,
    /// rounded to nearest, so the result has denominator `2^fractional_bits`.
    /// The approximation is odd in `p - 1/2`, so swapping `p` and `1 - p`
    /// negates the weight exactly.
    pub fn from_probability(p: &Weight, fractional_bits: u32) -> Result<Self, Error> {
        if !p.is_positive() || p >= &Weight::one() {
            return Err(Error::ProbabilityOutOfRange(p.to_string()));
        }
        let odds = &(&Weight::one() - p) / p;
        let numerator = odds.numerator().magnitude().clone();
        let denominator = odds.denominator().magnitude().clone();
        if numerator == denominator {
            return Ok(Weight::zero());
        }
        let (big, small, sign) = if numerator > denominator {
            (numerator, denominator, Sign::Plus)
        } else {
            (denominator, numerator, Sign::Minus)
        };
        let scaled = ln_ratio_fixed(&big, &small, fractional_bits);
        let numerator = BigInt::from_biguint(sign, scaled);
        Weight::from_big(numerator, BigInt::one() << fractional_bits)
    }
}

/// Default number of fractional bits used by [`Weight::from_probability`].
pub const DEFAULT_LOG_BITS: u32 = 64;

/// `round(ln(a / b) * 2^bits)` for `a > b > 0`.
fn ln_ratio_fixed(a: &BigUint, b: &BigUint, bits: u32) -> BigUint {
    // 64 guard bits keep the accumulated series truncation error far below
    // half an output ulp.
    let guard = 64u32;
    let precision = bits + guard;
    let one = BigUint::one() << precision;

    // a / b = m * 2^k with m in [1, 2)
    let mut k: u64 = a.bits() - b.bits();
    let mut shifted_b = b << k;
    if &shifted_b > a {
        k -= 1;
        shifted_b = b << k;
    }
    // m = a / shifted_b in fixed point
    let m = (a << precision) / &shifted_b;

    let ln2 = atanh_series(&BigUint::from(1u32), &BigUint::from(3u32), precision) << 1;
    // ln m = 2 atanh((m - 1) / (m + 1))
    let ln_m = atanh_series(&(&m - &one), &(&m + &one), precision) << 1;

    let total = ln2 * BigUint::from(k) + ln_m;
    let half = BigUint::one() << (guard - 1);
    (total + half) >> guard
}

/// `atanh(num / den) * 2^precision` for `0 <= num / den <= 1/3`, truncated.
fn atanh_series(num: &BigUint, den: &BigUint, precision: u32) -> BigUint {
    let mut sum = BigUint::zero();
    let mut power = (num << precision) / den;
    let ratio_sq_num = num * num;
    let ratio_sq_den = den * den;
    let mut index = 1u32;
    while !power.is_zero() {
        sum += &power / BigUint::from(index);
        power = power * &ratio_sq_num / &ratio_sq_den;
        index += 2;
    }
    sum
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Weight {
    type Err = Error;

    /// Accepts `"n"` or `"n/d"` with decimal integers; `d` must be nonzero.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let malformed = || Error::MalformedRational(text.to_string());
        let parse_int = |part: &str| -> Result<BigInt, Error> {
            let trimmed = part.trim();
            let digits = trimmed.strip_prefix(['-', '+']).unwrap_or(trimmed);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            trimmed.parse::<BigInt>().map_err(|_| malformed())
        };
        match text.split_once('/') {
            None => Ok(Weight(BigRational::from_integer(parse_int(text)?))),
            Some((n, d)) => {
                let denominator = parse_int(d)?;
                if denominator.is_zero() || d.trim().starts_with(['-', '+']) {
                    return Err(malformed());
                }
                Weight::from_big(parse_int(n)?, denominator)
            }
        }
    }
}

impl From<i64> for Weight {
    fn from(value: i64) -> Self {
        Weight::from_integer(value)
    }
}

impl From<BigRational> for Weight {
    fn from(value: BigRational) -> Self {
        Weight(value)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Weight> for &Weight {
            type Output = Weight;
            fn $method(self, rhs: &Weight) -> Weight {
                Weight($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<Weight> for Weight {
            type Output = Weight;
            fn $method(self, rhs: Weight) -> Weight {
                Weight($trait::$method(self.0, rhs.0))
            }
        }
        impl $trait<&Weight> for Weight {
            type Output = Weight;
            fn $method(self, rhs: &Weight) -> Weight {
                Weight($trait::$method(self.0, &rhs.0))
            }
        }
        impl $trait<Weight> for &Weight {
            type Output = Weight;
            fn $method(self, rhs: Weight) -> Weight {
                Weight($trait::$method(&self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Weight> for Weight {
    fn add_assign(&mut self, rhs: &Weight) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Weight> for Weight {
    fn add_assign(&mut self, rhs: Weight) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Weight> for Weight {
    fn sub_assign(&mut self, rhs: &Weight) {
        self.0 -= &rhs.0;
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(-self.0)
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(-&self.0)
    }
}

impl Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        iter.fold(Weight::zero(), |acc, w| acc + w)
    }
}

impl<'a> Sum<&'a Weight> for Weight {
    fn sum<I: Iterator<Item = &'a Weight>>(iter: I) -> Weight {
        iter.fold(Weight::zero(), |acc, w| acc + w)
    }
}

impl serde::Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Weight {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Least common multiple of the denominators, used to move a weight vector
/// onto the integers.
pub(crate) fn common_denominator<'a>(weights: impl IntoIterator<Item = &'a Weight>) -> BigInt {
    weights
        .into_iter()
        .fold(BigInt::one(), |acc, w| acc.lcm(w.denominator()))
}
