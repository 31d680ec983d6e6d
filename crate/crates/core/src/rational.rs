//! Exact degrees and their decimal renderings.

use std::fmt;
use std::ops::{Add, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational in [0, 1], kept in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Degree(Ratio<u64>);

impl Degree {
    pub const ZERO: Degree = Degree(Ratio::new_raw(0, 1));
    pub const ONE: Degree = Degree(Ratio::new_raw(1, 1));

    pub fn new(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 || numer > denom {
            return Err(Error::Domain(format!(
                "{numer}/{denom} is not a degree in [0,1]"
            )));
        }
        Ok(Degree(Ratio::new(numer, denom)))
    }

    /// `numer / denom` for callers that already know the bound holds.
    pub(crate) fn frac(numer: u64, denom: u64) -> Self {
        debug_assert!(denom > 0 && numer <= denom);
        Degree(Ratio::new(numer, denom))
    }

    pub(crate) fn from_ratio(r: Ratio<u64>) -> Self {
        debug_assert!(r <= Ratio::from_integer(1));
        Degree(r)
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn ratio(&self) -> Ratio<u64> {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn abs_diff(self, other: Degree) -> Degree {
        if self >= other {
            Degree(self.0 - other.0)
        } else {
            Degree(other.0 - self.0)
        }
    }

    /// `self - other`, possibly negative.
    pub fn signed_sub(self, other: Degree) -> SignedDegree {
        SignedDegree::from(self) - SignedDegree::from(other)
    }

    /// The larger distance to the bounds 0 and 1; never below 1/2.
    pub fn max_distance_to_bounds(self) -> Degree {
        let complement = Degree(Ratio::from_integer(1) - self.0);
        self.max(complement)
    }

    pub fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(self.numer()), BigInt::from(self.denom()))
    }

    /// Decimal rounded to `places` digits after the point.
    pub fn to_fixed(&self, places: usize) -> String {
        fixed(&self.to_big(), places)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A signed exact rational, used for value impacts.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedDegree(Ratio<i64>);

impl SignedDegree {
    pub const ZERO: SignedDegree = SignedDegree(Ratio::new_raw(0, 1));

    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(SignedDegree(Ratio::new(numer, denom)))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn abs(&self) -> Degree {
        Degree::frac(self.numer().unsigned_abs(), self.denom() as u64)
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(self.numer()), BigInt::from(self.denom()))
    }

    pub fn to_fixed(&self, places: usize) -> String {
        fixed(&self.to_big(), places)
    }
}

impl From<Degree> for SignedDegree {
    fn from(d: Degree) -> Self {
        SignedDegree(Ratio::new(d.numer() as i64, d.denom() as i64))
    }
}

impl Add for SignedDegree {
    type Output = SignedDegree;

    fn add(self, rhs: Self) -> Self {
        SignedDegree(self.0 + rhs.0)
    }
}

impl Sub for SignedDegree {
    type Output = SignedDegree;

    fn sub(self, rhs: Self) -> Self {
        SignedDegree(self.0 - rhs.0)
    }
}

impl fmt::Display for SignedDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for SignedDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for SignedDegree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn pow10(e: usize) -> BigInt {
    num_traits::pow(BigInt::from(10u8), e)
}

/// Integer division rounding halves away from zero; `d` must be positive.
fn div_round(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.abs().div_rem(d);
    let q = if r * 2u8 >= *d { q + 1u8 } else { q };
    if n.sign() == Sign::Minus {
        -q
    } else {
        q
    }
}

/// Inserts a decimal point `places` digits from the right of `|digits|`.
fn place_point(digits: &BigInt, places: usize, negative: bool) -> String {
    let mut s = digits.abs().to_string();
    if s.len() <= places {
        s = format!("{}{}", "0".repeat(places + 1 - s.len()), s);
    }
    let (int, frac) = s.split_at(s.len() - places);
    let mut out = String::new();
    if negative && !digits.is_zero() {
        out.push('-');
    }
    out.push_str(int);
    if places > 0 {
        out.push('.');
        out.push_str(frac);
    }
    out
}

/// Fixed-point rendering with exactly `places` fractional digits.
pub fn fixed(v: &BigRational, places: usize) -> String {
    let scaled = div_round(&(v.numer() * pow10(places)), v.denom());
    place_point(&scaled, places, v.is_negative())
}

/// Rounds to `sig` significant digits and prints in positional notation with
/// trailing zeros removed (like C's `%.12g` without the exponent form).
pub fn significant(v: &BigRational, sig: usize) -> String {
    assert!(sig > 0);
    if v.is_zero() {
        return "0".to_string();
    }
    let abs = v.abs();
    // leading exponent e with 10^e <= |v| < 10^(e+1)
    let mut e: i64 = abs.numer().to_string().len() as i64 - abs.denom().to_string().len() as i64;
    let ten = BigRational::from_integer(BigInt::from(10u8));
    let pow = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(pow10(k as usize))
        } else {
            BigRational::new(BigInt::from(1u8), pow10((-k) as usize))
        }
    };
    while abs < pow(e) {
        e -= 1;
    }
    while abs >= pow(e) * &ten {
        e += 1;
    }
    let mut places = sig as i64 - 1 - e;
    let mut digits = round_scaled(&abs, places);
    if digits.to_string().len() > sig {
        places -= 1;
        digits = round_scaled(&abs, places);
    }
    let mut out = if places > 0 {
        place_point(&digits, places as usize, false)
    } else {
        (digits * pow10((-places) as usize)).to_string()
    };
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    if v.is_negative() {
        out.insert(0, '-');
    }
    out
}

fn round_scaled(abs: &BigRational, places: i64) -> BigInt {
    if places >= 0 {
        div_round(&(abs.numer() * pow10(places as usize)), abs.denom())
    } else {
        div_round(abs.numer(), &(abs.denom() * pow10((-places) as usize)))
    }
}

/// Lossy conversion used only for diagnostics.
pub fn approx(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn degrees_are_reduced_and_bounded() {
        let d = Degree::new(2, 6).unwrap();
        assert_eq!((d.numer(), d.denom()), (1, 3));
        assert_eq!(d.to_string(), "1/3");
        assert_eq!(Degree::ONE.to_string(), "1");
        assert!(Degree::new(4, 3).is_err());
        assert!(Degree::new(0, 0).is_err());
    }

    #[test]
    fn differences() {
        let third = Degree::new(1, 3).unwrap();
        let half = Degree::new(1, 2).unwrap();
        assert_eq!(third.abs_diff(half), Degree::new(1, 6).unwrap());
        assert_eq!(half.abs_diff(third), Degree::new(1, 6).unwrap());
        assert_eq!(third.signed_sub(half).to_string(), "-1/6");
        assert_eq!(third.max_distance_to_bounds(), Degree::new(2, 3).unwrap());
    }

    #[test]
    fn fixed_rendering() {
        assert_eq!(fixed(&big(1, 3), 6), "0.333333");
        assert_eq!(fixed(&big(2, 3), 6), "0.666667");
        assert_eq!(fixed(&big(1, 1), 6), "1.000000");
        assert_eq!(fixed(&big(-1, 4), 6), "-0.250000");
        assert_eq!(fixed(&big(0, 1), 2), "0.00");
    }

    #[test]
    fn significant_rendering() {
        assert_eq!(significant(&big(1, 3), 12), "0.333333333333");
        assert_eq!(significant(&big(2, 3), 12), "0.666666666667");
        assert_eq!(significant(&big(1, 2), 12), "0.5");
        assert_eq!(significant(&big(1, 1), 12), "1");
        assert_eq!(significant(&big(0, 1), 12), "0");
        assert_eq!(significant(&big(1, 30000), 12), "0.0000333333333333");
        assert_eq!(significant(&big(-11, 12), 3), "-0.917");
        assert_eq!(significant(&big(999_999, 1_000_000), 3), "1");
        assert_eq!(significant(&big(123_456, 1), 3), "123000");
    }
}
