//! Number types for measure values: `f64` or exact big rationals.

use alloc::string::String;
use core::fmt::{Debug, Display};
use core::ops::{Add, Div, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Field operations shared by the floating and exact evaluation modes.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_f64(x: f64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;

    fn from_usize(n: usize) -> Self {
        Self::from_ratio(n as i64, 1)
    }

    fn pow(&self, n: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = base.clone() * &base;
            }
        }
        acc
    }

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn from_rational(r: &Rational) -> Self {
        Scalar::to_f64(r)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn pow(&self, n: usize) -> Self {
        libm::pow(*self, n as f64)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(x: f64) -> Self {
        Rational::from_float(x).unwrap_or_else(Rational::zero)
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// A probability parameter as typed by the user.
///
/// `"2/3"` parses to an exact rational, `"0.75"` to a float; exact values
/// select the rational evaluation mode.
#[derive(Clone, Debug, PartialEq)]
pub enum Prob {
    Exact(Rational),
    Float(f64),
}

impl Prob {
    pub fn is_exact(&self) -> bool {
        matches!(self, Prob::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Prob::Exact(r) => Scalar::to_f64(r),
            Prob::Float(x) => *x,
        }
    }

    pub fn to_scalar<S: Scalar>(&self) -> S {
        match self {
            Prob::Exact(r) => S::from_rational(r),
            Prob::Float(x) => S::from_f64(*x),
        }
    }

    pub fn to_rational(&self) -> Rational {
        match self {
            Prob::Exact(r) => r.clone(),
            Prob::Float(x) => Rational::from_f64(*x),
        }
    }

    /// Requires `0 < p < 1`.
    pub fn check_open_unit(&self) -> Result<()> {
        let ok = match self {
            Prob::Exact(r) => *r > Rational::zero() && *r < Rational::one(),
            Prob::Float(x) => *x > 0.0 && *x < 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(alloc::format!(
                "probability must lie in (0,1), got {self}"
            )))
        }
    }

    /// Requires `0 ≤ p ≤ 1`.
    pub fn check_closed_unit(&self) -> Result<()> {
        let ok = match self {
            Prob::Exact(r) => *r >= Rational::zero() && *r <= Rational::one(),
            Prob::Float(x) => (0.0..=1.0).contains(x),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(alloc::format!(
                "probability must lie in [0,1], got {self}"
            )))
        }
    }
}

impl FromStr for Prob {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n
                .trim()
                .parse()
                .map_err(|_| Error::Parse(alloc::format!("bad numerator in {s:?}")))?;
            let d: BigInt = d
                .trim()
                .parse()
                .map_err(|_| Error::Parse(alloc::format!("bad denominator in {s:?}")))?;
            if d.is_zero() {
                return Err(Error::Parse(String::from("zero denominator")));
            }
            Ok(Prob::Exact(Rational::new(n, d)))
        } else {
            let x: f64 = s
                .parse()
                .map_err(|_| Error::Parse(alloc::format!("not a probability: {s:?}")))?;
            if !x.is_finite() {
                return Err(Error::Parse(alloc::format!("not a probability: {s:?}")));
            }
            Ok(Prob::Float(x))
        }
    }
}

impl Display for Prob {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Prob::Exact(r) => write!(f, "{r}"),
            Prob::Float(x) => write!(f, "{x}"),
        }
    }
}

/// `x ln x` with the convention `0 ln 0 = 0`.
pub fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * libm::log(x)
    }
}
