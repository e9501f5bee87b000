//! Double-double arithmetic (an unevaluated sum `hi + lo` of two `f64`s).
//!
//! Gives roughly 106 bits of significand, enough to carry greedy orbits of
//! `T_β` for several dozen steps before the digit decisions degrade.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Unit roundoff of double-double arithmetic, `2^-104`.
pub const EPS: f64 = 4.930_380_657_631_324e-32;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    // Dekker split; inputs here stay far from overflow.
    let t = 134_217_729.0 * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub const fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn from_parts(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        Dd { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn floor(self) -> Self {
        let fh = libm::floor(self.hi);
        if fh == self.hi {
            let (hi, lo) = quick_two_sum(fh, libm::floor(self.lo));
            Dd { hi, lo }
        } else {
            Dd { hi: fh, lo: 0.0 }
        }
    }

    /// Nearest integer, ties away from zero.
    pub fn round(self) -> Self {
        (self + Dd::from_f64(0.5)).floor()
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

    pub fn recip(self) -> Self {
        Dd::ONE / self
    }

    /// `self^n` by repeated squaring.
    pub fn powi(self, mut n: u32) -> Self {
        let mut base = self;
        let mut acc = Dd::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }

    /// Natural logarithm, accurate to double precision.
    pub fn ln(self) -> f64 {
        libm::log(self.hi) + libm::log1p(self.lo / self.hi)
    }

    /// Parses a plain decimal literal such as `1.8` or `1.4655712319`.
    pub fn parse_decimal(s: &str) -> Result<Self> {
        let s = s.trim();
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(Error::Parse(String::from("empty number")));
        }
        let ten = Dd::from_f64(10.0);
        let mut value = Dd::ZERO;
        let mut scale = Dd::ONE;
        for (i, ch) in int_part.chars().chain(frac_part.chars()).enumerate() {
            let d = ch
                .to_digit(10)
                .ok_or_else(|| Error::Parse(alloc::format!("not a decimal number: {s:?}")))?;
            value = value * ten + Dd::from_f64(d as f64);
            if i >= int_part.len() {
                scale = scale * ten;
            }
        }
        Ok(value / scale)
    }

    /// Decimal rendering with `digits` fractional digits (truncated).
    pub fn to_decimal_string(self, digits: usize) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        let mut x = self;
        if x < Dd::ZERO {
            out.push('-');
            x = -x;
        }
        let int = x.floor();
        let _ = write!(out, "{}", int.to_f64() as u64);
        let mut frac = x - int;
        if digits > 0 {
            out.push('.');
        }
        for _ in 0..digits {
            frac = frac.mul_f64(10.0);
            let d = frac.floor();
            let dv = (d.to_f64() as i64).clamp(0, 9);
            out.push(char::from(b'0' + dv as u8));
            frac = frac - Dd::from_f64(dv as f64);
        }
        out
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::from_f64(x)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from_f64(q3)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            ord => Some(ord),
        }
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(30);
        f.write_str(&self.to_decimal_string(digits))
    }
}
