//! Eventually periodic digit sequences and their text grammar.
//!
//! Accepted forms, separated by whitespace and concatenated left to right:
//!
//! * plain digits: `110`
//! * run-length: `0^3`, `(10)^2`
//! * a trailing period: `per(100)`, `(100)^inf`, `1^inf`
//! * an optional trailing `0^inf` on finite tails
//!
//! So `"1 0^3 1"`, `"1 1"`, `"per(10)"` and `"11 0^inf"` all parse.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// `preperiod · period^∞`; an empty period means the tail is `0^∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitTail {
    preperiod: Vec<u8>,
    period: Vec<u8>,
}

impl DigitTail {
    /// Builds and canonicalises a tail.
    pub fn new(preperiod: Vec<u8>, period: Vec<u8>) -> Self {
        let mut t = DigitTail { preperiod, period };
        t.normalize();
        t
    }

    pub fn finite(digits: Vec<u8>) -> Self {
        Self::new(digits, Vec::new())
    }

    pub fn periodic(period: Vec<u8>) -> Self {
        Self::new(Vec::new(), period)
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    /// Digit at 1-based position `j`.
    pub fn digit(&self, j: usize) -> u8 {
        debug_assert!(j >= 1);
        let i = j - 1;
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else if self.period.is_empty() {
            0
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Vec<u8> {
        (1..=n).map(|j| self.digit(j)).collect()
    }

    pub fn max_digit(&self) -> u8 {
        self.preperiod
            .iter()
            .chain(self.period.iter())
            .copied()
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.max_digit() == 0
    }

    /// The shifted tail `σ^k(self)`.
    pub fn shifted(&self, k: usize) -> DigitTail {
        if k <= self.preperiod.len() {
            return DigitTail::new(self.preperiod[k..].to_vec(), self.period.clone());
        }
        if self.period.is_empty() {
            return DigitTail::new(Vec::new(), Vec::new());
        }
        let r = (k - self.preperiod.len()) % self.period.len();
        let mut per = self.period[r..].to_vec();
        per.extend_from_slice(&self.period[..r]);
        DigitTail::new(Vec::new(), per)
    }

    /// Number of positions after which both `self` and any shift of it are
    /// known to have repeated: comparing this many digits decides order.
    pub fn decision_horizon(&self) -> usize {
        self.preperiod.len() + self.period.len().max(1)
    }

    /// Lexicographic comparison of the two infinite sequences.
    pub fn lex_cmp(&self, other: &DigitTail) -> Ordering {
        let horizon = self.decision_horizon() + other.decision_horizon() + self.period.len() * other.period.len().max(1);
        for j in 1..=horizon {
            match self.digit(j).cmp(&other.digit(j)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    fn normalize(&mut self) {
        if self.period.iter().all(|&d| d == 0) {
            self.period.clear();
        }
        if !self.period.is_empty() {
            // primitive root of the period
            let n = self.period.len();
            if let Some(root) = (1..n)
                .filter(|d| n.is_multiple_of(*d))
                .find(|&d| (d..n).all(|i| self.period[i] == self.period[i - d]))
            {
                self.period.truncate(root);
            }
            // fold the preperiod tail into a rotation of the period
            while let (Some(&last), Some(&plast)) = (self.preperiod.last(), self.period.last()) {
                if last != plast {
                    break;
                }
                self.preperiod.pop();
                self.period.rotate_right(1);
            }
        } else {
            while self.preperiod.last() == Some(&0) {
                self.preperiod.pop();
            }
        }
    }
}

fn parse_digits(s: &str) -> Result<Vec<u8>> {
    if s.is_empty() {
        return Err(Error::Parse(String::from("empty digit group")));
    }
    s.chars()
        .map(|c| {
            c.to_digit(10)
                .map(|d| d as u8)
                .ok_or_else(|| Error::Parse(alloc::format!("bad digit {c:?} in {s:?}")))
        })
        .collect()
}

fn strip_parens(s: &str) -> &str {
    s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s)
}

impl FromStr for DigitTail {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut pre = Vec::new();
        let mut period: Option<Vec<u8>> = None;
        let tokens: Vec<&str> = s.split_whitespace().collect();
        if tokens.is_empty() {
            return Err(Error::Parse(String::from("empty digit tail")));
        }
        for (i, tok) in tokens.iter().enumerate() {
            if period.is_some() {
                return Err(Error::Parse(alloc::format!(
                    "nothing may follow the period, found {tok:?}"
                )));
            }
            let last = i + 1 == tokens.len();
            if let Some(inner) = tok.strip_prefix("per(").and_then(|t| t.strip_suffix(')')) {
                if !last {
                    return Err(Error::Parse(String::from("per(...) must come last")));
                }
                period = Some(parse_digits(inner)?);
            } else if let Some((base, exp)) = tok.split_once('^') {
                let block = parse_digits(strip_parens(base))?;
                if exp == "inf" {
                    if !last {
                        return Err(Error::Parse(String::from("^inf must come last")));
                    }
                    period = Some(block);
                } else {
                    let k: usize = exp
                        .parse()
                        .map_err(|_| Error::Parse(alloc::format!("bad exponent in {tok:?}")))?;
                    for _ in 0..k {
                        pre.extend_from_slice(&block);
                    }
                }
            } else {
                pre.extend(parse_digits(tok)?);
            }
        }
        Ok(DigitTail::new(pre, period.unwrap_or_default()))
    }
}

impl fmt::Display for DigitTail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.preperiod {
            write!(f, "{d}")?;
        }
        if !self.period.is_empty() {
            if !self.preperiod.is_empty() {
                f.write_str(" ")?;
            }
            f.write_str("per(")?;
            for d in &self.period {
                write!(f, "{d}")?;
            }
            f.write_str(")")?;
        } else if self.preperiod.is_empty() {
            f.write_str("0^inf")?;
        }
        Ok(())
    }
}
