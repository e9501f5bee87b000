//! Reference computations written straight from the definitions.
//!
//! Nothing here calls the follower automaton or the measure code: digits of
//! the quasi-expansion are hand-coded per base, admissibility is a suffix
//! scan, and cylinder masses come from counting digits.

#![allow(dead_code)]

use std::collections::HashMap;

use betashift_core::Rational;
use num_traits::{One, Zero};

/// A base `β ∈ (1,2]` described by its expansion of 1 and quasi-expansion.
#[derive(Clone)]
pub struct RefBase {
    pub label: String,
    /// `ε(1,β)` digits, when finite.
    pub eps_finite: Option<Vec<u8>>,
    /// One period of `ε*(1,β)` for simple bases, or a long prefix otherwise.
    star_block: Vec<u8>,
    star_periodic: bool,
}

impl RefBase {
    /// The base with `ε(1,β) = 1 0^m 1`.
    pub fn ten_m_one(m: usize) -> Self {
        let mut eps = vec![0u8; m + 2];
        eps[0] = 1;
        eps[m + 1] = 1;
        Self::simple(format!("1 0^{m} 1"), eps)
    }

    /// The base with `ε(1,β) = 1^m`.
    pub fn ones(m: usize) -> Self {
        Self::simple(format!("1^{m}"), vec![1; m])
    }

    fn simple(label: String, eps: Vec<u8>) -> Self {
        let mut block = eps.clone();
        *block.last_mut().unwrap() -= 1;
        RefBase {
            label,
            eps_finite: Some(eps),
            star_block: block,
            star_periodic: true,
        }
    }

    /// A base known only through a prefix of its (infinite) expansion of 1.
    pub fn from_prefix(label: &str, digits: Vec<u8>) -> Self {
        RefBase {
            label: label.into(),
            eps_finite: None,
            star_block: digits,
            star_periodic: false,
        }
    }

    pub fn big_m(&self) -> Option<usize> {
        self.eps_finite.as_ref().map(Vec::len)
    }

    /// `ε*_j`, 1-based.
    pub fn star(&self, j: usize) -> u8 {
        if self.star_periodic {
            self.star_block[(j - 1) % self.star_block.len()]
        } else {
            self.star_block[j - 1]
        }
    }

    /// `ε_j`, 1-based.
    pub fn eps(&self, j: usize) -> u8 {
        match &self.eps_finite {
            Some(e) => e.get(j - 1).copied().unwrap_or(0),
            None => self.star_block[j - 1],
        }
    }

    /// `β` by bisection on `Σ ε_j β^{−j} = 1`.
    pub fn beta(&self) -> f64 {
        let g = |b: f64| {
            let n = self.eps_finite.as_ref().map_or(self.star_block.len(), Vec::len);
            (1..=n).map(|j| self.eps(j) as f64 * b.powi(-(j as i32))).sum::<f64>() - 1.0
        };
        let (mut lo, mut hi) = (1.0 + 1e-12, 2.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// `T^s(1) = Σ_j ε_{s+j} β^{−j}`, the length factor of a cylinder ending in `ε_1⋯ε_s`.
    pub fn orbit_of_one(&self, s: usize) -> f64 {
        let b = self.beta();
        (1..=60).map(|j| self.eps(s + j) as f64 * b.powi(-(j as i32))).sum::<f64>()
    }
}

/// Every suffix is at most the prefix of `ε*` of the same length.
pub fn admissible(b: &RefBase, w: &[u8]) -> bool {
    (0..w.len()).all(|k| {
        for (i, &d) in w[k..].iter().enumerate() {
            let e = b.star(i + 1);
            if d != e {
                return d < e;
            }
        }
        true
    })
}

/// Full: `w ε*_1⋯ε*_k` stays admissible for every `k` (checked up to 40).
pub fn full(b: &RefBase, w: &[u8]) -> bool {
    if !admissible(b, w) {
        return false;
    }
    let mut x = w.to_vec();
    (1..=40).all(|k| {
        x.push(b.star(k));
        admissible(b, &x)
    })
}

/// Longest suffix equal to a prefix of `ε(1,β)`.
pub fn state(b: &RefBase, w: &[u8]) -> usize {
    (1..=w.len())
        .rev()
        .find(|&t| (0..t).all(|i| w[w.len() - t + i] == b.eps(i + 1)))
        .unwrap_or(0)
}

/// Zeros written where a 1 would have been admissible.
pub fn n0(b: &RefBase, w: &[u8]) -> usize {
    let mut v = Vec::with_capacity(w.len());
    let mut c = 0;
    for &d in w {
        v.push(1);
        if d == 0 && admissible(b, &v) {
            c += 1;
        }
        *v.last_mut().unwrap() = d;
    }
    c
}

pub fn n1(w: &[u8]) -> usize {
    w.iter().filter(|&&d| d == 1).count()
}

pub fn all_words(n: usize) -> impl Iterator<Item = Vec<u8>> {
    (0u64..1 << n).map(move |bits| (0..n).map(|i| ((bits >> (n - 1 - i)) & 1) as u8).collect())
}

/// Admissible words of length `n` by filtering all `2^n` binary words.
pub fn words(b: &RefBase, n: usize) -> Vec<Vec<u8>> {
    all_words(n).filter(|w| admissible(b, w)).collect()
}

pub fn words_up_to(b: &RefBase, n: usize) -> Vec<Vec<u8>> {
    (1..=n).flat_map(|k| words(b, k)).collect()
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn pow(x: &Rational, k: usize) -> Rational {
    (0..k).fold(Rational::one(), |acc, _| acc * x)
}

/// Cylinder masses of the walk measure from digit counts, memoised.
pub struct RefMeasure<'a> {
    pub base: &'a RefBase,
    pub p: Rational,
    cache: HashMap<Vec<u8>, Rational>,
}

impl<'a> RefMeasure<'a> {
    pub fn new(base: &'a RefBase, p: Rational) -> Self {
        RefMeasure {
            base,
            p,
            cache: HashMap::new(),
        }
    }

    pub fn mu(&mut self, w: &[u8]) -> Rational {
        if let Some(v) = self.cache.get(w) {
            return v.clone();
        }
        let v = if admissible(self.base, w) {
            pow(&self.p, n0(self.base, w)) * pow(&(Rational::one() - &self.p), n1(w))
        } else {
            Rational::zero()
        };
        self.cache.insert(w.to_vec(), v.clone());
        v
    }

    /// `σ^k μ[w]` as the sum of `μ[uw]` over all `2^k` binary prefixes `u`.
    pub fn shifted(&mut self, w: &[u8], k: usize) -> Rational {
        let mut s = Rational::zero();
        for u in all_words(k) {
            let x = [u.as_slice(), w].concat();
            s += self.mu(&x);
        }
        s
    }
}

/// `x ln x` with `0 ln 0 = 0`.
pub fn xlx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Level-set dimension from the closed form, with its own `β`.
pub fn level_set_dim(p: f64, m: usize) -> f64 {
    let mf = m as f64;
    if p <= (mf + 1.0) / (mf + 2.0) || p >= 1.0 {
        return 0.0;
    }
    let beta = RefBase::ten_m_one(m).beta();
    (xlx(mf * p - mf + p) - xlx(mf * p - mf + 2.0 * p - 1.0) - xlx(1.0 - p)) / beta.ln()
}
