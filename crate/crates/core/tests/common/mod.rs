//! Brute-force references that never touch the follower automaton.

#![allow(dead_code)]

use betashift_core::{BetaShift, BetaSpec, DigitTail, Rational};
use num_traits::{One, Zero};

/// A base together with hand-written `ε(1,β)` and `ε*(1,β)` digit generators.
pub struct Family {
    pub name: &'static str,
    pub shift: BetaShift,
    /// Length of the finite expansion, if any.
    pub m: Option<usize>,
    eps: fn(usize) -> u8,
    star: fn(usize) -> u8,
}

impl Family {
    /// `ε_j`, 1-based.
    pub fn eps(&self, j: usize) -> u8 {
        (self.eps)(j)
    }

    /// `ε*_j`, 1-based.
    pub fn star(&self, j: usize) -> u8 {
        (self.star)(j)
    }
}

fn periodic(block: &'static [u8]) -> impl Fn(usize) -> u8 {
    move |j| block[(j - 1) % block.len()]
}

pub fn families() -> Vec<Family> {
    let tail = |s: &str| BetaShift::new(&BetaSpec::from_expansion(&s.parse::<DigitTail>().unwrap()).unwrap()).unwrap();
    vec![
        Family {
            name: "golden",
            shift: BetaShift::new(&BetaSpec::golden()).unwrap(),
            m: Some(2),
            eps: |j| u8::from(j <= 2),
            star: |j| periodic(&[1, 0])(j),
        },
        Family {
            name: "101",
            shift: BetaShift::new(&BetaSpec::ten_m_one(1).unwrap()).unwrap(),
            m: Some(3),
            eps: |j| u8::from(j == 1 || j == 3),
            star: |j| periodic(&[1, 0, 0])(j),
        },
        Family {
            name: "1001",
            shift: BetaShift::new(&BetaSpec::ten_m_one(2).unwrap()).unwrap(),
            m: Some(4),
            eps: |j| u8::from(j == 1 || j == 4),
            star: |j| periodic(&[1, 0, 0, 0])(j),
        },
        Family {
            name: "111",
            shift: BetaShift::new(&BetaSpec::ones(3).unwrap()).unwrap(),
            m: Some(3),
            eps: |j| u8::from(j <= 3),
            star: |j| periodic(&[1, 1, 0])(j),
        },
        Family {
            name: "110(01)",
            shift: tail("110 per(01)"),
            m: None,
            eps: |j| match j {
                1 | 2 => 1,
                3 => 0,
                _ => u8::from(j % 2 == 1),
            },
            star: |j| match j {
                1 | 2 => 1,
                3 => 0,
                _ => u8::from(j % 2 == 1),
            },
        },
    ]
}

/// Every suffix is lexicographically at most the prefix of `ε*` of the same length.
pub fn naive_admissible(f: &Family, w: &[u8]) -> bool {
    (0..w.len()).all(|k| {
        let s = &w[k..];
        for (i, &d) in s.iter().enumerate() {
            let e = f.star(i + 1);
            if d != e {
                return d < e;
            }
        }
        true
    })
}

/// Fullness through the criterion "`w ε*_1⋯ε*_k` is admissible for every `k`".
pub fn naive_full(f: &Family, w: &[u8]) -> bool {
    let mut x = w.to_vec();
    for k in 1..=24 {
        x.push(f.star(k));
        if !naive_admissible(f, &x) {
            return false;
        }
    }
    naive_admissible(f, w)
}

/// Longest suffix of `w` equal to a prefix of `ε(1,β)`.
pub fn naive_state(f: &Family, w: &[u8]) -> usize {
    (1..=w.len())
        .rev()
        .find(|&t| (0..t).all(|i| w[w.len() - t + i] == f.eps(i + 1)))
        .unwrap_or(0)
}

/// `#{k < |w| : w_{k+1} = 0 and w_1⋯w_k 1 admissible}`.
pub fn naive_n0(f: &Family, w: &[u8]) -> usize {
    (0..w.len())
        .filter(|&k| {
            let mut v = w[..k].to_vec();
            v.push(1);
            w[k] == 0 && naive_admissible(f, &v)
        })
        .count()
}

pub fn all_words(n: usize) -> impl Iterator<Item = Vec<u8>> {
    (0u64..1 << n).map(move |bits| (0..n).map(|i| ((bits >> (n - 1 - i)) & 1) as u8).collect())
}

pub fn naive_words(f: &Family, n: usize) -> Vec<Vec<u8>> {
    all_words(n).filter(|w| naive_admissible(f, w)).collect()
}

/// `p^{N₀}(1−p)^{N₁}` from the definitions, exact.
pub fn naive_mu(f: &Family, w: &[u8], p: &Rational) -> Rational {
    if !naive_admissible(f, w) {
        return Rational::zero();
    }
    let n0 = naive_n0(f, w);
    let n1 = w.iter().filter(|&&d| d == 1).count();
    let q = Rational::one() - p;
    let mut v = Rational::one();
    for _ in 0..n0 {
        v *= p;
    }
    for _ in 0..n1 {
        v *= &q;
    }
    v
}

/// `σ^k μ[w]` by summing over all `2^k` prefixes.
pub fn naive_shifted_mu(f: &Family, w: &[u8], k: usize, p: &Rational) -> Rational {
    let mut s = Rational::zero();
    for u in all_words(k) {
        let mut x = u.clone();
        x.extend_from_slice(w);
        s += naive_mu(f, &x, p);
    }
    s
}
