//! The β-shift over `{0,1}`: the follower-state automaton, digit counters and
//! cylinder geometry.
//!
//! State `t` means the word read so far ends with `ε*_1 ⋯ ε*_t` and that
//! this match is the one constraining the next digit. From state `t` a `1` is
//! allowed iff `ε*_{t+1} = 1`; reading the digit equal to `ε*_{t+1}` moves to
//! `t + 1` and reading `0` below a `1` drops to state 0. For a simple base the
//! quasi-expansion has period `M`, so state `M` is identified with 0.

use alloc::vec;
use alloc::vec::Vec;

use crate::beta::{BetaSpec, Simpleness};
use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::ENUMERATION_GUARD;

/// An admissible binary word with its automaton state and counters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    digits: Vec<u8>,
    state: usize,
    n0: usize,
    n1: usize,
    tau_prime: usize,
}

impl Word {
    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Length of the longest suffix equal to a prefix of `ε(1,β)`.
    pub fn parry_state(&self) -> usize {
        self.state
    }

    pub fn is_full(&self) -> bool {
        self.state == 0
    }

    /// Number of positions holding a 0 where a 1 was also admissible.
    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    /// Length of the longest full prefix (0 for the empty prefix).
    pub fn tau_prime(&self) -> usize {
        self.tau_prime
    }

    pub fn as_string(&self) -> alloc::string::String {
        self.digits.iter().map(|&d| char::from(b'0' + d)).collect()
    }
}

/// Position and length of the interval `I(w)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CylinderInterval {
    pub left: Dd,
    pub length: Dd,
    /// `ln |I(w)|`, computed without underflow for long words.
    pub log_length: f64,
    pub order: usize,
}

/// Zero runs after each position of the quasi-expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroRuns {
    pub lengths: Vec<usize>,
    pub max: usize,
    /// Some run reached the end of the known digits, so it may be longer.
    pub censored: bool,
}

/// Parses a plain `0`/`1` string.
pub fn parse_word(s: &str) -> Result<Vec<u8>> {
    s.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::Parse(alloc::format!("bad binary digit {c:?}"))),
        })
        .collect()
}

/// Outcome of feeding one digit to the automaton.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Next(usize),
    Reject,
}

#[derive(Clone, Debug)]
pub struct BetaShift {
    spec: BetaSpec,
    /// Quasi-expansion digits, exact up to `star.len()`; for exact tails the
    /// remainder follows from `star_tail`.
    star_tail: Option<crate::tail::DigitTail>,
    star: Vec<u8>,
    wrap: Option<usize>,
    /// `T^s(1)` for each state `s` that can be reached, indexed through `y_index`.
    y: Vec<Dd>,
    y_pre: usize,
    y_per: usize,
    min_y: f64,
    /// `(preperiod, period)` of an exact infinite expansion.
    cycle: Option<(usize, usize)>,
}

impl BetaShift {
    /// Builds the automaton; requires `1 < β ≤ 2`.
    pub fn new(spec: &BetaSpec) -> Result<Self> {
        if spec.value() > Dd::from_f64(2.0) {
            return Err(Error::Domain(alloc::format!(
                "the shift is restricted to 1 < β ≤ 2, got {}",
                spec.value_f64()
            )));
        }
        let wrap = spec.finite_length();
        let star_tail = spec.exact_quasi();
        let (star, y, y_pre, y_per) = match (&star_tail, spec.known_depth()) {
            (Some(q), _) => {
                let (pre, per) = match wrap {
                    Some(m) => (m, 0),
                    None => {
                        let e = spec.expansion1();
                        (e.preperiod().len() + 1, e.period().len())
                    }
                };
                let count = pre + per;
                let y = (0..count).map(|s| spec.orbit_of_one_exact(s)).collect();
                (q.prefix(count.max(1)), y, pre, per)
            }
            (None, Some(depth)) => {
                let y = spec.orbit_of_one_numeric(depth)?;
                (spec.expansion1().prefix(depth), y, depth + 1, 0)
            }
            (None, None) => unreachable!("exact quasi-expansion exists without a depth"),
        };
        let min_y = y.iter().map(|v: &Dd| v.to_f64()).fold(f64::INFINITY, f64::min);
        let cycle = match (&star_tail, wrap) {
            (Some(_), None) => {
                let e = spec.expansion1();
                Some((e.preperiod().len(), e.period().len()))
            }
            _ => None,
        };
        Ok(BetaShift {
            cycle,
            spec: spec.clone(),
            star_tail,
            star,
            wrap,
            y,
            y_pre,
            y_per,
            min_y,
        })
    }

    pub fn spec(&self) -> &BetaSpec {
        &self.spec
    }

    pub fn beta(&self) -> Dd {
        self.spec.value()
    }

    pub fn ln_beta(&self) -> f64 {
        self.spec.ln_beta()
    }

    /// `M` for simple bases.
    pub fn m(&self) -> Option<usize> {
        self.wrap
    }

    pub fn simpleness(&self) -> Simpleness {
        self.spec.is_simple()
    }

    pub fn is_simple(&self) -> bool {
        self.wrap.is_some()
    }

    /// Number of automaton states for a simple base.
    pub fn state_count(&self) -> Option<usize> {
        self.wrap
    }

    /// Depth up to which the quasi-expansion is known, `None` if known in full.
    pub fn known_depth(&self) -> Option<usize> {
        self.spec.known_depth()
    }

    /// `ε*_j` for `j ≥ 1`, or `None` past the truncation depth.
    pub fn eps_star(&self, j: usize) -> Option<u8> {
        if j <= self.star.len() {
            return Some(self.star[j - 1]);
        }
        self.star_tail.as_ref().map(|t| t.digit(j))
    }

    pub fn eps(&self, j: usize) -> Option<u8> {
        self.spec.eps(j)
    }

    /// Smallest state with the same future as `t`.
    ///
    /// For an eventually periodic expansion, states past the preperiod that
    /// differ by a multiple of the period constrain the future identically.
    pub fn canonical_state(&self, t: usize) -> usize {
        match self.cycle {
            Some((pre, per)) if per > 0 && t >= pre => pre + (t - pre) % per,
            _ => t,
        }
    }

    /// Number of canonical states, when finite.
    pub fn canonical_state_count(&self) -> Option<usize> {
        match (self.wrap, self.cycle) {
            (Some(m), _) => Some(m),
            (None, Some((pre, per))) => Some(pre + per),
            _ => None,
        }
    }

    /// Whether a 1 may follow state `t`.
    pub fn one_allowed(&self, t: usize) -> Result<bool> {
        match self.eps_star(t + 1) {
            Some(d) => Ok(d == 1),
            None => Err(Error::Undecided {
                depth: self.star.len(),
            }),
        }
    }

    /// One automaton transition.
    pub fn step(&self, t: usize, digit: u8) -> Result<Step> {
        let e = match self.eps_star(t + 1) {
            Some(e) => e,
            None => {
                return Err(Error::Undecided {
                    depth: self.star.len(),
                })
            }
        };
        Ok(if digit > e {
            Step::Reject
        } else if digit < e {
            Step::Next(0)
        } else {
            let n = t + 1;
            Step::Next(if self.wrap == Some(n) { 0 } else { n })
        })
    }

    /// Runs the automaton over `digits` from state 0 and builds the [`Word`].
    pub fn word(&self, digits: &[u8]) -> Result<Word> {
        let mut w = Word {
            digits: Vec::with_capacity(digits.len()),
            state: 0,
            n0: 0,
            n1: 0,
            tau_prime: 0,
        };
        for &d in digits {
            if d > 1 {
                return Err(Error::Domain(alloc::format!("digit {d} outside {{0,1}}")));
            }
            self.push(&mut w, d)?;
        }
        Ok(w)
    }

    /// Appends a digit, keeping state and counters current.
    pub fn push(&self, w: &mut Word, d: u8) -> Result<()> {
        let one_ok = self.one_allowed(w.state)?;
        match self.step(w.state, d)? {
            Step::Reject => return Err(Error::Inadmissible),
            Step::Next(s) => w.state = s,
        }
        if d == 1 {
            w.n1 += 1;
        } else if one_ok {
            w.n0 += 1;
        }
        w.digits.push(d);
        if w.state == 0 {
            w.tau_prime = w.digits.len();
        }
        Ok(())
    }

    pub fn parse(&self, s: &str) -> Result<Word> {
        self.word(&parse_word(s)?)
    }

    /// Admissibility by the single-pass automaton.
    pub fn is_admissible(&self, digits: &[u8]) -> Result<bool> {
        let mut t = 0;
        for &d in digits {
            if d > 1 {
                return Ok(false);
            }
            match self.step(t, d)? {
                Step::Reject => return Ok(false),
                Step::Next(s) => t = s,
            }
        }
        Ok(true)
    }

    /// State reached from `from` after `digits`, or `None` if rejected.
    pub fn run_from(&self, from: usize, digits: &[u8]) -> Result<Option<usize>> {
        let mut t = from;
        for &d in digits {
            match self.step(t, d)? {
                Step::Reject => return Ok(None),
                Step::Next(s) => t = s,
            }
        }
        Ok(Some(t))
    }

    /// First index where `w 0^∞` drops below `ε*`.
    pub fn m_index(&self, w: &Word) -> Result<usize> {
        let mut k = 1;
        loop {
            let wk = w.digits.get(k - 1).copied().unwrap_or(0);
            let ek = self.eps_star(k).ok_or(Error::Undecided {
                depth: self.star.len(),
            })?;
            if wk < ek {
                return Ok(k);
            }
            k += 1;
        }
    }

    /// `min(𝔪(w), M)` for simple bases, `𝔪(w)` otherwise.
    pub fn tau(&self, w: &Word) -> Result<usize> {
        let m = self.m_index(w)?;
        Ok(match self.wrap {
            Some(big_m) => m.min(big_m),
            None => m,
        })
    }

    fn y_index(&self, s: usize) -> usize {
        if s < self.y_pre || self.y_per == 0 {
            s
        } else {
            self.y_pre + (s - self.y_pre) % self.y_per
        }
    }

    /// `y_s = T_β^s(1)` with `y_0 = 1`.
    pub fn y(&self, s: usize) -> Result<Dd> {
        self.y.get(self.y_index(s)).copied().ok_or(Error::Undecided {
            depth: self.star.len(),
        })
    }

    /// Smallest `y_s` over the tabulated states.
    pub fn min_y(&self) -> f64 {
        self.min_y
    }

    /// `I(w)`: left end `Σ w_j β^{−j}` and length `β^{−n} y_s`.
    pub fn cylinder_interval(&self, w: &Word) -> Result<CylinderInterval> {
        let r = self.beta().recip();
        let mut left = Dd::ZERO;
        let mut pw = Dd::ONE;
        for &d in &w.digits {
            pw = pw * r;
            if d == 1 {
                left = left + pw;
            }
        }
        let y = self.y(w.state)?;
        let n = w.digits.len();
        Ok(CylinderInterval {
            left,
            length: pw * y,
            log_length: -(n as f64) * self.ln_beta() + y.ln(),
            order: n,
        })
    }

    /// All admissible words of length `n` in lexicographic order.
    pub fn enumerate_admissible(&self, n: usize, full_only: bool) -> Result<Vec<Vec<u8>>> {
        guard(n)?;
        let mut out = Vec::new();
        let mut buf = Vec::with_capacity(n);
        self.dfs(0, n, full_only, &mut buf, &mut |w| out.push(w.to_vec()))?;
        Ok(out)
    }

    /// Visits admissible words of length `n` in lexicographic order with their final state.
    pub fn for_each_admissible(
        &self,
        n: usize,
        full_only: bool,
        f: &mut dyn FnMut(&[u8]),
    ) -> Result<()> {
        guard(n)?;
        let mut buf = Vec::with_capacity(n);
        self.dfs(0, n, full_only, &mut buf, f)
    }

    fn dfs(
        &self,
        t: usize,
        n: usize,
        full_only: bool,
        buf: &mut Vec<u8>,
        f: &mut dyn FnMut(&[u8]),
    ) -> Result<()> {
        if buf.len() == n {
            if !full_only || t == 0 {
                f(buf);
            }
            return Ok(());
        }
        for d in 0..=1u8 {
            if let Step::Next(s) = self.step(t, d)? {
                buf.push(d);
                self.dfs(s, n, full_only, buf, f)?;
                buf.pop();
            }
        }
        Ok(())
    }

    /// `#Σ_β^n` (or its full part) by a dynamic program over states.
    pub fn count_admissible(&self, n: usize, full_only: bool) -> Result<u128> {
        let mut dist: Vec<u128> = vec![1];
        for _ in 0..n {
            let mut next = vec![0u128; dist.len() + 1];
            for (t, &c) in dist.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for d in 0..=1u8 {
                    if let Step::Next(s) = self.step(t, d)? {
                        next[s] = next[s].checked_add(c).ok_or(Error::Guard {
                            what: "word count",
                            value: n,
                            limit: 127,
                        })?;
                    }
                }
            }
            while next.len() > 1 && next.last() == Some(&0) {
                next.pop();
            }
            dist = next;
        }
        Ok(if full_only {
            dist[0]
        } else {
            dist.iter().sum()
        })
    }

    /// `l_j`: zeros immediately following position `j` of `ε*`, `j = 1..=n`.
    pub fn zero_run_lengths(&self, n: usize) -> ZeroRuns {
        let mut lengths = Vec::with_capacity(n);
        let mut censored = false;
        for j in 1..=n {
            let mut k = 0;
            loop {
                match self.eps_star(j + k + 1) {
                    Some(0) => k += 1,
                    Some(_) => break,
                    None => {
                        censored = true;
                        break;
                    }
                }
            }
            lengths.push(k);
        }
        let max = lengths.iter().copied().max().unwrap_or(0);
        ZeroRuns {
            lengths,
            max,
            censored,
        }
    }
}

fn guard(n: usize) -> Result<()> {
    if n > ENUMERATION_GUARD {
        Err(Error::Guard {
            what: "word length",
            value: n,
            limit: ENUMERATION_GUARD,
        })
    } else {
        Ok(())
    }
}
