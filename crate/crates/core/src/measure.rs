//! The random-walk cylinder measure `μ_p`, its shift pushforwards and
//! Cesàro averages.
//!
//! The walk emits 0 with probability `p` whenever a 1 would also be
//! admissible and emits a forced 0 otherwise, so
//! `μ_p[w] = p^{N₀(w)} (1−p)^{N₁(w)}`.
//!
//! Pushforwards `σ^k μ_p[w]` sum `μ_p[uw]` over admissible prefixes `u` of
//! length `k`. Grouping the prefixes by the automaton state they end in turns
//! that sum into a dot product between the walk's state distribution after
//! `k` steps and the weight of reading `w` from each state.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::shift::{BetaShift, Step, Word};
use crate::sim::{Law, SimStream};
use crate::ENUMERATION_GUARD;

/// Longest horizon the exact pushforward runs for a truncated numeric base.
pub const MAX_EXACT_HORIZON: usize = 4096;

#[derive(Clone, Debug)]
pub struct CylWalkMeasure<'a, S> {
    p: S,
    q: S,
    shift: &'a BetaShift,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CesaroMethod {
    /// Exact pushforward sums.
    Exact,
    /// Averages over sampled walk streams.
    MonteCarlo { streams: usize },
}

/// `(1/K) Σ_k σ^k μ_p[target]` over `k = first_shift .. first_shift + K`.
#[derive(Clone, Debug, PartialEq)]
pub struct CesaroEstimate<S> {
    pub value: S,
    pub iterations: usize,
    pub first_shift: usize,
    pub target: Vec<u8>,
    pub method: CesaroMethod,
    /// 95% half-width for sampled estimates, 0 for exact ones.
    pub half_width: f64,
    /// The base is not known to be simple, so the limit is not covered by
    /// the convergence theorem.
    pub hypothesis_violation: bool,
}

/// Settings for the sampled fallback of the Cesàro estimator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CesaroConfig {
    pub seed: u64,
    pub streams: usize,
}

impl Default for CesaroConfig {
    fn default() -> Self {
        CesaroConfig {
            seed: 0,
            streams: 256,
        }
    }
}

/// Extremes of `μ[ww′] / (μ[w] μ[w′])` over admissible concatenations.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiBernoulliReport<S> {
    pub min_ratio: S,
    pub max_ratio: S,
    pub witness_min: (Vec<u8>, Vec<u8>),
    pub witness_max: (Vec<u8>, Vec<u8>),
    /// `p^{−M}` for simple bases.
    pub bound: Option<S>,
    /// `1 ≤ ratio ≤ p^{−M}` on every pair (simple bases only).
    pub holds: Option<bool>,
    /// Every pair with a full left factor has ratio exactly 1 (within 1e-12 in float mode).
    pub full_pairs_multiplicative: bool,
    pub pairs: usize,
    pub hypothesis_violation: bool,
}

/// Extremes of `σ^k μ[w] / μ[w]`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiInvarianceReport<S> {
    pub min_ratio: S,
    pub max_ratio: S,
    pub witness_min: (Vec<u8>, usize),
    pub witness_max: (Vec<u8>, usize),
    pub bound: Option<S>,
    /// `p^M ≤ ratio ≤ p^{−M}` everywhere; `None` when the base is not simple.
    pub holds: Option<bool>,
    pub checked: usize,
}

/// Ratios along prefixes of the expansion of 1, which blow up for
/// non-simple bases.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpansionWitness {
    pub n: usize,
    /// `μ[ε_1⋯ε_n] / (μ[ε_1] μ[ε_2⋯ε_n])`.
    pub split_ratio: f64,
    /// `σμ[ε_2⋯ε_n] / μ[ε_2⋯ε_n]`.
    pub shift_ratio: f64,
}

impl<'a, S: Scalar> CylWalkMeasure<'a, S> {
    pub fn new(shift: &'a BetaShift, p: S) -> Result<Self> {
        if !(p > S::zero() && p < S::one()) {
            return Err(Error::Domain(alloc::format!(
                "probability must lie in (0,1), got {p}"
            )));
        }
        let q = S::one() - p.clone();
        Ok(CylWalkMeasure { p, q, shift })
    }

    pub fn p(&self) -> &S {
        &self.p
    }

    pub fn shift(&self) -> &'a BetaShift {
        self.shift
    }

    pub fn mu(&self, w: &Word) -> S {
        self.p.pow(w.n0()) * &self.q.pow(w.n1())
    }

    /// `μ_p[w]`, zero for inadmissible digit strings.
    pub fn mu_digits(&self, digits: &[u8]) -> Result<S> {
        match self.shift.word(digits) {
            Ok(w) => Ok(self.mu(&w)),
            Err(Error::Inadmissible) => Ok(S::zero()),
            Err(e) => Err(e),
        }
    }

    /// Probability that the walk, started in state `t`, emits `digits`;
    /// also returns the state it ends in.
    pub fn transfer(&self, t: usize, digits: &[u8]) -> Result<Option<(S, usize)>> {
        let mut weight = S::one();
        let mut t = t;
        for &d in digits {
            let one_ok = self.shift.one_allowed(t)?;
            match self.shift.step(t, d)? {
                Step::Reject => return Ok(None),
                Step::Next(s) => t = s,
            }
            if d == 1 {
                weight = weight * &self.q;
            } else if one_ok {
                weight = weight * &self.p;
            }
        }
        Ok(Some((weight, t)))
    }

    /// One step of the walk's state distribution, states kept canonical.
    fn advance(&self, dist: &[S]) -> Result<Vec<S>> {
        let mut next: Vec<S> = vec![S::zero(); dist.len() + 1];
        for (t, mass) in dist.iter().enumerate() {
            if mass.is_zero() {
                continue;
            }
            let one_ok = self.shift.one_allowed(t)?;
            let to = |d| -> Result<usize> {
                match self.shift.step(t, d)? {
                    Step::Next(s) => Ok(self.shift.canonical_state(s)),
                    Step::Reject => Err(Error::Consistency(alloc::format!(
                        "digit {d} rejected from state {t}"
                    ))),
                }
            };
            if one_ok {
                let s0 = to(0)?;
                let s1 = to(1)?;
                next[s0] = next[s0].clone() + &(mass.clone() * &self.p);
                next[s1] = next[s1].clone() + &(mass.clone() * &self.q);
            } else {
                let s0 = to(0)?;
                next[s0] = next[s0].clone() + mass;
            }
        }
        while next.len() > 1 && next.last().is_some_and(|v| v.is_zero()) {
            next.pop();
        }
        Ok(next)
    }

    /// Law of the canonical automaton state after `k` walk steps.
    pub fn state_distribution(&self, k: usize) -> Result<Vec<S>> {
        let mut dist = vec![S::one()];
        for _ in 0..k {
            dist = self.advance(&dist)?;
        }
        Ok(dist)
    }

    fn weights(&self, target: &[u8], states: usize) -> Result<Vec<S>> {
        (0..states)
            .map(|t| Ok(self.transfer(t, target)?.map_or_else(S::zero, |(w, _)| w)))
            .collect()
    }

    /// `σ^k μ_p[w]`.
    pub fn shifted_mu(&self, digits: &[u8], k: usize) -> Result<S> {
        let dist = self.state_distribution(k)?;
        let w = self.weights(digits, dist.len())?;
        Ok(dot(&dist, &w))
    }

    /// `σ^k μ_p[w]` by listing every admissible prefix; limited by the
    /// enumeration guard and kept as an independent check of [`Self::shifted_mu`].
    pub fn shifted_mu_by_enumeration(&self, digits: &[u8], k: usize) -> Result<S> {
        let total = k + digits.len();
        if total > ENUMERATION_GUARD {
            return Err(Error::Guard {
                what: "shift plus word length",
                value: total,
                limit: ENUMERATION_GUARD,
            });
        }
        let mut acc = S::zero();
        let mut err = None;
        let mut buf = Vec::with_capacity(total);
        self.shift.for_each_admissible(k, false, &mut |u| {
            buf.clear();
            buf.extend_from_slice(u);
            buf.extend_from_slice(digits);
            match self.mu_digits(&buf) {
                Ok(v) => acc = acc.clone() + &v,
                Err(e) => err = Some(e),
            }
        })?;
        match err {
            Some(e) => Err(e),
            None => Ok(acc),
        }
    }

    fn exact_feasible(&self, horizon: usize) -> bool {
        self.shift.canonical_state_count().is_some()
            || self
                .shift
                .known_depth()
                .is_some_and(|d| horizon <= d.min(MAX_EXACT_HORIZON))
    }

    /// `(1/K) Σ_{k<K} σ^k μ_p[target]`.
    pub fn cesaro(&self, target: &[u8], iterations: usize) -> Result<CesaroEstimate<S>> {
        self.cesaro_with(target, iterations, 0, &CesaroConfig::default())
    }

    /// The same average over `k = 1..=K`.
    pub fn cesaro_shifted(&self, target: &[u8], iterations: usize) -> Result<CesaroEstimate<S>> {
        self.cesaro_with(target, iterations, 1, &CesaroConfig::default())
    }

    pub fn cesaro_with(
        &self,
        target: &[u8],
        iterations: usize,
        first_shift: usize,
        config: &CesaroConfig,
    ) -> Result<CesaroEstimate<S>> {
        let mut out = self.cesaro_trajectory(target, &[iterations], first_shift, config)?;
        Ok(out.pop().expect("one checkpoint requested"))
    }

    /// Partial Cesàro averages at each checkpoint `K` (sorted ascending).
    pub fn cesaro_trajectory(
        &self,
        target: &[u8],
        checkpoints: &[usize],
        first_shift: usize,
        config: &CesaroConfig,
    ) -> Result<Vec<CesaroEstimate<S>>> {
        if checkpoints.is_empty() || checkpoints.contains(&0) {
            return Err(Error::Domain(alloc::string::String::from(
                "Cesàro averages need K ≥ 1",
            )));
        }
        if checkpoints.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Domain(alloc::string::String::from(
                "checkpoints must be ascending",
            )));
        }
        let last = *checkpoints.last().unwrap();
        let violation = !self.shift.is_simple();
        let horizon = first_shift + last + target.len();
        let make = |value: S, k: usize, method, half_width| CesaroEstimate {
            value,
            iterations: k,
            first_shift,
            target: target.to_vec(),
            method,
            half_width,
            hypothesis_violation: violation,
        };
        let mut out = Vec::with_capacity(checkpoints.len());
        if self.exact_feasible(horizon) {
            let mut dist = self.state_distribution(first_shift)?;
            let mut weights = self.weights(target, dist.len())?;
            let mut sum = S::zero();
            let mut next_cp = 0;
            for k in 1..=last {
                if weights.len() < dist.len() {
                    weights = self.weights(target, dist.len())?;
                }
                sum = sum + &dot(&dist, &weights);
                if k == checkpoints[next_cp] {
                    while next_cp < checkpoints.len() && checkpoints[next_cp] == k {
                        out.push(make(
                            sum.clone() / S::from_usize(k),
                            k,
                            CesaroMethod::Exact,
                            0.0,
                        ));
                        next_cp += 1;
                    }
                }
                if k < last {
                    dist = self.advance(&dist)?;
                }
            }
        } else {
            let streams = config.streams.max(2);
            let mut per_stream: Vec<Vec<f64>> = vec![Vec::with_capacity(streams); checkpoints.len()];
            for id in 0..streams {
                let mut sim = SimStream::new(
                    config.seed,
                    id as u64,
                    Law::Walk {
                        shift: self.shift,
                        p: self.p.to_f64(),
                    },
                );
                let digits = sim.sample(horizon)?;
                let mut hits = 0usize;
                let mut next_cp = 0;
                for k in 1..=last {
                    let start = first_shift + k - 1;
                    if digits[start..start + target.len()] == *target {
                        hits += 1;
                    }
                    while next_cp < checkpoints.len() && checkpoints[next_cp] == k {
                        per_stream[next_cp].push(hits as f64 / k as f64);
                        next_cp += 1;
                    }
                }
            }
            for (cp, vals) in checkpoints.iter().zip(per_stream) {
                let (mean, se) = mean_and_se(&vals);
                out.push(make(
                    S::from_f64(mean),
                    *cp,
                    CesaroMethod::MonteCarlo { streams },
                    1.96 * se,
                ));
            }
        }
        Ok(out)
    }

    /// Scans all admissible `w, w′` with `1 ≤ |w|, |w′| ≤ max_len` and `ww′` admissible.
    pub fn quasi_bernoulli_report(&self, max_len: usize) -> Result<QuasiBernoulliReport<S>> {
        let words = self.words_up_to(max_len)?;
        let mut min: Option<(S, usize, usize)> = None;
        let mut max: Option<(S, usize, usize)> = None;
        let mut full_ok = true;
        let mut pairs = 0;
        let tol = S::from_f64(1e-12);
        let mut buf = Vec::new();
        for (i, (w, mw, full)) in words.iter().enumerate() {
            for (j, (v, mv, _)) in words.iter().enumerate() {
                buf.clear();
                buf.extend_from_slice(w);
                buf.extend_from_slice(v);
                let joint = self.mu_digits(&buf)?;
                if joint.is_zero() {
                    continue;
                }
                pairs += 1;
                let ratio = joint / (mw.clone() * mv);
                if *full {
                    let dev = (ratio.clone() - S::one()).abs_val();
                    if if S::EXACT { !dev.is_zero() } else { dev > tol } {
                        full_ok = false;
                    }
                }
                if min.as_ref().is_none_or(|(m, _, _)| ratio < *m) {
                    min = Some((ratio.clone(), i, j));
                }
                if max.as_ref().is_none_or(|(m, _, _)| ratio > *m) {
                    max = Some((ratio, i, j));
                }
            }
        }
        let (min_ratio, a, b) = min.ok_or(Error::Domain(alloc::string::String::from(
            "no admissible pairs",
        )))?;
        let (max_ratio, c, d) = max.expect("min and max are set together");
        let bound = self.shift.m().map(|m| S::one() / self.p.pow(m));
        let holds = bound
            .as_ref()
            .map(|bd| min_ratio >= S::one() && max_ratio <= *bd);
        Ok(QuasiBernoulliReport {
            witness_min: (words[a].0.clone(), words[b].0.clone()),
            witness_max: (words[c].0.clone(), words[d].0.clone()),
            min_ratio,
            max_ratio,
            bound,
            holds,
            full_pairs_multiplicative: full_ok,
            pairs,
            hypothesis_violation: !self.shift.is_simple(),
        })
    }

    fn words_up_to(&self, max_len: usize) -> Result<Vec<(Vec<u8>, S, bool)>> {
        let mut words = Vec::new();
        for n in 1..=max_len {
            for d in self.shift.enumerate_admissible(n, false)? {
                let w = self.shift.word(&d)?;
                let m = self.mu(&w);
                words.push((d, m, w.is_full()));
            }
        }
        Ok(words)
    }

    /// Checks `p^M μ[w] ≤ σ^k μ[w] ≤ p^{−M} μ[w]` for `k ≤ max_shift`, `|w| ≤ max_len`.
    pub fn strong_quasi_invariance_report(
        &self,
        max_shift: usize,
        max_len: usize,
    ) -> Result<QuasiInvarianceReport<S>> {
        let words = self.words_up_to(max_len)?;
        let mut min: Option<(S, usize, usize)> = None;
        let mut max: Option<(S, usize, usize)> = None;
        let mut checked = 0;
        let mut dist = vec![S::one()];
        for k in 0..=max_shift {
            if k > 0 {
                dist = self.advance(&dist)?;
            }
            for (i, (w, mw, _)) in words.iter().enumerate() {
                let weights = self.weights(w, dist.len())?;
                let ratio = dot(&dist, &weights) / mw.clone();
                checked += 1;
                if min.as_ref().is_none_or(|(m, _, _)| ratio < *m) {
                    min = Some((ratio.clone(), i, k));
                }
                if max.as_ref().is_none_or(|(m, _, _)| ratio > *m) {
                    max = Some((ratio, i, k));
                }
            }
        }
        let (min_ratio, a, ka) = min.ok_or(Error::Domain(alloc::string::String::from(
            "no admissible words",
        )))?;
        let (max_ratio, b, kb) = max.expect("min and max are set together");
        let bound = self.shift.m().map(|m| S::one() / self.p.pow(m));
        let holds = bound.as_ref().map(|bd| {
            let lower = S::one() / bd.clone();
            min_ratio >= lower && max_ratio <= *bd
        });
        Ok(QuasiInvarianceReport {
            witness_min: (words[a].0.clone(), ka),
            witness_max: (words[b].0.clone(), kb),
            min_ratio,
            max_ratio,
            bound,
            holds,
            checked,
        })
    }

    /// Splits prefixes of `ε(1,β)` as `ε_1 · ε_2⋯ε_n` for `n = 2..=max_n`.
    pub fn expansion_witnesses(&self, max_n: usize) -> Result<Vec<ExpansionWitness>> {
        let mut out = Vec::new();
        let eps: Vec<u8> = (1..=max_n)
            .map(|j| {
                self.shift.eps(j).ok_or(Error::Undecided {
                    depth: self.shift.known_depth().unwrap_or(0),
                })
            })
            .collect::<Result<_>>()?;
        if eps.iter().any(|&d| d > 1) {
            return Err(Error::Domain(alloc::string::String::from(
                "expansion of 1 uses digits outside {0,1}",
            )));
        }
        for n in 2..=max_n {
            let whole = self.mu_digits(&eps[..n])?;
            let head = self.mu_digits(&eps[..1])?;
            let rest = self.mu_digits(&eps[1..n])?;
            if whole.is_zero() || rest.is_zero() {
                // simple bases: the full expansion of 1 is itself inadmissible
                continue;
            }
            let shifted = self.shifted_mu(&eps[1..n], 1)?;
            out.push(ExpansionWitness {
                n,
                split_ratio: (whole / (head * &rest)).to_f64(),
                shift_ratio: (shifted / rest).to_f64(),
            });
        }
        Ok(out)
    }
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(S::zero(), |acc, (x, y)| acc + &(x.clone() * y))
}

/// Sample mean and standard error of the mean.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, libm::sqrt(var / n))
}

fn check_open<S: Scalar>(p: &S) -> Result<()> {
    if *p > S::zero() && *p < S::one() {
        Ok(())
    } else {
        Err(Error::Domain(alloc::format!(
            "probability must lie in (0,1), got {p}"
        )))
    }
}

/// Limit mass of `[0, 1/β)` for the base with `ε(1,β) = 1 0^m 1`:
/// `(m(1−p)+1) / ((m+1)(1−p)+1)`.
pub fn mp_zero_interval<S: Scalar>(p: &S, m: usize) -> Result<S> {
    check_open(p)?;
    let q = S::one() - p.clone();
    let mm = S::from_usize(m);
    Ok((mm.clone() * &q + S::one()) / ((mm + S::one()) * &q + S::one()))
}

/// Limit masses of `[0, 1/β)` and of the top cylinder `[1^{m−1}]` for the
/// base with `ε(1,β) = 1^m`: `p/(1−(1−p)^m)` and `p(1−p)^{m−1}/(1−(1−p)^m)`.
pub fn mp_pseudo_golden<S: Scalar>(p: &S, m: usize) -> Result<(S, S)> {
    check_open(p)?;
    if m < 2 {
        return Err(Error::Domain(alloc::format!(
            "the 1^m family needs m ≥ 2, got {m}"
        )));
    }
    let q = S::one() - p.clone();
    let den = S::one() - q.pow(m);
    let zero = p.clone() / den.clone();
    let top = p.clone() * &q.pow(m - 1) / den;
    Ok((zero, top))
}
