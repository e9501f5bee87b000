//! Stationary `k`-step Markov measures on the β-shift.
//!
//! States are admissible words of length `k`; a transition appends one digit
//! and drops the first, so `u → σ(u)d`. Built from the walk measure, the
//! transition weights are the conditional ratios `μ_p[ud] / μ_p[u]`, which for
//! the `1 0^m 1` family depend on `u` alone once `k = m + 1`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::beta::BetaSpec;
use crate::error::{Error, Result};
use crate::measure::{mp_zero_interval, CylWalkMeasure};
use crate::scalar::{xlogx, Scalar};
use crate::shift::BetaShift;
use crate::tail::DigitTail;

/// Largest residual accepted from the floating-point stationary solve.
pub const STATIONARY_TOLERANCE: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct MarkovMeasure<S> {
    order: usize,
    states: Vec<Vec<u8>>,
    index: BTreeMap<Vec<u8>, usize>,
    pi: Vec<S>,
    trans: Vec<Vec<S>>,
}

/// Outcome of checking the `k`-step ratio condition on a measure.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IdentityReport {
    pub checked: usize,
    pub violations: usize,
    pub first_violation: Option<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.checked > 0
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.first_violation.is_none() {
                self.first_violation = Some(what());
            }
        }
    }
}

fn same<S: Scalar>(a: &S, b: &S) -> bool {
    if S::EXACT {
        a == b
    } else {
        let (x, y) = (a.to_f64(), b.to_f64());
        (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1e-300)
    }
}

fn bits(w: &[u8]) -> String {
    w.iter().map(|&d| char::from(b'0' + d)).collect()
}

impl<S: Scalar> MarkovMeasure<S> {
    /// Validates a chain and solves for its stationary vector.
    ///
    /// Rows must sum to one and transitions must respect the overlap `u → σ(u)d`.
    pub fn new(order: usize, states: Vec<Vec<u8>>, trans: Vec<Vec<S>>) -> Result<Self> {
        let n = states.len();
        if n == 0 || trans.len() != n || trans.iter().any(|r| r.len() != n) {
            return Err(Error::Domain(String::from("transition matrix shape mismatch")));
        }
        if states.iter().any(|s| s.len() != order) {
            return Err(Error::Domain(String::from("state words must have the chain order")));
        }
        let index: BTreeMap<Vec<u8>, usize> =
            states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        for (i, row) in trans.iter().enumerate() {
            let sum = row.iter().fold(S::zero(), |a, v| a + v);
            if !same(&sum, &S::one()) {
                return Err(Error::Domain(alloc::format!(
                    "row {} sums to {sum}",
                    bits(&states[i])
                )));
            }
            for (j, v) in row.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                if *v < S::zero() || (order > 0 && states[i][1..] != states[j][..order - 1]) {
                    return Err(Error::Domain(alloc::format!(
                        "transition {} → {} breaks the overlap rule",
                        bits(&states[i]),
                        bits(&states[j])
                    )));
                }
            }
        }
        let pi = if S::EXACT {
            stationary_exact(&trans)?
        } else {
            stationary_power(&trans)?
        };
        Ok(MarkovMeasure {
            order,
            states,
            index,
            pi,
            trans,
        })
    }

    /// Chain on admissible `order`-words with transitions `μ_p[ud] / μ_p[u]`.
    pub fn from_walk(mu: &CylWalkMeasure<'_, S>, order: usize) -> Result<Self> {
        let shift = mu.shift();
        let states = shift.enumerate_admissible(order, false)?;
        let index: BTreeMap<&[u8], usize> =
            states.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
        let mut trans = vec![vec![S::zero(); states.len()]; states.len()];
        for (i, u) in states.iter().enumerate() {
            let base = mu.mu_digits(u)?;
            for d in 0..=1u8 {
                let mut ud = u.clone();
                ud.push(d);
                let num = mu.mu_digits(&ud)?;
                if num.is_zero() {
                    continue;
                }
                let j = *index.get(&ud[1..]).ok_or_else(|| {
                    Error::Consistency(alloc::format!("suffix of {} is not a state", bits(&ud)))
                })?;
                trans[i][j] = num / base.clone();
            }
        }
        Self::new(order, states, trans)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn states(&self) -> &[Vec<u8>] {
        &self.states
    }

    pub fn pi(&self) -> &[S] {
        &self.pi
    }

    pub fn trans(&self) -> &[Vec<S>] {
        &self.trans
    }

    pub fn state_index(&self, w: &[u8]) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// State reached from state `i` by appending `d`, if that transition has positive weight.
    pub fn successor(&self, i: usize, d: u8) -> Option<usize> {
        let mut next = self.states[i][1..].to_vec();
        next.push(d);
        let j = self.state_index(&next)?;
        (!self.trans[i][j].is_zero()).then_some(j)
    }

    /// `λ[w]` for the stationary chain.
    pub fn cylinder(&self, w: &[u8]) -> S {
        let k = self.order;
        if w.len() < k {
            return self
                .states
                .iter()
                .zip(&self.pi)
                .filter(|(s, _)| s.starts_with(w))
                .fold(S::zero(), |a, (_, v)| a + v);
        }
        let Some(mut i) = self.state_index(&w[..k]) else {
            return S::zero();
        };
        let mut acc = self.pi[i].clone();
        for pos in k..w.len() {
            let Some(j) = self.state_index(&w[pos + 1 - k..=pos]) else {
                return S::zero();
            };
            acc = acc * &self.trans[i][j];
            if acc.is_zero() {
                return acc;
            }
            i = j;
        }
        acc
    }

    /// `max_i |Σ_j P_ij − 1|`.
    pub fn row_residual(&self) -> f64 {
        self.trans
            .iter()
            .map(|r| (r.iter().fold(S::zero(), |a, v| a + v).to_f64() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `‖πP − π‖_∞`, computed in the measure's own arithmetic.
    pub fn stationarity_residual(&self) -> S {
        let n = self.pi.len();
        let mut worst = S::zero();
        for j in 0..n {
            let v = (0..n).fold(S::zero(), |a, i| a + &(self.pi[i].clone() * &self.trans[i][j]));
            let d = (v - self.pi[j].clone()).abs_val();
            if d > worst {
                worst = d;
            }
        }
        worst
    }

    /// Entropy rate `−Σ_u π_u Σ_v P_uv ln P_uv` (natural log).
    pub fn entropy(&self) -> f64 {
        -self
            .pi
            .iter()
            .zip(&self.trans)
            .map(|(p, row)| p.to_f64() * row.iter().map(|v| xlogx(v.to_f64())).sum::<f64>())
            .sum::<f64>()
    }

    /// Checks `λ[0^i 1 0^j] = 1 − a` for `0 ≤ i, j ≤ m+1` and
    /// `λ[0^k] = ka − k + 1` for `1 ≤ k ≤ m+2`.
    pub fn uniqueness_relations(&self, m: usize, a: &S) -> IdentityReport {
        let mut rep = IdentityReport::default();
        let one_minus_a = S::one() - a.clone();
        for i in 0..=m + 1 {
            for j in 0..=m + 1 {
                let mut w = vec![0u8; i];
                w.push(1);
                w.extend(core::iter::repeat_n(0u8, j));
                let v = self.cylinder(&w);
                rep.record(same(&v, &one_minus_a), || {
                    alloc::format!("λ[{}] = {v}, expected {one_minus_a}", bits(&w))
                });
            }
        }
        for k in 1..=m + 2 {
            let w = vec![0u8; k];
            let kk = S::from_usize(k);
            let expect = kk.clone() * a - kk + S::one();
            let v = self.cylinder(&w);
            rep.record(same(&v, &expect), || {
                alloc::format!("λ[0^{k}] = {v}, expected {expect}")
            });
        }
        rep
    }
}

/// Solves `π(P − I) = 0`, `Σπ = 1` by elimination.
fn stationary_exact<S: Scalar>(trans: &[Vec<S>]) -> Result<Vec<S>> {
    let n = trans.len();
    // rows of A are equations; A = (P − I)^T with the last row replaced by ones
    let mut a: Vec<Vec<S>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = trans[j][i].clone();
                    if i == j {
                        v - S::one()
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    let mut b = vec![S::zero(); n];
    a[n - 1] = vec![S::one(); n];
    b[n - 1] = S::one();
    solve(a, b)
}

fn solve<S: Scalar>(mut a: Vec<Vec<S>>, mut b: Vec<S>) -> Result<Vec<S>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .max_by(|&x, &y| {
                a[x][col]
                    .to_f64()
                    .abs()
                    .partial_cmp(&a[y][col].to_f64().abs())
                    .unwrap_or(core::cmp::Ordering::Equal)
            })
            .ok_or_else(|| Error::Solver(String::from("singular stationary system")))?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = S::one() / a[col][col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() * &inv;
            for c in col..n {
                let t = f.clone() * &a[col][c];
                a[r][c] = a[r][c].clone() - t;
            }
            let t = f * &b[col];
            b[r] = b[r].clone() - t;
        }
    }
    Ok((0..n).map(|i| b[i].clone() / a[i][i].clone()).collect())
}

/// Lazy power iteration `π ← (π + πP)/2` until the residual drops below
/// [`STATIONARY_TOLERANCE`]; the lazy step keeps periodic chains convergent.
fn stationary_power<S: Scalar>(trans: &[Vec<S>]) -> Result<Vec<S>> {
    let n = trans.len();
    let p: Vec<Vec<f64>> = trans
        .iter()
        .map(|r| r.iter().map(|v| v.to_f64()).collect())
        .collect();
    let mut pi = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    for _ in 0..10_000_000 / n.max(1) {
        for j in 0..n {
            next[j] = (0..n).map(|i| pi[i] * p[i][j]).sum();
        }
        let resid = (0..n).map(|j| (next[j] - pi[j]).abs()).fold(0.0, f64::max);
        if resid < STATIONARY_TOLERANCE * 0.01 {
            let total: f64 = next.iter().sum();
            return Ok(next.iter().map(|v| S::from_f64(v / total)).collect());
        }
        for j in 0..n {
            pi[j] = 0.5 * (pi[j] + next[j]);
        }
        let total: f64 = pi.iter().sum();
        pi.iter_mut().for_each(|v| *v /= total);
    }
    let resid = (0..n)
        .map(|j| ((0..n).map(|i| pi[i] * p[i][j]).sum::<f64>() - pi[j]).abs())
        .fold(0.0, f64::max);
    if resid < STATIONARY_TOLERANCE {
        Ok(pi.into_iter().map(S::from_f64).collect())
    } else {
        Err(Error::Solver(alloc::format!(
            "power iteration stalled at residual {resid:e}"
        )))
    }
}

/// Whether `spec` is the base with `ε(1,β) = 1 0^m 1`.
pub fn is_ten_m_one(spec: &BetaSpec, m: usize) -> bool {
    let mut d = vec![0u8; m + 2];
    d[0] = 1;
    d[m + 1] = 1;
    spec.exact_expansion() == Some(&DigitTail::finite(d))
}

/// The stationary `(m+1)`-step chain of the walk measure on the `1 0^m 1` base.
pub fn markov_from_mu<S: Scalar>(m: usize, p: &S) -> Result<MarkovMeasure<S>> {
    let shift = BetaShift::new(&BetaSpec::ten_m_one(m)?)?;
    markov_from_mu_on(&shift, m, p)
}

/// As [`markov_from_mu`], on an already built shift that must be the `1 0^m 1` base.
pub fn markov_from_mu_on<S: Scalar>(shift: &BetaShift, m: usize, p: &S) -> Result<MarkovMeasure<S>> {
    if !is_ten_m_one(shift.spec(), m) {
        return Err(Error::Domain(alloc::format!(
            "the Markov construction needs the base with expansion 1 0^{m} 1"
        )));
    }
    let mu = CylWalkMeasure::new(shift, p.clone())?;
    MarkovMeasure::from_walk(&mu, m + 1)
}

/// Entropy rate of a chain.
pub fn markov_entropy<S: Scalar>(mm: &MarkovMeasure<S>) -> f64 {
    mm.entropy()
}

/// Checks `ν[w_1⋯w_{n+k+1}] ν[w_{n+1}⋯w_{n+k}] = ν[w_{n+1}⋯w_{n+k+1}] ν[w_1⋯w_{n+k}]`
/// for `ν = σ^j μ_p`, `j ≤ max_shift`, and admissible words of length `k+1 ..= max_len`.
pub fn ratio_identity_report<S: Scalar>(
    mu: &CylWalkMeasure<'_, S>,
    k: usize,
    max_len: usize,
    max_shift: usize,
) -> Result<IdentityReport> {
    let shift = mu.shift();
    let mut rep = IdentityReport::default();
    for j in 0..=max_shift {
        let nu = |w: &[u8]| -> Result<S> {
            if j == 0 {
                mu.mu_digits(w)
            } else {
                mu.shifted_mu(w, j)
            }
        };
        let mut cache: BTreeMap<Vec<u8>, S> = BTreeMap::new();
        let mut value = |w: &[u8]| -> Result<S> {
            if let Some(v) = cache.get(w) {
                return Ok(v.clone());
            }
            let v = nu(w)?;
            cache.insert(w.to_vec(), v.clone());
            Ok(v)
        };
        for len in k + 1..=max_len {
            for w in shift.enumerate_admissible(len, false)? {
                let n = len - k - 1;
                let lhs = value(&w)? * &value(&w[n..n + k])?;
                let rhs = value(&w[n..])? * &value(&w[..len - 1])?;
                rep.record(same(&lhs, &rhs), || {
                    alloc::format!("shift {j}, word {}: {lhs} vs {rhs}", bits(&w))
                });
            }
        }
    }
    Ok(rep)
}

/// `λ[0]` predicted for the walk parameter `p` on the `1 0^m 1` base.
pub fn predicted_zero_mass<S: Scalar>(p: &S, m: usize) -> Result<S> {
    mp_zero_interval(p, m)
}
