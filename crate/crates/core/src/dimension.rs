//! Level-set dimensions, entropy bounds and local-dimension trajectories.

use alloc::vec::Vec;

use crate::beta::BetaSpec;
use crate::error::{Error, Result};
use crate::markov::MarkovMeasure;
use crate::measure::{mean_and_se, mp_pseudo_golden, CylWalkMeasure};
use crate::scalar::{xlogx, Scalar};
use crate::shift::Step;
use crate::sim::{Law, SimStream};

/// Dimension of the zero-frequency level set and its entropy `dim · ln β`.
#[derive(Clone, Debug, PartialEq)]
pub struct DimReport<S> {
    pub p: S,
    /// Walk parameter whose Markov chain realises the level set; `None` when the set is empty.
    pub q: Option<S>,
    pub dim: f64,
    pub entropy: f64,
    pub log_beta: f64,
}

/// `q = (mp − m + 2p − 1) / (mp − m + p)`, defined for `p ≥ (m+1)/(m+2)`.
pub fn level_set_q<S: Scalar>(p: &S, m: usize) -> Option<S> {
    let threshold = S::from_ratio(m as i64 + 1, m as i64 + 2);
    if *p < threshold || *p > S::one() {
        return None;
    }
    let mm = S::from_usize(m);
    let mp = mm.clone() * p;
    let num = mp.clone() - mm.clone() + p.clone() + p.clone() - S::one();
    let den = mp - mm + p.clone();
    Some(num / den)
}

/// Dimension of the set of points with zero frequency `p` for the base with
/// `ε(1,β) = 1 0^m 1`.
///
/// Below `(m+1)/(m+2)` the set is empty and the value is 0; at the two ends
/// of the admissible range the value is exactly 0.
pub fn dim_level_set<S: Scalar>(p: &S, m: usize) -> Result<DimReport<S>> {
    if *p < S::zero() || *p > S::one() {
        return Err(Error::Domain(alloc::format!(
            "frequency must lie in [0,1], got {p}"
        )));
    }
    let log_beta = BetaSpec::ten_m_one(m)?.ln_beta();
    let q = level_set_q(p, m);
    let threshold = S::from_ratio(m as i64 + 1, m as i64 + 2);
    let endpoint = *p == threshold || *p == S::one();
    let entropy = match &q {
        Some(_) if !endpoint => {
            let pf = p.to_f64();
            let mf = m as f64;
            let a = mf * pf - mf + pf;
            let b = mf * pf - mf + 2.0 * pf - 1.0;
            (xlogx(a) - xlogx(b) - xlogx(1.0 - pf)).max(0.0)
        }
        _ => 0.0,
    };
    Ok(DimReport {
        p: p.clone(),
        q,
        dim: entropy / log_beta,
        entropy,
        log_beta,
    })
}

/// Binary-entropy bound `H(p) / ln β` and whether it exceeds 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperBound {
    pub value: f64,
    pub exceeds_one: bool,
}

pub fn dim_upper_bound(p: f64, beta: f64) -> Result<UpperBound> {
    if !(0.0..=1.0).contains(&p) || !(beta > 1.0) {
        return Err(Error::Domain(alloc::format!(
            "need 0 ≤ p ≤ 1 and β > 1, got p = {p}, β = {beta}"
        )));
    }
    let value = -(xlogx(p) + xlogx(1.0 - p)) / libm::log(beta);
    Ok(UpperBound {
        value,
        exceeds_one: value > 1.0,
    })
}

/// Bounds for the sets with zero frequency at most `p` and at least `p`:
/// `(−p ln p − ln(1−p)) / ln β` and `(−ln p − (1−p) ln(1−p)) / ln β`.
pub fn dim_tail_bounds(p: f64, beta: f64) -> Result<(f64, f64)> {
    if !(p > 0.0 && p < 1.0) || !(beta > 1.0) {
        return Err(Error::Domain(alloc::format!(
            "need 0 < p < 1 and β > 1, got p = {p}, β = {beta}"
        )));
    }
    let lb = libm::log(beta);
    let lower = (-xlogx(p) - libm::log1p(-p)) / lb;
    let upper = (-libm::log(p) - xlogx(1.0 - p)) / lb;
    Ok((lower, upper))
}

/// `ln μ_p[w|_n] / ln |I(w|_n)|` at each requested depth along `stream`.
///
/// Depths must be ascending; the stream must be admissible up to the last one.
pub fn local_dim_estimate<I>(
    stream: I,
    mu: &CylWalkMeasure<'_, f64>,
    depths: &[usize],
) -> Result<Vec<(usize, f64)>>
where
    I: IntoIterator<Item = u8>,
{
    if depths.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Domain(alloc::string::String::from(
            "depths must be ascending",
        )));
    }
    let shift = mu.shift();
    let lp = libm::log(*mu.p());
    let lq = libm::log1p(-*mu.p());
    let lb = shift.ln_beta();
    let mut out = Vec::with_capacity(depths.len());
    let mut it = stream.into_iter();
    let mut di = depths.iter().take_while(|&&d| d == 0).count();
    let (mut state, mut n0, mut n1, mut n) = (0usize, 0u64, 0u64, 0usize);
    while di < depths.len() {
        let d = it.next().ok_or_else(|| {
            Error::Domain(alloc::format!("stream ended before depth {}", depths[di]))
        })?;
        if d > 1 {
            return Err(Error::Domain(alloc::format!("digit {d} is not binary")));
        }
        let free = shift.one_allowed(state)?;
        state = match shift.step(state, d)? {
            Step::Next(s) => shift.canonical_state(s),
            Step::Reject => return Err(Error::Inadmissible),
        };
        match (d, free) {
            (0, true) => n0 += 1,
            (1, _) => n1 += 1,
            _ => {}
        }
        n += 1;
        while di < depths.len() && depths[di] == n {
            let log_mu = n0 as f64 * lp + n1 as f64 * lq;
            let log_len = -(n as f64) * lb + shift.y(state)?.ln();
            out.push((n, log_mu / log_len));
            di += 1;
        }
    }
    Ok(out)
}

/// Quantities of the entropy-gap chain for the base with `ε(1,β) = 1110^∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyGap<S> {
    pub a: S,
    pub lambda11: S,
    pub b: S,
    /// `f_a(b)`, an upper bound for the entropy of the Cesàro limit.
    pub h_upper: f64,
    /// Closed-form maximiser of `f_a`.
    pub x_star: f64,
    /// Maximiser found by golden-section search.
    pub x_star_search: f64,
    pub f_max: f64,
    pub gap: f64,
    pub bracket: (f64, f64),
}

/// `f_a(x) = a ln a − (a−x) ln(a−x) − (1−a−x) ln(1−a−x) − (2x+a−1) ln(2x+a−1)`.
pub fn f_a(a: f64, x: f64) -> f64 {
    xlogx(a) - xlogx(a - x) - xlogx(1.0 - a - x) - xlogx(2.0 * x + a - 1.0)
}

/// Maximiser of a unimodal `f` on `[lo, hi]` to within `tol`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    let inv_phi = (libm::sqrt(5.0) - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

pub fn entropy_gap_counter<S: Scalar>(p: &S) -> Result<EntropyGap<S>> {
    let (a, lambda11) = mp_pseudo_golden(p, 3)?;
    let b = S::one() - a.clone() - lambda11.clone();
    let af = a.to_f64();
    let bf = b.to_f64();
    let bracket = ((1.0 - af) / 2.0, af.min(1.0 - af));
    if !(bf >= bracket.0 && bf <= bracket.1) {
        return Err(Error::Consistency(alloc::format!(
            "b = {bf} outside [{}, {}]",
            bracket.0,
            bracket.1
        )));
    }
    let x_star = (3.0 - 4.0 * af + libm::sqrt(-8.0 * af * af + 12.0 * af - 3.0)) / 6.0;
    let x_star_search = golden_section_max(|x| f_a(af, x), bracket.0, bracket.1, 1e-12);
    let h_upper = f_a(af, bf);
    let f_max = f_a(af, x_star);
    Ok(EntropyGap {
        a,
        lambda11,
        b,
        h_upper,
        x_star,
        x_star_search,
        f_max,
        gap: f_max - h_upper,
        bracket,
    })
}

/// Empirical zero frequencies of stationary streams against the chain's own `λ[0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyReport {
    pub mean: f64,
    pub std_error: f64,
    pub predicted: f64,
    /// `(mean − predicted) / std_error`.
    pub z: f64,
    pub per_stream: Vec<f64>,
    pub length: usize,
}

impl FrequencyReport {
    pub fn from_frequencies(per_stream: Vec<f64>, predicted: f64, length: usize) -> Self {
        let (mean, std_error) = mean_and_se(&per_stream);
        let z = if std_error > 0.0 {
            (mean - predicted) / std_error
        } else if mean == predicted {
            0.0
        } else {
            f64::INFINITY
        };
        FrequencyReport {
            mean,
            std_error,
            predicted,
            z,
            per_stream,
            length,
        }
    }
}

/// Zero frequency of one stationary stream of length `n`.
pub fn stream_zero_frequency<S: Scalar>(
    mm: &MarkovMeasure<S>,
    seed: u64,
    stream_id: u64,
    n: usize,
) -> Result<f64> {
    let mut s = SimStream::new(seed, stream_id, Law::markov(mm));
    let mut zeros = 0usize;
    for _ in 0..n {
        if s.next_digit()? == 0 {
            zeros += 1;
        }
    }
    Ok(zeros as f64 / n as f64)
}

/// Runs `streams` stationary streams sequentially.
pub fn frequency_simulation<S: Scalar>(
    mm: &MarkovMeasure<S>,
    n: usize,
    streams: usize,
    seed: u64,
) -> Result<FrequencyReport> {
    if n == 0 || streams == 0 {
        return Err(Error::Domain(alloc::string::String::from(
            "need positive length and stream count",
        )));
    }
    let per = (0..streams)
        .map(|id| stream_zero_frequency(mm, seed, id as u64, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(FrequencyReport::from_frequencies(
        per,
        mm.cylinder(&[0]).to_f64(),
        n,
    ))
}
