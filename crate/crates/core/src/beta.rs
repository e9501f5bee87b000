//! Bases `β`, greedy expansions and the expansion of 1.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::dd::{Dd, EPS};
use crate::error::{Error, Result};
use crate::tail::DigitTail;
use crate::DEFAULT_DEPTH;

/// Distance to an integer below which a greedy step counts as an exact hit.
pub const TIE_TOLERANCE: f64 = 1e-25;

/// Which description of the base is authoritative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// The digit tail is exact; `β` was solved from it.
    Symbolic,
    /// `β` is exact; digits of 1 were computed up to a depth.
    Numeric,
}

/// Three-valued answer to "is the expansion of 1 finite?".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Simpleness {
    Simple { m: usize },
    Infinite,
    UnknownAtDepth { depth: usize },
}

impl Simpleness {
    pub fn m(self) -> Option<usize> {
        match self {
            Simpleness::Simple { m } => Some(m),
            _ => None,
        }
    }
}

/// A base `β > 1` with its expansion of 1.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaSpec {
    value: Dd,
    rel_err: f64,
    expansion1: DigitTail,
    /// Numeric mode without an observed termination: digits past this are unknown.
    known_depth: Option<usize>,
    mode: Mode,
}

/// Greedy orbit of a point: digits and the visited points `x_0, …, x_n`.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub digits: Vec<u8>,
    pub points: Vec<Dd>,
    /// The orbit landed exactly on 0.
    pub terminated: bool,
}

/// Runs `n` greedy steps from `x0`, tracking a running error bound.
///
/// A step whose value lies within [`TIE_TOLERANCE`] of an integer while the
/// error bound is also below it is an exact hit; if the value is instead
/// within the error bound of an integer the digit cannot be certified.
pub fn greedy_orbit(beta: Dd, beta_rel_err: f64, x0: Dd, n: usize) -> Result<Orbit> {
    let top = libm::ceil(beta.to_f64()) - 1.0;
    let b = beta.to_f64();
    let mut x = x0;
    let mut err = 0.0f64;
    let mut digits = Vec::with_capacity(n);
    let mut points = Vec::with_capacity(n + 1);
    points.push(x);
    let mut terminated = x == Dd::ZERO;
    for j in 0..n {
        if terminated {
            digits.push(0);
            points.push(Dd::ZERO);
            continue;
        }
        let y = beta * x;
        let ax = x.abs().to_f64();
        let ay = y.abs().to_f64();
        let err_y = b * err + ax * b * beta_rel_err + 8.0 * EPS * ay;
        let nearest = y.round();
        let dist = (y - nearest).abs().to_f64();
        let (digit, next) = if dist < TIE_TOLERANCE && err_y < TIE_TOLERANCE {
            (nearest.to_f64(), Dd::ZERO)
        } else if dist <= err_y {
            return Err(Error::Precision { reliable: j });
        } else {
            let f = y.floor();
            (f.to_f64(), y - f)
        };
        let digit = digit.clamp(0.0, top.max(0.0));
        digits.push(digit as u8);
        err = err_y + 2.0 * EPS;
        if next == Dd::ZERO {
            terminated = true;
            err = 0.0;
        }
        x = next;
        points.push(x);
    }
    Ok(Orbit {
        digits,
        points,
        terminated,
    })
}

fn is_integer(beta: Dd) -> bool {
    beta.floor() == beta
}

/// First `n` digits of the expansion of 1 in base `beta`, taking `beta` as exact.
///
/// For integer `β` the digit `β` is outside the alphabet, so the answer is the
/// all-`(β−1)` sequence, which also sums to 1.
pub fn expansion_of_one(beta: Dd, n: usize) -> Result<Vec<u8>> {
    expansion_of_one_with_error(beta, EPS, n)
}

pub fn expansion_of_one_with_error(beta: Dd, rel_err: f64, n: usize) -> Result<Vec<u8>> {
    check_base(beta)?;
    if is_integer(beta) {
        return Ok(vec![(beta.to_f64() as u8).saturating_sub(1); n]);
    }
    Ok(greedy_orbit(beta, rel_err, Dd::ONE, n)?.digits)
}

fn check_base(beta: Dd) -> Result<()> {
    if !(beta > Dd::ONE) {
        return Err(Error::Domain(alloc::format!(
            "base must exceed 1, got {}",
            beta.to_f64()
        )));
    }
    if beta.to_f64() > 255.0 {
        return Err(Error::Domain(String::from("base too large for u8 digits")));
    }
    Ok(())
}

/// `Σ_j d_j r^j` for the digits of `tail`, with the period summed in closed form.
pub fn tail_value(tail: &DigitTail, r: Dd) -> Dd {
    let mut acc = Dd::ZERO;
    let mut pw = Dd::ONE;
    for &d in tail.preperiod() {
        pw = pw * r;
        acc = acc + pw.mul_f64(d as f64);
    }
    if !tail.is_finite() {
        let mut per = Dd::ZERO;
        let mut q = Dd::ONE;
        for &d in tail.period() {
            q = q * r;
            per = per + q.mul_f64(d as f64);
        }
        acc = acc + pw * per / (Dd::ONE - q);
    }
    acc
}

/// `Σ_j d_j β^{−j} − 1`, strictly decreasing in `β` for nonzero tails.
fn residual(tail: &DigitTail, beta: Dd) -> Dd {
    tail_value(tail, beta.recip()) - Dd::ONE
}

/// Checks `σ^k(w) ≼ w` for all `k ≥ 1`; returns whether some shift equals `w`.
fn self_admissible(tail: &DigitTail) -> Result<bool> {
    let span = tail.preperiod().len() + tail.period().len();
    let mut returns = false;
    for k in 1..=span.max(1) {
        match tail.shifted(k).lex_cmp(tail) {
            Ordering::Greater => {
                return Err(Error::InvalidExpansion(alloc::format!(
                    "shift by {k} of {tail} exceeds the sequence itself"
                )))
            }
            Ordering::Equal if !tail.is_zero() => returns = true,
            _ => {}
        }
    }
    Ok(returns)
}

/// Turns a purely periodic quasi-expansion `(a_1⋯a_L)^∞` into the finite
/// expansion `a_1⋯a_{L−1}(a_L+1)`.
fn finite_from_quasi(tail: &DigitTail) -> DigitTail {
    let mut digits = tail.period().to_vec();
    if let Some(last) = digits.last_mut() {
        *last += 1;
    }
    DigitTail::finite(digits)
}

/// Bisection for the root of `Σ ε_j β^{−j} = 1` on `(1, 2]`.
fn solve_base(tail: &DigitTail) -> Result<(Dd, f64)> {
    let two = Dd::from_f64(2.0);
    let g2 = residual(tail, two);
    if g2 > Dd::ZERO {
        return Err(Error::Domain(alloc::format!(
            "the root of {tail} exceeds 2"
        )));
    }
    if g2 == Dd::ZERO {
        return Ok((two, 0.0));
    }
    if tail.is_finite() {
        let s: u32 = tail.preperiod().iter().map(|&d| d as u32).sum();
        if s <= 1 {
            return Err(Error::Domain(alloc::format!(
                "{tail} has no root above 1"
            )));
        }
    }
    let mut lo = Dd::ONE;
    let mut hi = two;
    for _ in 0..200 {
        let mid = (lo + hi).mul_f64(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if residual(tail, mid) > Dd::ZERO {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo).to_f64() < 1e-31 {
            break;
        }
    }
    let width = (hi - lo).to_f64();
    Ok(((lo + hi).mul_f64(0.5), width + 1e-30))
}

impl BetaSpec {
    /// Symbolic-mode base whose expansion of 1 is `tail`.
    ///
    /// A purely periodic tail is read as the quasi-expansion of a simple base
    /// and converted to the finite expansion, so `per(10)` gives the golden
    /// ratio just as `11` does.
    pub fn from_expansion(tail: &DigitTail) -> Result<Self> {
        if tail.is_zero() {
            return Err(Error::Domain(String::from(
                "the zero sequence is not the expansion of 1",
            )));
        }
        let mut tail = tail.clone();
        if self_admissible(&tail)? {
            tail = finite_from_quasi(&tail);
            self_admissible(&tail)?;
        }
        let (value, rel_err) = solve_base(&tail)?;
        let top = if value.to_f64() >= 2.0 { 2 } else { 1 };
        if tail.max_digit() > top || (top == 2 && tail != DigitTail::finite(vec![2])) {
            return Err(Error::InvalidExpansion(alloc::format!(
                "{tail} uses digits outside the alphabet of its base"
            )));
        }
        Ok(BetaSpec {
            value,
            rel_err,
            expansion1: tail,
            known_depth: None,
            mode: Mode::Symbolic,
        })
    }

    /// Numeric-mode base with the default truncation depth.
    pub fn numeric(value: Dd) -> Result<Self> {
        Self::numeric_with_depth(value, DEFAULT_DEPTH)
    }

    /// Numeric-mode base: the digits of 1 are computed to `depth`.
    ///
    /// If the orbit of 1 hits 0 the expansion is known to be finite. If the
    /// digits lose certification earlier, the depth shrinks to the reliable prefix.
    pub fn numeric_with_depth(value: Dd, depth: usize) -> Result<Self> {
        check_base(value)?;
        if depth == 0 {
            return Err(Error::Domain(String::from("truncation depth must be positive")));
        }
        if is_integer(value) {
            return Ok(BetaSpec {
                value,
                rel_err: 0.0,
                expansion1: DigitTail::finite(vec![value.to_f64() as u8]),
                known_depth: None,
                mode: Mode::Numeric,
            });
        }
        let (digits, terminated, depth) = match greedy_orbit(value, EPS, Dd::ONE, depth) {
            Ok(o) => (o.digits, o.terminated, depth),
            Err(Error::Precision { reliable }) if reliable > 0 => {
                let o = greedy_orbit(value, EPS, Dd::ONE, reliable)?;
                (o.digits, o.terminated, reliable)
            }
            Err(e) => return Err(e),
        };
        Ok(BetaSpec {
            value,
            rel_err: EPS,
            expansion1: DigitTail::finite(digits),
            known_depth: if terminated { None } else { Some(depth) },
            mode: Mode::Numeric,
        })
    }

    pub fn parse_numeric(s: &str, depth: usize) -> Result<Self> {
        Self::numeric_with_depth(Dd::parse_decimal(s)?, depth)
    }

    /// The base with `ε(1,β) = 1 0^m 1`.
    pub fn ten_m_one(m: usize) -> Result<Self> {
        let mut d = vec![0u8; m + 2];
        d[0] = 1;
        d[m + 1] = 1;
        Self::from_expansion(&DigitTail::finite(d))
    }

    /// The base with `ε(1,β) = 1^m` (`m = 2` is the golden ratio).
    pub fn ones(m: usize) -> Result<Self> {
        Self::from_expansion(&DigitTail::finite(vec![1; m]))
    }

    pub fn golden() -> Self {
        Self::ones(2).expect("11 is a valid expansion")
    }

    pub fn value(&self) -> Dd {
        self.value
    }

    pub fn value_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn ln_beta(&self) -> f64 {
        self.value.ln()
    }

    pub fn rel_err(&self) -> f64 {
        self.rel_err
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Expansion of 1; in truncated numeric mode only the known prefix.
    pub fn expansion1(&self) -> &DigitTail {
        &self.expansion1
    }

    /// Truncation depth, present only while digits beyond it are unknown.
    pub fn known_depth(&self) -> Option<usize> {
        self.known_depth
    }

    pub fn finite_length(&self) -> Option<usize> {
        match self.known_depth {
            None if self.expansion1.is_finite() => Some(self.expansion1.preperiod().len()),
            _ => None,
        }
    }

    pub fn is_simple(&self) -> Simpleness {
        match (self.finite_length(), self.known_depth) {
            (Some(m), _) => Simpleness::Simple { m },
            (None, Some(depth)) => Simpleness::UnknownAtDepth { depth },
            (None, None) => Simpleness::Infinite,
        }
    }

    /// `ε(1,β)` as an exact tail when it is known in full.
    pub fn exact_expansion(&self) -> Option<&DigitTail> {
        self.known_depth.is_none().then_some(&self.expansion1)
    }

    /// `ε*(1,β)` as an exact tail when it is known in full.
    pub fn exact_quasi(&self) -> Option<DigitTail> {
        if self.known_depth.is_some() {
            return None;
        }
        if !self.expansion1.is_finite() {
            return Some(self.expansion1.clone());
        }
        let mut per = self.expansion1.preperiod().to_vec();
        if let Some(last) = per.last_mut() {
            *last -= 1;
        }
        Some(DigitTail::periodic(per))
    }

    /// `ε_j(1,β)` for `j ≥ 1`, or `None` past the truncation depth.
    pub fn eps(&self, j: usize) -> Option<u8> {
        match self.known_depth {
            Some(d) if j > d => None,
            _ => Some(self.expansion1.digit(j)),
        }
    }

    /// First `n` digits of the quasi-expansion, plus a flag set when some
    /// requested digits lie past the truncation depth (those are omitted).
    pub fn quasi_expansion(&self, n: usize) -> (Vec<u8>, bool) {
        match self.exact_quasi() {
            Some(q) => (q.prefix(n), false),
            None => {
                let d = self.known_depth.unwrap_or(n);
                (self.expansion1.prefix(n.min(d)), n > d)
            }
        }
    }

    /// Greedy digits `ε_1(x,β) … ε_n(x,β)` of `x ∈ [0,1)`.
    pub fn expand(&self, x: Dd, n: usize) -> Result<Vec<u8>> {
        if x < Dd::ZERO || !(x < Dd::ONE) {
            return Err(Error::Domain(alloc::format!(
                "x must lie in [0,1), got {}",
                x.to_f64()
            )));
        }
        Ok(greedy_orbit(self.value, self.rel_err.max(EPS), x, n)?.digits)
    }

    /// `T_β^s(1)` for `s ≥ 1` from the exact tail, `1` for `s = 0`.
    pub(crate) fn orbit_of_one_exact(&self, s: usize) -> Dd {
        if s == 0 {
            return Dd::ONE;
        }
        tail_value(&self.expansion1.shifted(s), self.value.recip())
    }

    /// Points `T_β^s(1)` for `s = 0..=n` by direct iteration.
    pub(crate) fn orbit_of_one_numeric(&self, n: usize) -> Result<Vec<Dd>> {
        Ok(greedy_orbit(self.value, self.rel_err.max(EPS), Dd::ONE, n)?.points)
    }
}

/// Free-function form of [`BetaSpec::from_expansion`].
pub fn beta_from_expansion(tail: &DigitTail) -> Result<BetaSpec> {
    BetaSpec::from_expansion(tail)
}

/// Free-function form of [`BetaSpec::expand`].
pub fn beta_expand(x: Dd, b: &BetaSpec, n: usize) -> Result<Vec<u8>> {
    b.expand(x, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(s: &str) -> DigitTail {
        s.parse().unwrap()
    }

    fn sqrt5() -> Dd {
        let five = Dd::from_f64(5.0);
        let r = Dd::from_f64(libm::sqrt(5.0));
        (r + five / r).mul_f64(0.5)
    }

    #[test]
    fn golden_from_digits() {
        let b = BetaSpec::from_expansion(&t("11")).unwrap();
        let exact = (Dd::ONE + sqrt5()).mul_f64(0.5);
        assert!(((b.value() - exact) / exact).abs().to_f64() < 1e-29);
        let v = b.value();
        assert!((v * v - v - Dd::ONE).abs().to_f64() < 1e-14);
        assert_eq!(b.is_simple(), Simpleness::Simple { m: 2 });
        assert_eq!(b.mode(), Mode::Symbolic);
    }

    #[test]
    fn m1_family_root() {
        let b = BetaSpec::from_expansion(&t("101")).unwrap();
        assert!((b.value_f64() - 1.465_571_231_876_768).abs() < 1e-14);
        let r = b.value().recip();
        let g = r + r * r * r - Dd::ONE;
        assert!(g.abs().to_f64() < 1e-28);
    }

    #[test]
    fn one_alone_is_a_domain_error() {
        assert!(matches!(
            BetaSpec::from_expansion(&t("1")),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            BetaSpec::from_expansion(&t("0^inf")),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            BetaSpec::from_expansion(&t("21")),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn non_self_admissible_rejected() {
        for s in ["1011", "011", "1 per(011)", "12"] {
            assert!(
                matches!(
                    BetaSpec::from_expansion(&t(s)),
                    Err(Error::InvalidExpansion(_))
                ),
                "{s}"
            );
        }
    }

    #[test]
    fn periodic_tail_read_as_quasi() {
        let a = BetaSpec::from_expansion(&t("per(10)")).unwrap();
        assert_eq!(a.expansion1(), &t("11"));
        let two = BetaSpec::from_expansion(&t("per(1)")).unwrap();
        assert_eq!(two.value(), Dd::from_f64(2.0));
        assert_eq!(two.is_simple(), Simpleness::Simple { m: 1 });
        assert_eq!(two.quasi_expansion(4).0, vec![1, 1, 1, 1]);
    }

    #[test]
    fn expansion_of_one_examples() {
        let g = BetaSpec::golden();
        assert_eq!(expansion_of_one(g.value(), 5).unwrap(), vec![1, 1, 0, 0, 0]);
        assert_eq!(
            expansion_of_one(Dd::from_f64(2.0), 4).unwrap(),
            vec![1, 1, 1, 1]
        );
        let b = BetaSpec::ten_m_one(1).unwrap();
        assert_eq!(
            expansion_of_one(b.value(), 6).unwrap(),
            vec![1, 0, 1, 0, 0, 0]
        );
    }

    #[test]
    fn quasi_examples() {
        assert_eq!(BetaSpec::golden().quasi_expansion(6).0, vec![1, 0, 1, 0, 1, 0]);
        assert_eq!(
            BetaSpec::ten_m_one(1).unwrap().quasi_expansion(6).0,
            vec![1, 0, 0, 1, 0, 0]
        );
        let inf = BetaSpec::from_expansion(&t("11 per(01)")).unwrap();
        assert_eq!(inf.is_simple(), Simpleness::Infinite);
        let (q, trunc) = inf.quasi_expansion(7);
        assert!(!trunc);
        assert_eq!(q, inf.expansion1().prefix(7));
        // numeric cross-check of the infinite tail
        assert_eq!(
            expansion_of_one_with_error(inf.value(), inf.rel_err(), 20).unwrap(),
            inf.expansion1().prefix(20)
        );
    }

    #[test]
    fn simpleness_examples() {
        assert_eq!(
            BetaSpec::from_expansion(&t("111")).unwrap().is_simple(),
            Simpleness::Simple { m: 3 }
        );
        let b = BetaSpec::parse_numeric("1.8", 64).unwrap();
        assert_eq!(b.is_simple(), Simpleness::UnknownAtDepth { depth: 64 });
        let (q, trunc) = b.quasi_expansion(70);
        assert!(trunc);
        assert_eq!(q.len(), 64);
    }

    #[test]
    fn numeric_golden_terminates() {
        let g = BetaSpec::golden();
        let n = BetaSpec::numeric(g.value()).unwrap();
        assert_eq!(n.is_simple(), Simpleness::Simple { m: 2 });
    }

    #[test]
    fn expand_examples() {
        let g = BetaSpec::golden();
        assert_eq!(g.expand(Dd::ZERO, 6).unwrap(), vec![0; 6]);
        assert_eq!(g.expand(g.value().recip(), 3).unwrap(), vec![1, 0, 0]);
        let d = g.expand(Dd::from_f64(0.5), 5).unwrap();
        assert_eq!(d, vec![0, 1, 0, 0, 1]);
        assert!(g.expand(Dd::ONE, 3).is_err());
    }

    #[test]
    fn precision_failure_reports_reliable_prefix() {
        // A base whose digits are right at a boundary after a few steps but
        // carry a large declared error.
        let g = BetaSpec::golden();
        let r = expansion_of_one_with_error(g.value(), 1e-20, 5);
        assert_eq!(r, Err(Error::Precision { reliable: 1 }));
    }

    #[test]
    fn round_trip_families() {
        for m in 0..=4 {
            let b = BetaSpec::ten_m_one(m).unwrap();
            let n = m + 2 + 4;
            let d = expansion_of_one_with_error(b.value(), b.rel_err(), n).unwrap();
            assert_eq!(d, b.expansion1().prefix(n), "10^{m}1");
        }
        for m in 2..=5 {
            let b = BetaSpec::ones(m).unwrap();
            let n = m + 4;
            let d = expansion_of_one_with_error(b.value(), b.rel_err(), n).unwrap();
            assert_eq!(d, b.expansion1().prefix(n), "1^{m}");
        }
    }

    fn family() -> impl Strategy<Value = BetaSpec> {
        prop_oneof![
            (0usize..=4).prop_map(|m| BetaSpec::ten_m_one(m).unwrap()),
            (2usize..=5).prop_map(|m| BetaSpec::ones(m).unwrap()),
            Just(BetaSpec::from_expansion(&"11 per(01)".parse().unwrap()).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn quasi_is_self_admissible(b in family(), n in 1usize..40) {
            let (w, _) = b.quasi_expansion(n);
            for k in 0..n {
                prop_assert!(w[k..] <= w[..n - k]);
            }
        }

        #[test]
        fn reconstruction(b in family(), x in 0.0f64..1.0, n in 1usize..=50) {
            let d = b.expand(Dd::from_f64(x), n).unwrap();
            let r = b.value().recip();
            let mut s = Dd::ZERO;
            let mut pw = Dd::ONE;
            for &e in &d {
                pw = pw * r;
                s = s + pw.mul_f64(e as f64);
            }
            let diff = (Dd::from_f64(x) - s).to_f64();
            prop_assert!(diff >= -1e-28 && diff < pw.to_f64(), "{} vs {}", diff, pw.to_f64());
        }

        #[test]
        fn expand_is_monotone(b in family(), x in 0.0f64..0.999, dx in 0.0f64..0.001, n in 1usize..30) {
            let a = b.expand(Dd::from_f64(x), n).unwrap();
            let c = b.expand(Dd::from_f64(x + dx), n).unwrap();
            prop_assert!(a <= c);
        }
    }
}
