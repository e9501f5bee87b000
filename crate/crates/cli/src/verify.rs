//! Property suites behind `betashift verify`.
//!
//! Each check returns a pass flag and a one-line detail. Exhaustive loops run
//! over fixed small ranges so the whole battery finishes in seconds.

use betashift_core::dimension::{dim_level_set, dim_upper_bound, entropy_gap_counter};
use betashift_core::markov::{markov_entropy, markov_from_mu, ratio_identity_report};
use betashift_core::measure::{mp_pseudo_golden, mp_zero_interval};
use betashift_core::scalar::xlogx;
use betashift_core::{BetaShift, BetaSpec, CylWalkMeasure, Dd, Error, Prob, Rational, Scalar};
use num_traits::{One, Zero};
use serde_json::json;

use crate::args::Suite;
use crate::render::Output;

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

type Res<T> = Result<T, Error>;

struct Recorder {
    suite: &'static str,
    out: Vec<Check>,
}

impl Recorder {
    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.out.push(Check {
            suite: self.suite,
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

pub fn run(suite: Suite, m: Option<usize>, p: Option<&Prob>, grid: usize) -> Res<Vec<Check>> {
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Combinatorics {
        out.extend(combinatorics(m)?);
    }
    if all || suite == Suite::Measures {
        out.extend(measures(m, p)?);
    }
    if all || suite == Suite::Markov {
        out.extend(markov(m, p)?);
    }
    if all || suite == Suite::Dimension {
        out.extend(dimension(m, grid)?);
    }
    Ok(out)
}

pub fn output(checks: &[Check]) -> Output {
    let rows = checks
        .iter()
        .map(|c| {
            json!({
                "suite": c.suite,
                "check": c.name,
                "status": if c.passed { "PASS" } else { "FAIL" },
                "detail": c.detail,
            })
        })
        .collect();
    let plain = checks
        .iter()
        .map(|c| {
            format!(
                "{} {}/{}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.suite,
                c.name,
                c.detail
            )
        })
        .collect::<Vec<_>>()
        .join("\n");
    Output {
        value: serde_json::Value::Array(rows),
        plain: Some(plain),
        failed: checks.iter().any(|c| !c.passed),
    }
}

fn family_indices(m: Option<usize>) -> Vec<usize> {
    m.map_or_else(|| vec![0, 1, 2], |m| vec![m])
}

fn shift_m(m: usize) -> Res<BetaShift> {
    BetaShift::new(&BetaSpec::ten_m_one(m)?)
}

fn words_up_to(shift: &BetaShift, n: usize) -> Res<Vec<Vec<u8>>> {
    let mut all = Vec::new();
    for k in 1..=n {
        all.extend(shift.enumerate_admissible(k, false)?);
    }
    Ok(all)
}

/// Admissibility by comparing every suffix with the quasi-expansion of 1.
fn suffix_scan(shift: &BetaShift, w: &[u8]) -> bool {
    (0..w.len()).all(|k| {
        for (i, &d) in w[k..].iter().enumerate() {
            let e = shift.eps_star(i + 1).expect("simple bases have every digit");
            if d != e {
                return d < e;
            }
        }
        true
    })
}

fn combinatorics(m: Option<usize>) -> Res<Vec<Check>> {
    let mut r = Recorder {
        suite: "combinatorics",
        out: Vec::new(),
    };
    for m in family_indices(m) {
        let shift = shift_m(m)?;
        let big_m = m + 2;
        let words = words_up_to(&shift, 8)?;
        let parsed: Vec<_> = words.iter().map(|w| shift.word(w)).collect::<Res<_>>()?;
        let (mut pairs, mut bad_sub, mut bad_full, mut bad_defect, mut bad_n1) = (0, 0, 0, 0, 0);
        let mut buf = Vec::new();
        for (w, pw) in words.iter().zip(&parsed) {
            for (v, pv) in words.iter().zip(&parsed) {
                buf.clear();
                buf.extend_from_slice(w);
                buf.extend_from_slice(v);
                if !shift.is_admissible(&buf)? {
                    continue;
                }
                pairs += 1;
                let wv = shift.word(&buf)?;
                if !(pw.n0() <= wv.n0() && wv.n0() <= pw.n0() + pv.n0()) {
                    bad_sub += 1;
                }
                if pw.is_full() && wv.n0() != pw.n0() + pv.n0() {
                    bad_full += 1;
                }
                if wv.n0() + big_m < pw.n0() + pv.n0() {
                    bad_defect += 1;
                }
                if wv.n1() != pw.n1() + pv.n1() {
                    bad_n1 += 1;
                }
            }
        }
        r.push(
            format!("m={m} zero-counter sub/superadditivity"),
            bad_sub == 0,
            format!("{pairs} admissible pairs up to length 8, {bad_sub} violations"),
        );
        r.push(
            format!("m={m} full left factor is additive"),
            bad_full == 0,
            format!("{bad_full} violations"),
        );
        r.push(
            format!("m={m} defect at most M"),
            bad_defect == 0,
            format!("M = {big_m}, {bad_defect} violations"),
        );
        r.push(
            format!("m={m} one-counter additivity"),
            bad_n1 == 0,
            format!("{bad_n1} violations"),
        );

        let mut bad = 0;
        let mut count = 0;
        for n in big_m..=16 {
            for w in shift.enumerate_admissible(n, false)? {
                let pw = shift.word(&w)?;
                let s = pw.n0() + big_m * pw.n1();
                count += 1;
                if !(n <= s && s <= n + m + 1) {
                    bad += 1;
                }
            }
        }
        r.push(
            format!("m={m} n <= N0 + (m+2) N1 <= n + m + 1"),
            bad == 0,
            format!("{count} words of length {big_m}..=16, {bad} violations"),
        );

        let full: Vec<Vec<u8>> = (1..=8)
            .map(|n| shift.enumerate_admissible(n, true))
            .collect::<Res<Vec<_>>>()?
            .concat();
        let mut bad_concat = 0;
        for w in &full {
            for v in &full {
                let wv = [w.as_slice(), v.as_slice()].concat();
                if !shift.is_admissible(&wv)? || !shift.word(&wv)?.is_full() {
                    bad_concat += 1;
                }
            }
        }
        let mut bad_suffix = 0;
        let mut bad_last = 0;
        for w in &full {
            for k in 1..w.len() {
                if !shift.word(&w[k..])?.is_full() {
                    bad_suffix += 1;
                }
            }
            if *w.last().expect("non-empty") != 0 {
                bad_last += 1;
            }
        }
        r.push(
            format!("m={m} full words closed under concatenation and suffixes"),
            bad_concat == 0 && bad_suffix == 0,
            format!("{} full words, {bad_concat} + {bad_suffix} violations", full.len()),
        );
        r.push(
            format!("m={m} full words end in 0"),
            bad_last == 0,
            format!("{bad_last} violations"),
        );

        let mut bad = 0;
        for k in 1..=4 * big_m {
            let prefix: Vec<u8> = (1..=k).map(|j| shift.eps_star(j).unwrap_or(0)).collect();
            if shift.word(&prefix)?.is_full() != (k % big_m == 0) {
                bad += 1;
            }
        }
        r.push(
            format!("m={m} quasi-expansion prefix is full iff M divides its length"),
            bad == 0,
            format!("k <= {}, {bad} violations", 4 * big_m),
        );

        let mut mismatch = None;
        for n in 1..=16usize {
            let brute = (0u32..1 << n)
                .filter(|bits| {
                    let w: Vec<u8> = (0..n).map(|i| ((bits >> (n - 1 - i)) & 1) as u8).collect();
                    suffix_scan(&shift, &w)
                })
                .count() as u128;
            if brute != shift.count_admissible(n, false)? {
                mismatch = Some(n);
                break;
            }
        }
        r.push(
            format!("m={m} word counts match unpruned filtering"),
            mismatch.is_none(),
            match mismatch {
                None => "n <= 16".to_string(),
                Some(n) => format!("first mismatch at n = {n}"),
            },
        );

        let beta_inv = shift.beta().recip();
        let mut worst: f64 = 0.0;
        let mut gaps: f64 = 0.0;
        for n in 0..10 {
            let parents = if n == 0 {
                vec![Vec::new()]
            } else {
                shift.enumerate_admissible(n, false)?
            };
            for w in parents {
                let parent = shift.cylinder_interval(&shift.word(&w)?)?;
                let mut total = Dd::ZERO;
                let mut cursor = parent.left;
                for d in 0..=1u8 {
                    let child = [w.as_slice(), &[d]].concat();
                    if !shift.is_admissible(&child)? {
                        continue;
                    }
                    let c = shift.cylinder_interval(&shift.word(&child)?)?;
                    gaps = gaps.max((c.left - cursor).abs().to_f64());
                    cursor = c.left + c.length;
                    total = total + c.length;
                }
                worst = worst.max(((total - parent.length) / parent.length).abs().to_f64());
            }
        }
        r.push(
            format!("m={m} sibling cylinders tile their parent"),
            worst < 1e-25 && gaps < 1e-25,
            format!("orders <= 10, relative length error {worst:.1e}, gap {gaps:.1e}"),
        );

        let mut worst: f64 = 0.0;
        for n in 1..=12 {
            let scale = beta_inv.powi(n as u32);
            for w in shift.enumerate_admissible(n, true)? {
                let c = shift.cylinder_interval(&shift.word(&w)?)?;
                worst = worst.max(((c.length - scale) / scale).abs().to_f64());
            }
        }
        r.push(
            format!("m={m} full cylinders have length beta^-n"),
            worst < 1e-25,
            format!("orders <= 12, relative error {worst:.1e}"),
        );

        let c = shift.min_y();
        let mut bad = 0;
        for n in 1..=12 {
            let scale = -(n as f64) * shift.ln_beta();
            for w in shift.enumerate_admissible(n, false)? {
                let l = shift.cylinder_interval(&shift.word(&w)?)?.log_length;
                if l > scale + 1e-12 || l < scale + c.ln() - 1e-12 {
                    bad += 1;
                }
            }
        }
        r.push(
            format!("m={m} c beta^-n <= |I(w)| <= beta^-n"),
            bad == 0,
            format!("c = {c:.6}, orders <= 12, {bad} violations"),
        );
    }
    Ok(r.out)
}

fn probs(p: Option<&Prob>) -> Vec<Rational> {
    match p {
        Some(p) => vec![p.to_rational()],
        None => vec![
            Rational::from_ratio(1, 3),
            Rational::from_ratio(1, 2),
            Rational::from_ratio(2, 5),
        ],
    }
}

fn measures(m: Option<usize>, p: Option<&Prob>) -> Res<Vec<Check>> {
    let mut r = Recorder {
        suite: "measures",
        out: Vec::new(),
    };
    let ms = m.map_or_else(|| vec![0, 1], |m| vec![m]);
    for &m in &ms {
        let shift = shift_m(m)?;
        for p in probs(p) {
            let mu = CylWalkMeasure::new(&shift, p.clone())?;
            let mut bad_mass = None;
            let mut bad_split = 0;
            for n in 1..=12 {
                let mut total = Rational::zero();
                for w in shift.enumerate_admissible(n, false)? {
                    let v = mu.mu_digits(&w)?;
                    let parent = mu.mu_digits(&w[..n - 1])?;
                    let sib = [&w[..n - 1], &[1 - w[n - 1]]].concat();
                    if w[n - 1] == 0 {
                        let other = mu.mu_digits(&sib)?;
                        if v.clone() + other != parent {
                            bad_split += 1;
                        }
                    }
                    total += v;
                }
                if !total.is_one() && bad_mass.is_none() {
                    bad_mass = Some(n);
                }
            }
            r.push(
                format!("m={m} p={p} total mass one and children sum to parent"),
                bad_mass.is_none() && bad_split == 0,
                format!("exact, n <= 12, {bad_split} split violations, first mass failure {bad_mass:?}"),
            );
        }
    }

    let golden = shift_m(0)?;
    for p in probs(p) {
        let mu = CylWalkMeasure::new(&golden, p.clone())?;
        let one = mu.mu_digits(&[1])?;
        let shifted = mu.shifted_mu(&[1], 1)?;
        let q = Rational::one() - &p;
        r.push(
            format!("golden p={p} mu[1] = 1-p and sigma mu[1] = p(1-p)"),
            one == q && shifted == p.clone() * &q,
            format!("mu[1] = {one}, sigma mu[1] = {shifted}"),
        );
    }

    for m in ms.iter().copied().chain([2]).collect::<std::collections::BTreeSet<_>>() {
        let shift = shift_m(m)?;
        for p in probs(p) {
            let mu = CylWalkMeasure::new(&shift, p.clone())?;
            let qb = mu.quasi_bernoulli_report(8)?;
            r.push(
                format!("m={m} p={p} 1 <= mu[ww']/(mu[w]mu[w']) <= p^-M"),
                qb.holds == Some(true),
                format!(
                    "{} pairs, ratios in [{}, {}], bound {}",
                    qb.pairs,
                    qb.min_ratio,
                    qb.max_ratio,
                    qb.bound.map(|b| b.to_string()).unwrap_or_default()
                ),
            );
            let qi = mu.strong_quasi_invariance_report(6, 6)?;
            r.push(
                format!("m={m} p={p} p^M <= sigma^k mu[w] / mu[w] <= p^-M"),
                qi.holds == Some(true),
                format!(
                    "{} checks, ratios in [{:.6}, {:.6}]",
                    qi.checked,
                    qi.min_ratio.to_f64(),
                    qi.max_ratio.to_f64()
                ),
            );
        }
    }

    let numeric = BetaShift::new(&BetaSpec::numeric(Dd::from_f64(1.8))?)?;
    let mu = CylWalkMeasure::new(&numeric, 0.5f64)?;
    let best = mu
        .expansion_witnesses(40)?
        .into_iter()
        .map(|w| w.shift_ratio.max(w.split_ratio))
        .fold(0.0, f64::max);
    r.push(
        "beta=1.8 unbounded ratios along the expansion of 1",
        best > 100.0,
        format!("largest ratio {best:.3e} at depth <= 40"),
    );

    let mut worst: f64 = 0.0;
    for m in 0..=2 {
        let shift = shift_m(m)?;
        for p in [0.25, 0.5, 0.75] {
            let mu = CylWalkMeasure::new(&shift, p)?;
            let est = mu.cesaro(&[0], 10_000)?;
            worst = worst.max((est.value - mp_zero_interval(&p, m)?).abs());
        }
    }
    r.push(
        "Cesaro average of [0] matches its closed form",
        worst < 1e-3,
        format!("K = 10^4, m <= 2, p in {{1/4,1/2,3/4}}, worst error {worst:.2e}"),
    );

    let mut bad = 0;
    for k in 1..=99 {
        let p = Rational::from_ratio(k, 100);
        if mp_zero_interval(&p, 0)? != mp_pseudo_golden(&p, 2)?.0 {
            bad += 1;
        }
    }
    r.push(
        "golden closed forms agree across both families",
        bad == 0,
        format!("99 exact grid values, {bad} mismatches"),
    );
    Ok(r.out)
}

fn markov(m: Option<usize>, p: Option<&Prob>) -> Res<Vec<Check>> {
    let mut r = Recorder {
        suite: "markov",
        out: Vec::new(),
    };
    for m in family_indices(m) {
        let shift = shift_m(m)?;
        for p in probs(p) {
            let mu = CylWalkMeasure::new(&shift, p.clone())?;
            let rep = ratio_identity_report(&mu, m + 1, m + 8, 4)?;
            r.push(
                format!("m={m} p={p} (m+1)-step ratio identity for sigma^j mu, j <= 4"),
                rep.passed(),
                format!(
                    "{} identities, {} violations{}",
                    rep.checked,
                    rep.violations,
                    rep.first_violation.map(|v| format!(", first: {v}")).unwrap_or_default()
                ),
            );
            let mm = markov_from_mu(m, &p)?;
            let a = mp_zero_interval(&p, m)?;
            let u = mm.uniqueness_relations(m, &a);
            r.push(
                format!("m={m} p={p} chain satisfies the linear uniqueness relations"),
                u.passed(),
                format!("{} relations, {} violations", u.checked, u.violations),
            );
            let res = mm.stationarity_residual();
            r.push(
                format!("m={m} p={p} stationary vector is exact"),
                res.is_zero() && mm.row_residual() == 0.0,
                format!("residual {res}"),
            );
        }
    }
    Ok(r.out)
}

fn dimension(m: Option<usize>, grid: usize) -> Res<Vec<Check>> {
    let mut r = Recorder {
        suite: "dimension",
        out: Vec::new(),
    };
    let grid = grid.max(1);
    for m in family_indices(m) {
        let lo = (m as f64 + 1.0) / (m as f64 + 2.0);
        let beta = BetaSpec::ten_m_one(m)?.value_f64();
        let points: Vec<f64> = (1..=grid).map(|i| lo + (1.0 - lo) * i as f64 / (grid + 1) as f64).collect();
        let (mut worst_var, mut bad_dom): (f64, usize) = (0.0, 0);
        for &p in &points {
            let rep = dim_level_set(&p, m)?;
            let q = rep.q.expect("p lies above the threshold");
            let h = markov_entropy(&markov_from_mu(m, &q)?);
            worst_var = worst_var.max((h - rep.dim * rep.log_beta).abs());
            if rep.dim > dim_upper_bound(p, beta)?.value + 1e-12 {
                bad_dom += 1;
            }
        }
        r.push(
            format!("m={m} chain entropy equals dim x log beta"),
            worst_var < 1e-10,
            format!("{grid} grid points, worst error {worst_var:.2e}"),
        );
        r.push(
            format!("m={m} level-set dimension below the entropy bound"),
            bad_dom == 0,
            format!("{bad_dom} violations"),
        );
        let a = dim_level_set(&Rational::from_ratio(m as i64 + 1, m as i64 + 2), m)?.dim;
        let b = dim_level_set(&Rational::one(), m)?.dim;
        r.push(
            format!("m={m} dimension vanishes at both ends"),
            a == 0.0 && b == 0.0,
            format!("dim at (m+1)/(m+2) = {a}, at 1 = {b}"),
        );
        if m == 0 {
            let lb = beta.ln();
            let worst = points
                .iter()
                .map(|&p| {
                    let direct = (xlogx(p) - xlogx(2.0 * p - 1.0) - xlogx(1.0 - p)) / lb;
                    (dim_level_set(&p, 0).map(|d| d.dim).unwrap_or(f64::NAN) - direct).abs()
                })
                .fold(0.0, f64::max);
            r.push(
                "golden dimension matches p log p - (2p-1) log(2p-1) - (1-p) log(1-p)",
                worst < 1e-12,
                format!("worst error {worst:.2e}"),
            );
        }
    }

    let (mut min_a, mut bracket_ok, mut distinct, mut min_gap, mut worst_search) =
        (f64::INFINITY, true, true, f64::INFINITY, 0.0f64);
    let mut below = Vec::new();
    for k in 1..=99 {
        let p = k as f64 / 100.0;
        match entropy_gap_counter(&p) {
            Ok(g) => {
                min_a = min_a.min(g.a);
                distinct &= g.b != g.x_star;
                worst_search = worst_search.max((g.x_star - g.x_star_search).abs());
                min_gap = min_gap.min(g.gap);
                if g.gap <= 1e-6 {
                    below.push(format!("{p}: {:.2e}", g.gap));
                }
            }
            Err(Error::Consistency(_)) => bracket_ok = false,
            Err(e) => return Err(e),
        }
    }
    r.push(
        "entropy-gap chain: a >= 1/3 and b inside its bracket, b != x*",
        min_a >= 1.0 / 3.0 && bracket_ok && distinct,
        format!("p = 0.01..0.99, min a = {min_a:.6}"),
    );
    r.push(
        "entropy-gap maximiser: closed form matches golden-section search",
        worst_search < 1e-8,
        format!("worst difference {worst_search:.2e}"),
    );
    r.push(
        "entropy gap exceeds 1e-6",
        below.is_empty(),
        if below.is_empty() {
            format!("min gap {min_gap:.3e}")
        } else {
            format!("min gap {min_gap:.3e}; at or below threshold: {}", below.join(", "))
        },
    );
    Ok(r.out)
}
