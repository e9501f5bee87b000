use betashift_core::dimension::{
    dim_level_set, dim_tail_bounds, dim_upper_bound, entropy_gap_counter, local_dim_estimate,
    stream_zero_frequency, FrequencyReport,
};
use betashift_core::markov::markov_from_mu;
use betashift_core::measure::{mp_pseudo_golden, mp_zero_interval, CesaroConfig, CesaroMethod};
use betashift_core::shift::parse_word;
use betashift_core::{
    BetaShift, BetaSpec, CylWalkMeasure, Dd, Error, Law, Prob, Rational, Scalar, SimStream,
    Simpleness,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{parse_prob, BetaArgs, Cli, Command, Grid};
use crate::render::Output;
use crate::{verify, CliError};

type Res = Result<Output, CliError>;

/// JSON encoding of a scalar: exact values as `"a/b"` strings, floats as numbers.
pub fn num<S: Scalar>(v: &S) -> Value {
    if S::EXACT {
        Value::String(v.to_string())
    } else {
        float(v.to_f64())
    }
}

fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn bits(w: &[u8]) -> String {
    w.iter().map(|d| char::from(b'0' + d)).collect()
}

fn simpleness(s: Simpleness) -> Value {
    match s {
        Simpleness::Simple { m } => json!({"kind": "simple", "length": m}),
        Simpleness::Infinite => json!({"kind": "infinite"}),
        Simpleness::UnknownAtDepth { depth } => json!({"kind": "unknown", "depth": depth}),
    }
}

fn shift_of(beta: &BetaArgs) -> Result<BetaShift, CliError> {
    Ok(BetaShift::new(&beta.spec()?)?)
}

fn open_prob(s: &str) -> Result<Prob, CliError> {
    let p = parse_prob(s)?;
    p.check_open_unit()?;
    Ok(p)
}

/// Runs `f` with `S = Rational` for exact input and `S = f64` otherwise.
macro_rules! with_scalar {
    ($p:expr, $f:ident ( $($arg:expr),* )) => {
        if $p.is_exact() {
            $f::<Rational>($($arg),*)
        } else {
            $f::<f64>($($arg),*)
        }
    };
}

/// Runs the subcommand; warnings for the diagnostic channel are appended to `warnings`.
pub fn execute(cli: &Cli, warnings: &mut Vec<String>) -> Res {
    match &cli.command {
        Command::Expand { beta, x, n } => expand(beta, x, *n),
        Command::Eps1 { beta, n } => eps1(beta, *n),
        Command::Admissible { beta, word } => {
            let shift = shift_of(beta)?;
            let ok = shift.is_admissible(&parse_word(word)?)?;
            Ok(Output::new(Value::Bool(ok)))
        }
        Command::Full { beta, word } => full(beta, word),
        Command::Enumerate {
            beta,
            n,
            full_only,
            counts,
        } => enumerate(beta, *n, *full_only, *counts),
        Command::Cyl { beta, word } => cyl(beta, word),
        Command::Measure {
            beta,
            p,
            word,
            shift,
        } => {
            let p = open_prob(p)?;
            let sh = shift_of(beta)?;
            let digits = parse_word(word)?;
            with_scalar!(p, measure(&sh, &p, &digits, *shift))
        }
        Command::ShiftMeasure {
            beta,
            p,
            target,
            iterations,
            from_one,
            streams,
        } => {
            let p = open_prob(p)?;
            let sh = shift_of(beta)?;
            let target = parse_word(target)?;
            let config = CesaroConfig {
                seed: cli.seed,
                streams: *streams,
            };
            let first = usize::from(*from_one);
            with_scalar!(p, cesaro(&sh, &p, &target, *iterations, first, &config, warnings))
        }
        Command::Mp { p, m, ones } => {
            let p = open_prob(p)?;
            with_scalar!(p, mp(&p, *m, *ones))
        }
        Command::Dim { beta, p, p_grid } => dim(beta, p.as_deref(), p_grid.as_deref()),
        Command::Markov { beta, p } => {
            let m = beta.ten_m_one_index()?;
            let p = open_prob(p)?;
            with_scalar!(p, markov(m, &p))
        }
        Command::EntropyGap { p, p_grid } => entropy_gap(p.as_deref(), p_grid.as_deref()),
        Command::Simulate {
            beta,
            q,
            n,
            streams,
        } => simulate(beta, q, *n, *streams, cli.seed),
        Command::Localdim {
            beta,
            p,
            q,
            depths,
            stream,
        } => localdim(beta, p, q.as_deref(), depths, cli.seed, *stream),
        Command::Verify { suite, m, p, grid } => {
            let p = p.as_deref().map(open_prob).transpose()?;
            let checks = verify::run(*suite, *m, p.as_ref(), *grid)?;
            Ok(verify::output(&checks))
        }
    }
}

fn expand(beta: &BetaArgs, x: &str, n: usize) -> Res {
    let spec = beta.spec()?;
    let xv = Dd::parse_decimal(x)?;
    let digits = spec.expand(xv, n)?;
    let plain = if digits.iter().all(|&d| d < 10) {
        bits(&digits)
    } else {
        digits.iter().map(u8::to_string).collect::<Vec<_>>().join(" ")
    };
    Ok(Output {
        value: json!({
            "beta": spec.value().to_decimal_string(25),
            "x": x,
            "digits": digits,
        }),
        plain: Some(plain),
        failed: false,
    })
}

fn eps1(beta: &BetaArgs, n: usize) -> Res {
    let spec = beta.spec()?;
    let expansion: Vec<u8> = (1..=n).map_while(|j| spec.eps(j)).collect();
    let (quasi, truncated) = spec.quasi_expansion(n);
    let runs = BetaShift::new(&spec).ok().map(|sh| sh.zero_run_lengths(n));
    Ok(Output::new(json!({
        "beta": spec.value().to_decimal_string(25),
        "mode": format!("{:?}", spec.mode()).to_lowercase(),
        "expansion": spec.exact_expansion().map(|t| t.to_string()),
        "expansion_digits": expansion,
        "simpleness": simpleness(spec.is_simple()),
        "quasi_digits": quasi,
        "truncated": truncated,
        "zero_runs": runs.as_ref().map(|r| r.lengths.clone()),
        "zero_runs_max": runs.as_ref().map(|r| r.max),
        "zero_runs_censored": runs.as_ref().map(|r| r.censored),
    })))
}

fn full(beta: &BetaArgs, word: &str) -> Res {
    let shift = shift_of(beta)?;
    let w = shift.word(&parse_word(word)?)?;
    Ok(Output::new(json!({
        "word": w.as_string(),
        "full": w.is_full(),
        "parry_state": w.parry_state(),
        "n0": w.n0(),
        "n1": w.n1(),
        "m_index": shift.m_index(&w)?,
        "tau": shift.tau(&w)?,
        "tau_prime": w.tau_prime(),
    })))
}

fn count_value(c: u128) -> Value {
    u64::try_from(c).map_or_else(|_| Value::String(c.to_string()), Value::from)
}

fn enumerate(beta: &BetaArgs, n: usize, full_only: bool, counts: bool) -> Res {
    let shift = shift_of(beta)?;
    if counts {
        let rows = (1..=n)
            .map(|k| Ok(json!({"n": k, "count": count_value(shift.count_admissible(k, full_only)?)})))
            .collect::<Result<Vec<_>, Error>>()?;
        return Ok(Output::new(Value::Array(rows)));
    }
    let words = shift.enumerate_admissible(n, full_only)?;
    Ok(Output::new(Value::Array(
        words.iter().map(|w| Value::String(bits(w))).collect(),
    )))
}

fn cyl(beta: &BetaArgs, word: &str) -> Res {
    let shift = shift_of(beta)?;
    let w = shift.word(&parse_word(word)?)?;
    let c = shift.cylinder_interval(&w)?;
    Ok(Output::new(json!({
        "word": w.as_string(),
        "left": float(c.left.to_f64()),
        "length": float(c.length.to_f64()),
        "log_length": float(c.log_length),
        "order": c.order,
        "full": w.is_full(),
    })))
}

fn measure<S: Scalar>(shift: &BetaShift, p: &Prob, digits: &[u8], k: usize) -> Res {
    let mu = CylWalkMeasure::new(shift, p.to_scalar::<S>())?;
    let v = if k == 0 {
        mu.mu_digits(digits)?
    } else {
        mu.shifted_mu(digits, k)?
    };
    Ok(Output {
        value: json!({
            "word": bits(digits),
            "p": p.to_string(),
            "shift": k,
            "value": num(&v),
            "value_f64": float(v.to_f64()),
        }),
        plain: Some(v.to_string()),
        failed: false,
    })
}

fn cesaro<S: Scalar>(
    shift: &BetaShift,
    p: &Prob,
    target: &[u8],
    k: usize,
    first: usize,
    config: &CesaroConfig,
    warnings: &mut Vec<String>,
) -> Res {
    let mu = CylWalkMeasure::new(shift, p.to_scalar::<S>())?;
    let est = mu.cesaro_with(target, k, first, config)?;
    if est.hypothesis_violation {
        warnings.push(
            "the base is not simple, so the limit need not exist; estimate reported anyway".into(),
        );
    }
    let method = match est.method {
        CesaroMethod::Exact => json!({"kind": "exact"}),
        CesaroMethod::MonteCarlo { streams } => json!({"kind": "monte-carlo", "streams": streams}),
    };
    Ok(Output::new(json!({
        "target": bits(target),
        "p": p.to_string(),
        "iterations": est.iterations,
        "first_shift": est.first_shift,
        "value": num(&est.value),
        "value_f64": float(est.value.to_f64()),
        "method": method,
        "half_width": float(est.half_width),
        "hypothesis_violation": est.hypothesis_violation,
    })))
}

fn mp<S: Scalar>(p: &Prob, m: usize, ones: bool) -> Res {
    let ps = p.to_scalar::<S>();
    let value = if ones {
        let (zero, top) = mp_pseudo_golden(&ps, m)?;
        json!({
            "family": "ones", "m": m, "p": p.to_string(),
            "zero_interval": num(&zero), "top_interval": num(&top),
        })
    } else {
        let zero = mp_zero_interval(&ps, m)?;
        json!({"family": "10m1", "m": m, "p": p.to_string(), "zero_interval": num(&zero)})
    };
    Ok(Output::new(value))
}

fn dim_one<S: Scalar>(p: &Prob, m: usize, beta: f64) -> Result<Value, CliError> {
    let r = dim_level_set(&p.to_scalar::<S>(), m)?;
    let ub = dim_upper_bound(p.to_f64(), beta)?;
    let tails = dim_tail_bounds(p.to_f64(), beta).ok();
    Ok(json!({
        "m": m,
        "p": p.to_string(),
        "q": r.q.as_ref().map(num),
        "dim": float(r.dim),
        "entropy": float(r.entropy),
        "log_beta": float(r.log_beta),
        "upper_bound": float(ub.value),
        "upper_bound_exceeds_one": ub.exceeds_one,
        "lower_tail_bound": tails.map(|t| float(t.0)),
        "upper_tail_bound": tails.map(|t| float(t.1)),
    }))
}

fn dim(beta: &BetaArgs, p: Option<&str>, grid: Option<&str>) -> Res {
    let m = beta.ten_m_one_index()?;
    let b = BetaSpec::ten_m_one(m)?.value_f64();
    match (p, grid) {
        (Some(p), _) => {
            let p = parse_prob(p)?;
            p.check_closed_unit()?;
            Ok(Output::new(with_scalar!(p, dim_one(&p, m, b))?))
        }
        (None, Some(g)) => {
            let rows = Grid::parse(g)?
                .points()
                .into_iter()
                .map(|p| {
                    let r = dim_level_set(&p, m)?;
                    Ok(json!({
                        "p": float(p), "q": r.q.map(float),
                        "dim": float(r.dim), "entropy": float(r.entropy),
                    }))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(Output::new(Value::Array(rows)))
        }
        (None, None) => Err(CliError::Usage("give --p or --p-grid".into())),
    }
}

fn markov<S: Scalar>(m: usize, p: &Prob) -> Res {
    let mm = markov_from_mu(m, &p.to_scalar::<S>())?;
    Ok(Output::new(json!({
        "m": m,
        "p": p.to_string(),
        "order": mm.order(),
        "states": mm.states().iter().map(|s| bits(s)).collect::<Vec<_>>(),
        "pi": mm.pi().iter().map(num).collect::<Vec<_>>(),
        "trans": mm.trans().iter().map(|r| r.iter().map(num).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "entropy": float(mm.entropy()),
        "zero_mass": num(&mm.cylinder(&[0])),
    })))
}

fn gap_row<S: Scalar>(p: &Prob) -> Result<Value, CliError> {
    let g = entropy_gap_counter(&p.to_scalar::<S>())?;
    Ok(json!({
        "p": p.to_string(),
        "a": num(&g.a),
        "lambda11": num(&g.lambda11),
        "b": num(&g.b),
        "x_star": float(g.x_star),
        "x_star_search": float(g.x_star_search),
        "h_upper": float(g.h_upper),
        "f_max": float(g.f_max),
        "gap": float(g.gap),
        "bracket_low": float(g.bracket.0),
        "bracket_high": float(g.bracket.1),
    }))
}

fn entropy_gap(p: Option<&str>, grid: Option<&str>) -> Res {
    match (p, grid) {
        (Some(p), _) => {
            let p = open_prob(p)?;
            Ok(Output::new(with_scalar!(p, gap_row(&p))?))
        }
        (None, Some(g)) => {
            let rows = Grid::parse(g)?
                .points()
                .into_iter()
                .map(|p| {
                    let p = Prob::Float(p);
                    p.check_open_unit()?;
                    gap_row::<f64>(&p)
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(Output::new(Value::Array(rows)))
        }
        (None, None) => Err(CliError::Usage("give --p or --p-grid".into())),
    }
}

fn simulate(beta: &BetaArgs, q: &str, n: usize, streams: usize, seed: u64) -> Res {
    let m = beta.ten_m_one_index()?;
    let q = open_prob(q)?;
    if n == 0 || streams == 0 {
        return Err(CliError::Core(Error::Domain(
            "need positive length and stream count".into(),
        )));
    }
    let mm = markov_from_mu(m, &q.to_f64())?;
    let per = (0..streams as u64)
        .into_par_iter()
        .map(|id| stream_zero_frequency(&mm, seed, id, n))
        .collect::<Result<Vec<_>, Error>>()?;
    let predicted = mp_zero_interval(&q.to_rational(), m)?.to_f64();
    let rep = FrequencyReport::from_frequencies(per, predicted, n);
    Ok(Output::new(json!({
        "m": m,
        "q": q.to_string(),
        "n": n,
        "streams": streams,
        "seed": seed,
        "mean": float(rep.mean),
        "std_error": float(rep.std_error),
        "predicted": float(rep.predicted),
        "z": float(rep.z),
        "within_4_se": rep.z.abs() <= 4.0,
        "per_stream": rep.per_stream.iter().map(|&x| float(x)).collect::<Vec<_>>(),
    })))
}

fn localdim(
    beta: &BetaArgs,
    p: &str,
    q: Option<&str>,
    depths: &[usize],
    seed: u64,
    stream: u64,
) -> Res {
    let p = open_prob(p)?.to_f64();
    let shift = shift_of(beta)?;
    let mu = CylWalkMeasure::new(&shift, p)?;
    let law = match q {
        Some(q) => {
            let m = beta.ten_m_one_index()?;
            Law::markov(&markov_from_mu(m, &open_prob(q)?.to_f64())?)
        }
        None => Law::Walk { shift: &shift, p },
    };
    let mut depths = depths.to_vec();
    depths.sort_unstable();
    depths.dedup();
    let mut sim = SimStream::new(seed, stream, law);
    let mut failure = None;
    let digits = std::iter::from_fn(|| match sim.next_digit() {
        Ok(d) => Some(d),
        Err(e) => {
            failure = Some(e);
            None
        }
    });
    let traj = local_dim_estimate(digits, &mu, &depths);
    if let Some(e) = failure {
        return Err(e.into());
    }
    let rows = traj?
        .into_iter()
        .map(|(n, r)| json!({"n": n, "ratio": float(r)}))
        .collect();
    Ok(Output::new(Value::Array(rows)))
}
