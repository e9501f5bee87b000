use betashift_core::markov::is_ten_m_one;
use betashift_core::{BetaSpec, DigitTail, Prob, DEFAULT_DEPTH};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "betashift", version, about = "Beta-shift words, measures and dimension formulas")]
pub struct Cli {
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Seed for every random stream.
    #[arg(long, env = "BETASHIFT_SEED", default_value_t = 0, global = true)]
    pub seed: u64,
    /// Worker threads for simulations (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Expansion of 1 equal to 1 0^m 1.
    #[value(name = "10m1")]
    TenMOne,
    /// Expansion of 1 equal to 1^m.
    Ones,
}

/// How the base is chosen. At most one of the three sources may be given.
#[derive(Args, Debug, Clone)]
pub struct BetaArgs {
    /// Expansion of 1 as a digit tail, e.g. "1 1", "1 0 1", "110 per(01)".
    #[arg(long = "beta-expansion", value_name = "TAIL", conflicts_with_all = ["beta", "family"])]
    pub expansion: Option<String>,
    /// Decimal value of the base.
    #[arg(long, value_name = "VALUE", conflicts_with = "family")]
    pub beta: Option<String>,
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Family index; alone it selects the 10m1 family.
    #[arg(long)]
    pub m: Option<usize>,
    /// Digits of 1 computed for a numeric base.
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub depth: usize,
}

impl BetaArgs {
    /// Builds the selected base; `None` when nothing was given.
    pub fn spec_opt(&self) -> Result<Option<BetaSpec>, CliError> {
        if let Some(t) = &self.expansion {
            let tail: DigitTail = t.parse()?;
            return Ok(Some(BetaSpec::from_expansion(&tail)?));
        }
        if let Some(b) = &self.beta {
            return Ok(Some(BetaSpec::parse_numeric(b, self.depth)?));
        }
        match (self.family, self.m) {
            (Some(Family::Ones), Some(m)) => Ok(Some(BetaSpec::ones(m)?)),
            (Some(_), None) => Err(CliError::Usage("--family needs --m".into())),
            (Some(Family::TenMOne) | None, Some(m)) => Ok(Some(BetaSpec::ten_m_one(m)?)),
            (None, None) => Ok(None),
        }
    }

    pub fn spec(&self) -> Result<BetaSpec, CliError> {
        self.spec_opt()?.ok_or_else(|| {
            CliError::Usage("choose a base with --beta-expansion, --beta or --family/--m".into())
        })
    }

    /// Index `m` of the `1 0^m 1` family the selected base belongs to.
    pub fn ten_m_one_index(&self) -> Result<usize, CliError> {
        if self.expansion.is_none() && self.beta.is_none() {
            return match (self.family, self.m) {
                (Some(Family::Ones), Some(2)) => Ok(0),
                (Some(Family::Ones), _) => Err(CliError::Core(betashift_core::Error::Domain(
                    "this operation needs the 1 0^m 1 family".into(),
                ))),
                (_, Some(m)) => Ok(m),
                (_, None) => Err(CliError::Usage("give --m (family 10m1)".into())),
            };
        }
        let spec = self.spec()?;
        let len = spec.finite_length().unwrap_or(0);
        if len >= 2 && is_ten_m_one(&spec, len - 2) {
            Ok(len - 2)
        } else {
            Err(CliError::Core(betashift_core::Error::Domain(format!(
                "expansion {} is not of the form 1 0^m 1",
                spec.expansion1()
            ))))
        }
    }
}

/// A probability as text: `a/b` for exact arithmetic, a decimal otherwise.
pub fn parse_prob(s: &str) -> Result<Prob, CliError> {
    Ok(s.parse::<Prob>()?)
}

/// `a:b:n`, `n ≥ 2` evenly spaced points including both ends.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub from: f64,
    pub to: f64,
    pub n: usize,
}

impl Grid {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || CliError::Usage(format!("grid must look like a:b:n, got {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let from = parts[0].trim().parse().map_err(|_| bad())?;
        let to = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        Ok(Grid { from, to, n })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.from];
        }
        let step = (self.to - self.from) / (self.n - 1) as f64;
        (0..self.n)
            .map(|i| if i + 1 == self.n { self.to } else { self.from + step * i as f64 })
            .collect()
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Greedy digits of x in base β.
    Expand {
        #[command(flatten)]
        beta: BetaArgs,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 20)]
        n: usize,
    },
    /// Expansion and quasi-expansion of 1, with zero-run lengths.
    Eps1 {
        #[command(flatten)]
        beta: BetaArgs,
        #[arg(long, default_value_t = 20)]
        n: usize,
    },
    /// Whether a word is admissible.
    Admissible {
        #[command(flatten)]
        beta: BetaArgs,
        #[arg(long)]
        word: String,
    },
    /// Fullness, follower state and digit counters of a word.
    Full {
        #[command(flatten)]
        beta: BetaArgs,
        #[arg(long)]
        word: String,
    },
    /// All admissible words of a length, or their counts.
    Enumerate {
        #[command(flatten)]
        beta: BetaArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        full_only: bool,
        /// Emit `n,count` for lengths 1..=n instead of the words.
        #[arg(long)]
        counts: bool,
    },
    /// The interval of points whose digits start with a word.
    Cyl {
        #[command(flatten)]
        beta: BetaArgs,
        #[arg(long)]
        word: String,
    },
    /// Walk measure of a cylinder, optionally pushed forward by the shift.
    Measure {
        #[command(flatten)]
        beta: BetaArgs,
        #[arg(long)]
        p: String,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 0)]
        shift: usize,
    },
    /// Cesàro average of the shifted walk measures of a cylinder.
    ShiftMeasure {
        #[command(flatten)]
        beta: BetaArgs,
        #[arg(long)]
        p: String,
        #[arg(long, default_value = "0")]
        target: String,
        #[arg(long, default_value_t = 10_000)]
        iterations: usize,
        /// Average over shifts 1..=K instead of 0..K.
        #[arg(long)]
        from_one: bool,
        /// Streams used when the average has to be sampled.
        #[arg(long, default_value_t = 256)]
        streams: usize,
    },
    /// Closed-form limit masses of the walk measure.
    Mp {
        #[arg(long)]
        p: String,
        #[arg(long)]
        m: usize,
        /// Use the 1^m family instead of 1 0^m 1.
        #[arg(long)]
        ones: bool,
    },
    /// Dimension of the zero-frequency level set, with entropy bounds.
    Dim {
        #[command(flatten)]
        beta: BetaArgs,
        #[arg(long, conflicts_with = "p_grid")]
        p: Option<String>,
        /// Sweep `a:b:n`.
        #[arg(long)]
        p_grid: Option<String>,
    },
    /// The stationary Markov chain of the walk measure.
    Markov {
        #[command(flatten)]
        beta: BetaArgs,
        #[arg(long)]
        p: String,
    },
    /// Gap between the entropy maximum and the chain's entropy bound on 1110^∞.
    EntropyGap {
        #[arg(long, conflicts_with = "p_grid")]
        p: Option<String>,
        #[arg(long)]
        p_grid: Option<String>,
    },
    /// Zero frequencies of stationary streams of the Markov chain.
    Simulate {
        #[command(flatten)]
        beta: BetaArgs,
        /// Walk parameter of the chain.
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = 1_000_000)]
        n: usize,
        #[arg(long, default_value_t = 16)]
        streams: usize,
    },
    /// Local-dimension ratios along one sampled stream.
    Localdim {
        #[command(flatten)]
        beta: BetaArgs,
        /// Parameter of the measure whose local dimension is estimated.
        #[arg(long)]
        p: String,
        /// Sample the stream from the Markov chain with this walk parameter
        /// (10m1 family); without it the stream follows the walk with `p`.
        #[arg(long)]
        q: Option<String>,
        /// Comma-separated depths.
        #[arg(long, value_delimiter = ',', default_value = "10,100,1000,10000,100000,1000000")]
        depths: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        stream: u64,
    },
    /// Runs the property suites.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Restrict family-indexed checks to one m.
        #[arg(long)]
        m: Option<usize>,
        /// Restrict probability-indexed checks to one p.
        #[arg(long)]
        p: Option<String>,
        /// Points in the dimension grid.
        #[arg(long, default_value_t = 25)]
        grid: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Combinatorics,
    Measures,
    Markov,
    Dimension,
    All,
}
