//! Seeded digit streams under the walk or a stationary Markov chain.
//!
//! Each stream is a ChaCha8 keystream keyed by the seed and positioned on its
//! own stream id, so `(seed, stream_id)` fixes the output and distinct ids
//! never share random words.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::markov::MarkovMeasure;
use crate::scalar::Scalar;
use crate::shift::{BetaShift, Step};

/// Transition table of a Markov measure, flattened for sampling.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovSampler {
    order: usize,
    states: Vec<Vec<u8>>,
    /// Cumulative stationary weights.
    pi_cdf: Vec<f64>,
    /// For each state, `(P(next digit = 0), state after 0, state after 1)`.
    next: Vec<(f64, Option<usize>, Option<usize>)>,
}

impl MarkovSampler {
    pub fn new<S: Scalar>(mm: &MarkovMeasure<S>) -> Self {
        let states = mm.states().to_vec();
        let mut acc = 0.0;
        let pi_cdf = mm
            .pi()
            .iter()
            .map(|v| {
                acc += v.to_f64();
                acc
            })
            .collect();
        let next = (0..states.len())
            .map(|i| {
                let after = |d: u8| mm.successor(i, d);
                let s0 = after(0);
                let s1 = after(1);
                let p0 = match (s0, s1) {
                    (Some(j), _) => mm.trans()[i][j].to_f64(),
                    (None, _) => 0.0,
                };
                (p0, s0, s1)
            })
            .collect();
        MarkovSampler {
            order: mm.order(),
            states,
            pi_cdf,
            next,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }
}

/// The law a stream samples from.
#[derive(Clone, Debug)]
pub enum Law<'a> {
    /// The walk: a 0 with probability `p` when a 1 is admissible, a forced 0 otherwise.
    Walk { shift: &'a BetaShift, p: f64 },
    /// A stationary Markov chain on words of its order.
    Markov(MarkovSampler),
}

impl<'a> Law<'a> {
    pub fn markov<S: Scalar>(mm: &MarkovMeasure<S>) -> Self {
        Law::Markov(MarkovSampler::new(mm))
    }
}

#[derive(Clone, Debug)]
enum Cursor {
    Walk(usize),
    /// Current state and the digits of the initial state still to emit.
    Markov { state: usize, pending: usize },
    Fresh,
}

/// A reproducible digit stream.
#[derive(Clone, Debug)]
pub struct SimStream<'a> {
    seed: u64,
    stream_id: u64,
    law: Law<'a>,
    rng: ChaCha8Rng,
    cursor: Cursor,
}

impl<'a> SimStream<'a> {
    pub fn new(seed: u64, stream_id: u64, law: Law<'a>) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        SimStream {
            seed,
            stream_id,
            law,
            rng,
            cursor: Cursor::Fresh,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform draw on `[0,1)` with 53 random bits.
    fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_digit(&mut self) -> Result<u8> {
        match &self.law {
            Law::Walk { shift, p } => {
                let (shift, p) = (*shift, *p);
                let t = match self.cursor {
                    Cursor::Walk(t) => t,
                    _ => 0,
                };
                let d = if shift.one_allowed(t)? {
                    u8::from(self.uniform() >= p)
                } else {
                    0
                };
                match shift.step(t, d)? {
                    Step::Next(s) => self.cursor = Cursor::Walk(s),
                    Step::Reject => {
                        return Err(Error::Consistency(alloc::string::String::from(
                            "walk produced an inadmissible digit",
                        )))
                    }
                }
                Ok(d)
            }
            Law::Markov(_) => self.next_markov(),
        }
    }

    fn next_markov(&mut self) -> Result<u8> {
        if let Cursor::Fresh = self.cursor {
            let u = self.uniform();
            let Law::Markov(m) = &self.law else {
                unreachable!()
            };
            let total = *m.pi_cdf.last().unwrap_or(&0.0);
            let i = m
                .pi_cdf
                .iter()
                .position(|&c| u * total < c)
                .unwrap_or(m.states.len() - 1);
            self.cursor = Cursor::Markov {
                state: i,
                pending: m.order,
            };
        }
        let u = self.uniform();
        let Law::Markov(m) = &self.law else {
            unreachable!()
        };
        let Cursor::Markov { state, pending } = self.cursor else {
            unreachable!()
        };
        if pending > 0 {
            let d = m.states[state][m.order - pending];
            self.cursor = Cursor::Markov {
                state,
                pending: pending - 1,
            };
            return Ok(d);
        }
        let (p0, s0, s1) = m.next[state];
        let (d, s) = match (s0, s1) {
            (Some(a), Some(b)) => {
                if u < p0 {
                    (0, a)
                } else {
                    (1, b)
                }
            }
            (Some(a), None) => (0, a),
            (None, Some(b)) => (1, b),
            (None, None) => {
                return Err(Error::Consistency(alloc::string::String::from(
                    "Markov state without successors",
                )))
            }
        };
        self.cursor = Cursor::Markov {
            state: s,
            pending: 0,
        };
        Ok(d)
    }

    pub fn sample(&mut self, n: usize) -> Result<Vec<u8>> {
        (0..n).map(|_| self.next_digit()).collect()
    }
}
