//! Simulation of the waiting times of a marked symbol in a Bernoulli process
//! and Monte Carlo estimation of P(z_{n+1} > q·Z_n).
//!
//! Random numbers come from ChaCha8 (`rand_chacha`). Substream `i` of a run
//! with seed `s` is `ChaCha8Rng::seed_from_u64(s)` with its stream word set
//! to `i`, so substreams are independent, non-overlapping and reproducible
//! regardless of how they are scheduled on threads. This generator choice is
//! part of the reproducibility contract of a release.

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{check_probability, Error, Result};
use crate::numeric::floor_snapped;

/// Two-sided 95% standard normal quantile.
const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq)]
pub enum Mode {
    /// Waiting times drawn directly as geometric variates.
    Geometric,
    /// Symbols drawn one at a time until the marked one appears.
    Alphabet { probs: Vec<f64>, marked: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessParams {
    p: f64,
    mode: Mode,
}

impl ProcessParams {
    pub fn geometric(p: f64) -> Result<Self> {
        check_probability(p)?;
        Ok(ProcessParams {
            p,
            mode: Mode::Geometric,
        })
    }

    /// A full alphabet with probability vector `probs`; `marked` indexes the
    /// symbol whose occurrences are counted.
    pub fn alphabet(probs: Vec<f64>, marked: usize) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::domain("an alphabet needs at least two symbols"));
        }
        if marked >= probs.len() {
            return Err(Error::domain(format!(
                "marked index {marked} out of range for {} symbols",
                probs.len()
            )));
        }
        if probs.iter().any(|&x| !(x.is_finite() && x > 0.0)) {
            return Err(Error::domain("alphabet probabilities must be positive"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!(
                "alphabet probabilities must sum to 1, got {total}"
            )));
        }
        let p = probs[marked];
        check_probability(p)?;
        Ok(ProcessParams {
            p,
            mode: Mode::Alphabet { probs, marked },
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn mode(&self) -> &Mode {
        &self.mode
    }

    fn sampler(&self) -> WaitSampler {
        match &self.mode {
            Mode::Geometric => WaitSampler::Geometric {
                log_1mp: (-self.p).ln_1p(),
            },
            Mode::Alphabet { probs, marked } => {
                let mut cumulative = Vec::with_capacity(probs.len());
                let mut acc = 0.0;
                for x in probs {
                    acc += x;
                    cumulative.push(acc);
                }
                WaitSampler::Alphabet {
                    cumulative,
                    marked: *marked,
                }
            }
        }
    }
}

enum WaitSampler {
    Geometric { log_1mp: f64 },
    Alphabet { cumulative: Vec<f64>, marked: usize },
}

impl WaitSampler {
    fn draw<R: Rng>(&self, rng: &mut R) -> u64 {
        match self {
            WaitSampler::Geometric { log_1mp } => {
                let u: f64 = rng.sample(Open01);
                // P(z > m) = (1−p)^m  ⇒  z = ⌈ln U / ln(1−p)⌉
                let z = (u.ln() / log_1mp).ceil();
                if z < 1.0 {
                    1
                } else if z >= u64::MAX as f64 {
                    u64::MAX
                } else {
                    z as u64
                }
            }
            WaitSampler::Alphabet { cumulative, marked } => {
                let mut count = 0u64;
                loop {
                    count += 1;
                    let u: f64 = rng.gen();
                    let symbol = cumulative
                        .iter()
                        .position(|&c| u < c)
                        .unwrap_or(cumulative.len() - 1);
                    if symbol == *marked {
                        return count;
                    }
                }
            }
        }
    }
}

/// Waiting times z₁..z_{n+1} and their prefix sums Z₁..Z_{n+1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub waits: Vec<u64>,
    pub totals: Vec<u64>,
}

/// A Monte Carlo estimate of P(z_{n+1}/Z_n > q) with a 95% Wilson interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub samples: u64,
    pub hits: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
    pub streams: u32,
}

impl MCEstimate {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }

    pub fn contains(&self, value: f64) -> bool {
        self.ci_low <= value && value <= self.ci_high
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Simulates one trajectory of n + 1 waiting times.
pub fn simulate(params: &ProcessParams, n: usize, seed: u64) -> Result<Trajectory> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let sampler = params.sampler();
    let mut rng = stream_rng(seed, 0);
    let mut waits = Vec::with_capacity(n + 1);
    let mut totals = Vec::with_capacity(n + 1);
    let mut total = 0u64;
    for _ in 0..=n {
        let z = sampler.draw(&mut rng);
        total = total.saturating_add(z);
        waits.push(z);
        totals.push(total);
    }
    Ok(Trajectory { waits, totals })
}

/// Whether z_next > q·total, with the threshold snapped to an integer when
/// q·total lands within rounding distance of one.
fn exceeds(z_next: u64, total: u64, q: f64) -> bool {
    (z_next as f64) > floor_snapped(q * total as f64)
}

fn run_stream(sampler: &WaitSampler, q: f64, n: u64, samples: u64, seed: u64, stream: u64) -> u64 {
    let mut rng = stream_rng(seed, stream);
    let mut hits = 0u64;
    for _ in 0..samples {
        let mut total = 0u64;
        for _ in 0..n {
            total = total.saturating_add(sampler.draw(&mut rng));
        }
        let z_next = sampler.draw(&mut rng);
        if exceeds(z_next, total, q) {
            hits += 1;
        }
    }
    hits
}

/// 95% Wilson score interval for `hits` successes out of `samples`.
pub fn wilson_interval(hits: u64, samples: u64) -> (f64, f64) {
    let n = samples as f64;
    let h = hits as f64;
    let z2 = Z_95 * Z_95;
    let denom = n + z2;
    let center = (h + 0.5 * z2) / denom;
    let half = Z_95 / denom * (h * (n - h) / n + 0.25 * z2).sqrt();
    let phat = h / n;
    // the score interval contains p̂ analytically; clamp rounding
    (
        (center - half).max(0.0).min(phat),
        (center + half).min(1.0).max(phat),
    )
}

/// Estimates P(z_{n+1}/Z_n > q) from `samples` trajectories split over
/// `streams` substreams, using the global rayon pool.
pub fn estimate(
    params: &ProcessParams,
    q: f64,
    n: u64,
    samples: u64,
    seed: u64,
    streams: u32,
) -> Result<MCEstimate> {
    validate_estimate(q, n, samples, streams)?;
    Ok(estimate_inner(params, q, n, samples, seed, streams))
}

/// Like [`estimate`] but on a dedicated pool of `threads` workers.
pub fn estimate_with_threads(
    params: &ProcessParams,
    q: f64,
    n: u64,
    samples: u64,
    seed: u64,
    streams: u32,
    threads: usize,
) -> Result<MCEstimate> {
    validate_estimate(q, n, samples, streams)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::numerical(format!("failed to start worker pool: {e}")))?;
    Ok(pool.install(|| estimate_inner(params, q, n, samples, seed, streams)))
}

fn validate_estimate(q: f64, n: u64, samples: u64, streams: u32) -> Result<()> {
    if !(q.is_finite() && q > 0.0) {
        return Err(Error::domain(format!(
            "q must be finite and positive, got {q}"
        )));
    }
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    if samples == 0 {
        return Err(Error::domain("samples must be at least 1"));
    }
    if streams == 0 {
        return Err(Error::domain("streams must be at least 1"));
    }
    Ok(())
}

fn estimate_inner(
    params: &ProcessParams,
    q: f64,
    n: u64,
    samples: u64,
    seed: u64,
    streams: u32,
) -> MCEstimate {
    let sampler = params.sampler();
    let k = streams as u64;
    let base = samples / k;
    let extra = samples % k;
    let hits: u64 = (0..k)
        .into_par_iter()
        .map(|i| {
            let count = base + u64::from(i < extra);
            run_stream(&sampler, q, n, count, seed, i)
        })
        .sum();
    let (ci_low, ci_high) = wilson_interval(hits, samples);
    MCEstimate {
        samples,
        hits,
        estimate: hits as f64 / samples as f64,
        ci_low,
        ci_high,
        seed,
        streams,
    }
}
