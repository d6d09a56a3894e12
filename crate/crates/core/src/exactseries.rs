//! Exact waiting-time probabilities as certified log-space series.
//!
//! Conditioning on Z_n = k + n,
//!
//! ```text
//! P(z_{n+1}/Z_n > q) = Σ_{k≥0} C(k+n−1, n−1) · pⁿ · (1−p)^{k + ⌊(k+n)q⌋}
//! ```
//!
//! since P(z > m) = (1−p)^{⌊m⌋} for the strict event. Replacing the floor by
//! its argument gives the smooth series Σ_k g_n e^{f_n(k)}, which sits between
//! (1−p)·P and P and coincides with P when q is an integer.
//!
//! Terms are generated by the recurrence
//! ln C(k+n, n−1) = ln C(k+n−1, n−1) + ln(1 + (n−1)/(k+1)) and accumulated by a
//! running-max log-sum-exp. Past the mode the term ratios of the smooth
//! series are bounded by the decreasing majorant
//! ρ_k = ((k+n)/(k+1))·(1−p)^{1+q}, which yields the geometric tail bound
//! t_K·ρ_K/(1 − ρ_K), inflated by (1−p)^{−1} when the floor is present.

use rayon::prelude::*;

use crate::error::{check_probability, Error, Result};
use crate::numeric::{floor_snapped, CompensatedSum, LogSumExp};

/// Hard cap on the number of series terms.
pub const MAX_TERMS: u64 = 100_000_000;

/// Largest n accepted by [`convergence_table`].
pub const MAX_TABLE_N: u64 = 2000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    /// Natural log of the summed probability.
    pub log_prob: f64,
    pub terms_used: u64,
    /// Log of the proven bound on the neglected tail.
    pub log_tail_bound: f64,
    /// Whether the tail bound is within `rel_tol` of the sum.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: u64,
    pub log_prob: f64,
    /// −log_prob / n, which tends to the rate I_p(q).
    pub a_n: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Exponent {
    Floor,
    Smooth,
}

fn validate(p: f64, q: f64, n: u64) -> Result<()> {
    check_probability(p)?;
    if !(q.is_finite() && q > 0.0) {
        return Err(Error::domain(format!(
            "q must be finite and positive, got {q} (for q <= 0 the event is certain)"
        )));
    }
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    Ok(())
}

fn validate_tol(rel_tol: f64) -> Result<()> {
    if (1e-14..1.0).contains(&rel_tol) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "rel_tol must lie in [1e-14, 1), got {rel_tol}"
        )))
    }
}

/// Lazily generated log-terms of either series.
struct Terms {
    n: f64,
    q: f64,
    exponent: Exponent,
    log_p_n: f64,
    log_1mp: f64,
    /// ln (1−p)^{1+q}
    log_decay: f64,
    k: u64,
    log_binom: CompensatedSum,
}

impl Terms {
    fn new(p: f64, q: f64, n: u64, exponent: Exponent) -> Self {
        let log_1mp = (-p).ln_1p();
        Terms {
            n: n as f64,
            q,
            exponent,
            log_p_n: n as f64 * p.ln(),
            log_1mp,
            log_decay: (1.0 + q) * log_1mp,
            k: 0,
            log_binom: CompensatedSum::new(0.0),
        }
    }

    /// Log of the current term, index `self.k`.
    fn log_term(&self) -> f64 {
        let k = self.k as f64;
        let threshold = (k + self.n) * self.q;
        let power = match self.exponent {
            Exponent::Floor => k + floor_snapped(threshold),
            Exponent::Smooth => k + threshold,
        };
        self.log_binom.value() + self.log_p_n + power * self.log_1mp
    }

    /// ln ρ_k for the current index.
    fn log_ratio_majorant(&self) -> f64 {
        let k = self.k as f64;
        ((self.n - 1.0) / (k + 1.0)).ln_1p() + self.log_decay
    }

    fn advance(&mut self) {
        let k = self.k as f64;
        self.log_binom.add(((self.n - 1.0) / (k + 1.0)).ln_1p());
        self.k += 1;
    }
}

fn sum_series(p: f64, q: f64, n: u64, rel_tol: f64, exponent: Exponent) -> SeriesResult {
    let mut terms = Terms::new(p, q, n, exponent);
    let log_safety = match exponent {
        Exponent::Floor => -(-p).ln_1p(),
        Exponent::Smooth => 0.0,
    };
    let log_tol = rel_tol.ln();
    let mut acc = LogSumExp::new();
    loop {
        let log_t = terms.log_term();
        acc.add(log_t);
        let log_rho = terms.log_ratio_majorant();
        let used = terms.k + 1;
        if log_rho < 0.0 {
            // t_K ρ/(1−ρ) (1−p)^{-1}
            let log_tail = log_t + log_rho - (-log_rho.exp()).ln_1p() + log_safety;
            let total = acc.value();
            if log_tail <= log_tol + total {
                return SeriesResult {
                    log_prob: total,
                    terms_used: used,
                    log_tail_bound: log_tail,
                    converged: true,
                };
            }
            if used >= MAX_TERMS {
                return SeriesResult {
                    log_prob: total,
                    terms_used: used,
                    log_tail_bound: log_tail,
                    converged: false,
                };
            }
        } else if used >= MAX_TERMS {
            return SeriesResult {
                log_prob: acc.value(),
                terms_used: used,
                log_tail_bound: f64::INFINITY,
                converged: false,
            };
        }
        terms.advance();
    }
}

fn partial_sum(p: f64, q: f64, n: u64, count: u64, exponent: Exponent) -> f64 {
    let mut terms = Terms::new(p, q, n, exponent);
    let mut acc = LogSumExp::new();
    for _ in 0..count {
        acc.add(terms.log_term());
        terms.advance();
    }
    acc.value()
}

/// ln P(z_{n+1}/Z_n > q), summed until the certified tail falls below
/// `rel_tol` times the partial sum.
pub fn exact_log_prob(p: f64, q: f64, n: u64, rel_tol: f64) -> Result<SeriesResult> {
    validate(p, q, n)?;
    validate_tol(rel_tol)?;
    Ok(sum_series(p, q, n, rel_tol, Exponent::Floor))
}

/// Log of the first `count` terms of the exact series.
pub fn exact_log_prob_partial(p: f64, q: f64, n: u64, count: u64) -> Result<f64> {
    validate(p, q, n)?;
    Ok(partial_sum(p, q, n, count, Exponent::Floor))
}

/// ln Σ_{k≥0} g_n e^{f_n(k)}, the floor-free companion of [`exact_log_prob`].
///
/// g_n e^{f_n(k)} = C(k+n−1, n−1)·pⁿ·(1−p)^{k+(k+n)q}, so the terms share the
/// exact series' binomial recurrence.
pub fn smooth_log_prob(p: f64, q: f64, n: u64, rel_tol: f64) -> Result<SeriesResult> {
    validate(p, q, n)?;
    if n < 2 {
        return Err(Error::domain(format!(
            "the smooth series requires n >= 2, got {n}"
        )));
    }
    validate_tol(rel_tol)?;
    Ok(sum_series(p, q, n, rel_tol, Exponent::Smooth))
}

/// Log of the first `count` terms of the smooth series.
pub fn smooth_log_prob_partial(p: f64, q: f64, n: u64, count: u64) -> Result<f64> {
    validate(p, q, n)?;
    if n < 2 {
        return Err(Error::domain(format!(
            "the smooth series requires n >= 2, got {n}"
        )));
    }
    Ok(partial_sum(p, q, n, count, Exponent::Smooth))
}

/// Rows (n, ln Pₙ, −ln Pₙ / n) for n = 1..=n_max.
pub fn convergence_table(p: f64, q: f64, n_max: u64, rel_tol: f64) -> Result<Vec<ConvergenceRow>> {
    validate(p, q, 1)?;
    validate_tol(rel_tol)?;
    if n_max == 0 || n_max > MAX_TABLE_N {
        return Err(Error::domain(format!(
            "n_max must lie in 1..={MAX_TABLE_N}, got {n_max}"
        )));
    }
    (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let res = sum_series(p, q, n, rel_tol, Exponent::Floor);
            if !res.converged {
                return Err(Error::numerical(format!(
                    "series for n = {n} did not converge"
                )));
            }
            Ok(ConvergenceRow {
                n,
                log_prob: res.log_prob,
                a_n: -res.log_prob / n as f64,
            })
        })
        .collect()
}
