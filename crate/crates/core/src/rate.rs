//! Closed-form rate function of the ratio z_{n+1}/Z_n and its companions.
//!
//! With λ = −ln(1−p) and C = ((1−p)^{−(1+q)} − 1)^{−1}, the probability that
//! the (n+1)-th waiting time exceeds q times the total waiting time decays
//! like e^{−n·I_p(q)} where
//!
//! ```text
//! I_p(q) = −(C+1)·ln(C+1) + C·ln C − ln p − ((1+q)·C + q)·ln(1−p)
//! ```
//!
//! for q > 0 and I_p(q) = +∞ otherwise. I_p is strictly increasing and
//! strictly concave on (0, ∞) and approaches the line q·λ − ln p.

use crate::error::{check_probability, Error, Result};

/// A point (p, q) at which the rate function is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    p: f64,
    q: f64,
}

impl RatePoint {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        check_probability(p)?;
        if !q.is_finite() {
            return Err(Error::domain(format!("q must be finite, got {q}")));
        }
        Ok(RatePoint { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// λ = −ln(1−p) > 0.
    fn lambda(&self) -> f64 {
        -(-self.p).ln_1p()
    }

    fn require_positive_q(&self, what: &str) -> Result<()> {
        if self.q > 0.0 {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "{what} is defined only for q > 0, got q = {}",
                self.q
            )))
        }
    }
}

/// Everything the closed form offers at one point.
///
/// The analytic fields are `None` when q ≤ 0, where only `rate = +∞` and the
/// asymptote are defined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEval {
    pub q: f64,
    pub big_c: Option<f64>,
    pub rate: f64,
    pub rate_prime: Option<f64>,
    pub rate_second: Option<f64>,
    pub asymptote: f64,
    /// −I_p(q): logarithm of the per-step decay factor.
    pub log_decay: Option<f64>,
}

/// C_p(q) = ((1−p)^{−q−1} − 1)^{−1}.
pub fn big_c(pt: RatePoint) -> Result<f64> {
    pt.require_positive_q("C_p(q)")?;
    Ok(c_unchecked(pt))
}

fn c_unchecked(pt: RatePoint) -> f64 {
    1.0 / ((pt.q + 1.0) * pt.lambda()).exp_m1()
}

/// x·ln x with the continuous extension 0·ln 0 = 0.
fn x_ln_x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// I_p(q), or +∞ for q ≤ 0.
pub fn rate_i(pt: RatePoint) -> f64 {
    if pt.q <= 0.0 {
        return f64::INFINITY;
    }
    let c = c_unchecked(pt);
    let lambda = pt.lambda();
    // (C+1)·ln(C+1) via ln_1p keeps accuracy when C is tiny
    -(c + 1.0) * c.ln_1p() + x_ln_x(c) - pt.p.ln() + ((1.0 + pt.q) * c + pt.q) * lambda
}

/// I_p'(q) = (C + 1)·λ.
pub fn rate_i_prime(pt: RatePoint) -> Result<f64> {
    pt.require_positive_q("I_p'(q)")?;
    Ok((c_unchecked(pt) + 1.0) * pt.lambda())
}

/// I_p''(q) = −(1−p)^{−(1+q)}·(λ·C)², evaluated as −C(C+1)λ² to avoid
/// overflow of the power for large q.
pub fn rate_i_second(pt: RatePoint) -> Result<f64> {
    pt.require_positive_q("I_p''(q)")?;
    let c = c_unchecked(pt);
    let lambda = pt.lambda();
    Ok(-c * (c + 1.0) * lambda * lambda)
}

/// The line q·λ − ln p approached by I_p as q → ∞.
pub fn asymptote(pt: RatePoint) -> f64 {
    pt.q * pt.lambda() - pt.p.ln()
}

pub fn evaluate(pt: RatePoint) -> RateEval {
    let rate = rate_i(pt);
    let asymptote = asymptote(pt);
    if pt.q <= 0.0 {
        return RateEval {
            q: pt.q,
            big_c: None,
            rate,
            rate_prime: None,
            rate_second: None,
            asymptote,
            log_decay: None,
        };
    }
    RateEval {
        q: pt.q,
        big_c: big_c(pt).ok(),
        rate,
        rate_prime: rate_i_prime(pt).ok(),
        rate_second: rate_i_second(pt).ok(),
        asymptote,
        log_decay: Some(-rate),
    }
}
