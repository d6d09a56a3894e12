//! The concave family
//!
//! ```text
//! f_n(x) = −ln B(x+1, n−1) − x·C₀,     C₀ = −(1+q)·ln(1−p)
//! g_n    = pⁿ(1−p)^{nq} / (n−1)
//! ```
//!
//! whose sum Σ_k g_n·e^{f_n(k)} is the floor-free version of the waiting-time
//! probability. Derivatives are differences of polygamma functions:
//! f_n' = ψ₀(x+n) − ψ₀(x+1) − C₀, f_n'' = ψ₁(x+n) − ψ₁(x+1) < 0 and
//! f_n''' = ψ₂(x+n) − ψ₂(x+1) > 0.

use crate::error::{check_probability, Error, Result};
use crate::rate::{self, RatePoint};
use crate::specfun::{self, PositiveReal};

/// Window exponent β in r_n = x_n^β.
pub const DEFAULT_BETA: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveParams {
    p: f64,
    q: f64,
    n: u64,
    c0: f64,
}

impl ObjectiveParams {
    pub fn new(p: f64, q: f64, n: u64) -> Result<Self> {
        check_probability(p)?;
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::domain(format!(
                "q must be finite and positive, got {q}"
            )));
        }
        if n < 2 {
            return Err(Error::domain(format!(
                "the objective family requires n >= 2, got {n}"
            )));
        }
        let c0 = -(1.0 + q) * (-p).ln_1p();
        Ok(ObjectiveParams { p, q, n, c0 })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    /// C_p(q) for these parameters.
    pub fn big_c(&self) -> f64 {
        // p and q were validated on construction
        rate::big_c(RatePoint::new(self.p, self.q).expect("validated")).expect("q > 0")
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximizerResult {
    pub x_star: f64,
    pub f_at_max: f64,
    pub f2_at_max: f64,
    pub sigma: f64,
    pub iterations: u32,
    pub boundary_max: bool,
}

fn check_x(x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "objective argument must be finite and >= 0, got {x}"
        )))
    }
}

fn pos(x: f64) -> PositiveReal {
    PositiveReal::new(x).expect("argument shifted into the positive axis")
}

/// f_n(x).
pub fn f(params: &ObjectiveParams, x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(f_raw(params, x))
}

pub(crate) fn f_raw(params: &ObjectiveParams, x: f64) -> f64 {
    -specfun::log_beta(pos(x + 1.0), pos(params.nf() - 1.0)) - x * params.c0
}

/// f_n'(x).
pub fn f_prime(params: &ObjectiveParams, x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(f_prime_raw(params, x))
}

pub(crate) fn f_prime_raw(params: &ObjectiveParams, x: f64) -> f64 {
    specfun::digamma(pos(x + params.nf())) - specfun::digamma(pos(x + 1.0)) - params.c0
}

/// f_n''(x), always negative.
pub fn f_second(params: &ObjectiveParams, x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(f_second_raw(params, x))
}

pub(crate) fn f_second_raw(params: &ObjectiveParams, x: f64) -> f64 {
    specfun::trigamma(pos(x + params.nf())) - specfun::trigamma(pos(x + 1.0))
}

/// sup |f_n'''| over `[lo, hi]`.
///
/// f_n'''(x) = Σ_{y=1}^{n−1} 2/(x+y)³ is positive and decreasing, so the
/// supremum sits at the left endpoint.
pub fn f_third_sup(params: &ObjectiveParams, lo: f64, hi: f64) -> Result<f64> {
    if !(lo.is_finite() && lo >= 0.0 && hi > lo) {
        return Err(Error::domain(format!("invalid interval [{lo}, {hi}]")));
    }
    Ok(f_third_raw(params, lo))
}

pub(crate) fn f_third_raw(params: &ObjectiveParams, x: f64) -> f64 {
    (specfun::tetragamma(pos(x + params.nf())) - specfun::tetragamma(pos(x + 1.0))).abs()
}

/// ln g_n = n·ln p + n·q·ln(1−p) − ln(n−1).
pub fn log_g(params: &ObjectiveParams) -> f64 {
    let nf = params.nf();
    nf * params.p.ln() + nf * params.q * (-params.p).ln_1p() - (nf - 1.0).ln()
}

/// Locates the maximizer x_n of f_n on [0, ∞) by bisection on f_n'.
pub fn maximize(params: &ObjectiveParams) -> MaximizerResult {
    let tol = 1e-10 * (1.0 + params.c0);
    let finish = |x: f64, iterations: u32, boundary_max: bool| {
        let f2 = f_second_raw(params, x);
        MaximizerResult {
            x_star: x,
            f_at_max: f_raw(params, x),
            f2_at_max: f2,
            sigma: (-f2).sqrt().recip(),
            iterations,
            boundary_max,
        }
    };

    if f_prime_raw(params, 0.0) <= 0.0 {
        return finish(0.0, 0, true);
    }

    // Root of ln(1 + (n−2)/(x−1)) = C₀ as the starting guess.
    let guess = params.big_c() * (params.nf() - 2.0) - 1.0;
    let mut hi = guess.max(1.0);
    let mut iterations = 0;
    while f_prime_raw(params, hi) > 0.0 {
        hi *= 2.0;
        iterations += 1;
    }
    let mut lo = hi;
    while lo > 0.0 && f_prime_raw(params, lo) <= 0.0 {
        lo = if lo < 1e-300 { 0.0 } else { lo * 0.5 };
        iterations += 1;
    }

    // f' > 0 at lo, f' <= 0 at hi
    loop {
        let mid = 0.5 * (lo + hi);
        let d = f_prime_raw(params, mid);
        iterations += 1;
        if d.abs() <= tol || mid <= lo || mid >= hi {
            return finish(mid, iterations, false);
        }
        if d > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}
