//! Laplace's method for ∫ e^{F} over an interval when F is concave with a
//! sharp maximum, together with the diagnostics that control its error and
//! an independent quadrature for validation.
//!
//! For the maximizer x* and σ = (−F''(x*))^{−1/2} the two-sided value is
//! e^{F(x*)}·√(2π)·σ. When x* sits on (or within 0.01σ of) a domain boundary
//! only half of the Gaussian mass is available and the value is
//! e^{F(x*)}·√(π/2)·σ.
//!
//! The diagnostics follow the Taylor-window argument: with window radius
//! r = max(|x*|, 1)^β, η = sup |F'''| over the window and δ = σ²·r·η, the
//! cubic Taylor term is at most δ/3 times the quadratic one inside the
//! window, while outside it concavity keeps F below the chords through
//! (x*, F(x*)), which bounds the outer mass by
//! (2σ/r)/(½ + δ/3)·exp(−(r/σ)²(½ + δ/3)).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exactseries;
use crate::numeric::{log_abs_diff, LogSumExp};
use crate::objective::{self, ObjectiveParams};

type Eval<'a> = Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>;
type SupEval<'a> = Box<dyn Fn(f64, f64) -> f64 + Send + Sync + 'a>;

/// Maximum number of σ-wide panels per side in [`integrate_direct`].
pub const MAX_PANELS: usize = 10_000;

/// Relative distance (in units of σ) under which a boundary counts as
/// coinciding with the maximizer.
pub const BOUNDARY_SIGMA_FRACTION: f64 = 0.01;

/// A possibly unbounded interval [lo, hi].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY
        {
            return Err(Error::domain(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn real_line() -> Self {
        Interval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    /// [a, ∞)
    pub fn from(a: f64) -> Result<Self> {
        Interval::new(a, f64::INFINITY)
    }

    /// (−∞, b]
    pub fn up_to(b: f64) -> Result<Self> {
        Interval::new(f64::NEG_INFINITY, b)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }
}

/// A concave objective F with evaluators for F, F', F'' and a bound on
/// |F'''| over subintervals.
pub struct LaplaceProblem<'a> {
    f: Eval<'a>,
    f1: Eval<'a>,
    f2: Eval<'a>,
    f3_sup: SupEval<'a>,
    domain: Interval,
    bracket_hint: Option<f64>,
}

impl<'a> LaplaceProblem<'a> {
    pub fn new(
        f: impl Fn(f64) -> f64 + Send + Sync + 'a,
        f1: impl Fn(f64) -> f64 + Send + Sync + 'a,
        f2: impl Fn(f64) -> f64 + Send + Sync + 'a,
        f3_sup: impl Fn(f64, f64) -> f64 + Send + Sync + 'a,
        domain: Interval,
    ) -> Self {
        LaplaceProblem {
            f: Box::new(f),
            f1: Box::new(f1),
            f2: Box::new(f2),
            f3_sup: Box::new(f3_sup),
            domain,
            bracket_hint: None,
        }
    }

    /// Starting point for the maximizer search.
    pub fn with_hint(mut self, hint: f64) -> Self {
        self.bracket_hint = Some(hint);
        self
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.f)(x)
    }
}

impl std::fmt::Debug for LaplaceProblem<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LaplaceProblem")
            .field("domain", &self.domain)
            .field("bracket_hint", &self.bracket_hint)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    TwoSided,
    /// Domain [a, ∞) with x* ≈ a.
    LeftBounded,
    /// Domain (−∞, b] with x* ≈ b.
    RightBounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaplaceResult {
    pub x_star: f64,
    pub f_at_max: f64,
    pub sigma: f64,
    /// Log of the asymptotic value of ∫ e^{F}.
    pub log_value: f64,
    pub r: f64,
    pub eta: f64,
    pub delta: f64,
    pub ratio_r_sigma: f64,
    pub side: Side,
    /// Set when the nominal window did not fit in the domain and was shrunk.
    pub warning: Option<String>,
}

impl LaplaceResult {
    /// Bound on the mass outside the window relative to e^{F(x*)}·σ, from
    /// the chord construction.
    pub fn outer_mass_bound(&self) -> f64 {
        let slope = 0.5 + self.delta / 3.0;
        let ratio = self.ratio_r_sigma;
        if ratio == 0.0 {
            return f64::INFINITY;
        }
        2.0 / (ratio * slope) * (-ratio * ratio * slope).exp()
    }
}

/// Location of the maximum of F over the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Peak {
    Interior(f64),
    /// Maximum at a finite endpoint where F' points out of the domain.
    Boundary {
        x: f64,
        slope: f64,
        side: Side,
    },
}

const MAX_SEARCH_STEPS: usize = 2_000;

fn find_peak(problem: &LaplaceProblem<'_>) -> Result<Peak> {
    let Interval { lo, hi } = problem.domain;
    let f1 = &problem.f1;
    if lo.is_finite() {
        let d = f1(lo);
        if d.is_finite() && d <= 0.0 {
            return Ok(Peak::Boundary {
                x: lo,
                slope: d,
                side: Side::LeftBounded,
            });
        }
    }
    if hi.is_finite() {
        let d = f1(hi);
        if d.is_finite() && d >= 0.0 {
            return Ok(Peak::Boundary {
                x: hi,
                slope: d,
                side: Side::RightBounded,
            });
        }
    }

    let default_start = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (true, false) => lo + lo.abs().max(1.0),
        (false, true) => hi - hi.abs().max(1.0),
        (false, false) => 0.0,
    };
    let start = problem
        .bracket_hint
        .filter(|h| h.is_finite() && *h > lo && *h < hi)
        .unwrap_or(default_start);
    let d0 = f1(start);
    if d0.is_nan() {
        return Err(Error::numerical(format!("F'({start}) is NaN")));
    }
    if d0 == 0.0 {
        return Ok(Peak::Interior(start));
    }

    // Walk away from `start` in the uphill direction until F' changes sign.
    let uphill = d0 > 0.0;
    let limit = if uphill { hi } else { lo };
    let mut step = start.abs().max(1.0);
    let mut near = start;
    let mut far = start;
    let mut found = false;
    for k in 1..=MAX_SEARCH_STEPS {
        let candidate = if limit.is_finite() {
            limit - (limit - start) * 0.5f64.powi(k as i32)
        } else if uphill {
            start + step
        } else {
            start - step
        };
        if candidate == far {
            break;
        }
        step *= 2.0;
        let d = f1(candidate);
        if d.is_nan() {
            return Err(Error::numerical(format!("F'({candidate}) is NaN")));
        }
        if (d > 0.0) == uphill && d != 0.0 {
            near = candidate;
            far = candidate;
            continue;
        }
        far = candidate;
        found = true;
        break;
    }
    if !found {
        return Err(Error::NoInteriorMaximum(format!(
            "F' keeps its sign from x = {start} towards the {} end of the domain",
            if uphill { "upper" } else { "lower" }
        )));
    }

    let (mut a, mut b) = if uphill { (near, far) } else { (far, near) };
    // F'(a) > 0 >= F'(b)
    for _ in 0..400 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let d = f1(mid);
        if d == 0.0 {
            return Ok(Peak::Interior(mid));
        }
        if d > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(Peak::Interior(0.5 * (a + b)))
}

fn curvature_sigma(problem: &LaplaceProblem<'_>, x: f64) -> Result<f64> {
    let f2 = (problem.f2)(x);
    if !(f2.is_finite() && f2 < 0.0) {
        return Err(Error::NotConcave { x, f2 });
    }
    Ok((-f2).sqrt().recip())
}

/// Laplace approximation of ln ∫_domain e^{F} with window exponent β.
pub fn approx(problem: &LaplaceProblem<'_>, beta: f64) -> Result<LaplaceResult> {
    if !(beta > 0.5 && beta < 1.0) {
        return Err(Error::domain(format!(
            "beta must lie in (1/2, 1), got {beta}"
        )));
    }
    let Interval { lo, hi } = problem.domain;
    let (x_star, sigma, side) = match find_peak(problem)? {
        Peak::Boundary { x, slope, side } => {
            let sigma = curvature_sigma(problem, x)?;
            // distance to the unconstrained maximizer, one Newton step away
            let offset = slope.abs() * sigma * sigma;
            if offset > BOUNDARY_SIGMA_FRACTION * sigma {
                return Err(Error::NoInteriorMaximum(format!(
                    "maximum lies beyond the boundary x = {x} (F' = {slope}, about {:.3} sigma outside)",
                    offset / sigma
                )));
            }
            (x, sigma, side)
        }
        Peak::Interior(x) => {
            let sigma = curvature_sigma(problem, x)?;
            let side = if x - lo <= BOUNDARY_SIGMA_FRACTION * sigma {
                Side::LeftBounded
            } else if hi - x <= BOUNDARY_SIGMA_FRACTION * sigma {
                Side::RightBounded
            } else {
                Side::TwoSided
            };
            (x, sigma, side)
        }
    };

    let nominal = x_star.abs().max(1.0).powf(beta);
    let mut warning = None;
    let (r, window) = match side {
        Side::TwoSided => {
            let room = (x_star - lo).min(hi - x_star);
            let r = if nominal > room {
                warning = Some(format!(
                    "window radius {nominal} clipped to {room} to stay inside the domain"
                ));
                room
            } else {
                nominal
            };
            (r, (x_star - r, x_star + r))
        }
        Side::LeftBounded => {
            let r = nominal.min(hi - x_star);
            (r, (x_star, x_star + r))
        }
        Side::RightBounded => {
            let r = nominal.min(x_star - lo);
            (r, (x_star - r, x_star))
        }
    };
    for end in [window.0, window.1] {
        if end > lo && end < hi {
            let f2 = (problem.f2)(end);
            if f2 > 0.0 {
                return Err(Error::NotConcave { x: end, f2 });
            }
        }
    }
    let eta = (problem.f3_sup)(window.0, window.1);
    let delta = sigma * sigma * r * eta;
    let f_at_max = (problem.f)(x_star);
    let log_value = match side {
        Side::TwoSided => f_at_max + 0.5 * (2.0 * PI).ln() + sigma.ln(),
        Side::LeftBounded | Side::RightBounded => f_at_max + 0.5 * (0.5 * PI).ln() + sigma.ln(),
    };
    Ok(LaplaceResult {
        x_star,
        f_at_max,
        sigma,
        log_value,
        r,
        eta,
        delta,
        ratio_r_sigma: r / sigma,
        side,
        warning,
    })
}

// Gauss–Kronrod 7/15 nodes and weights on [−1, 1].
const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the odd-indexed Kronrod nodes.
const G_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// (Kronrod estimate, |Kronrod − Gauss|) over [a, b].
fn gauss_kronrod(g: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    for (i, (&node, &w)) in GK_NODES.iter().zip(&GK_WEIGHTS).enumerate() {
        let vals = if node == 0.0 {
            let v = g(center);
            kronrod += w * v;
            v
        } else {
            let v = g(center - half * node) + g(center + half * node);
            kronrod += w * v;
            v
        };
        if i % 2 == 1 {
            gauss += G_WEIGHTS[i / 2] * vals;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

fn adaptive(g: &dyn Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64, depth: u32) -> f64 {
    let (value, err) = gauss_kronrod(g, a, b);
    if err <= abs_tol.max(64.0 * f64::EPSILON * value.abs()) || depth == 0 {
        return value;
    }
    let mid = 0.5 * (a + b);
    adaptive(g, a, mid, 0.5 * abs_tol, depth - 1) + adaptive(g, mid, b, 0.5 * abs_tol, depth - 1)
}

/// ln ∫_domain e^{F} by adaptive Gauss–Kronrod quadrature on σ-wide panels
/// marching out from the maximizer.
///
/// Each side stops once the tangent-line bound e^{F(b)}/|F'(b)| on the
/// remaining mass falls below `rel_tol/2` of the mass collected so far.
pub fn integrate_direct(problem: &LaplaceProblem<'_>, rel_tol: f64) -> Result<f64> {
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::domain(format!(
            "rel_tol must lie in (0, 1), got {rel_tol}"
        )));
    }
    let Interval { lo, hi } = problem.domain;
    let x_star = match find_peak(problem)? {
        Peak::Interior(x) => x,
        Peak::Boundary { x, .. } => x,
    };
    let sigma = curvature_sigma(problem, x_star)?;
    let f_max = (problem.f)(x_star);
    let g = |x: f64| {
        let v = (problem.f)(x) - f_max;
        if v.is_nan() {
            0.0
        } else {
            v.exp()
        }
    };
    // panel tolerance relative to the Gaussian mass √(2π)σ of the scaled integrand
    let panel_tol = 1e-3 * rel_tol * sigma;
    let mut mass = 0.0;

    for direction in [1.0f64, -1.0] {
        let limit = if direction > 0.0 { hi } else { lo };
        let mut a = x_star;
        let mut panels = 0;
        loop {
            if a == limit {
                break;
            }
            let mut b = a + direction * sigma;
            if (direction > 0.0 && b >= limit) || (direction < 0.0 && b <= limit) {
                b = limit;
            }
            let (l, r) = if direction > 0.0 { (a, b) } else { (b, a) };
            mass += adaptive(&g, l, r, panel_tol, 12);
            panels += 1;
            if b == limit {
                break;
            }
            let slope = (problem.f1)(b) * direction;
            if slope < 0.0 {
                let tail = ((problem.f)(b) - f_max).exp() / -slope;
                if tail <= 0.5 * rel_tol * mass {
                    break;
                }
            }
            if panels >= MAX_PANELS {
                return Err(Error::numerical(format!(
                    "quadrature did not converge within {MAX_PANELS} sigma of the maximum"
                )));
            }
            a = b;
        }
    }
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::numerical(format!("quadrature produced mass {mass}")));
    }
    Ok(f_max + mass.ln())
}

/// The objective family f_n on [0, ∞) as a Laplace problem, hinted with
/// y_n = C(n−2) − 1.
pub fn objective_problem(params: ObjectiveParams) -> LaplaceProblem<'static> {
    let hint = params.big_c() * (params.n() as f64 - 2.0) - 1.0;
    LaplaceProblem::new(
        move |x| objective::f_raw(&params, x),
        move |x| objective::f_prime_raw(&params, x),
        move |x| objective::f_second_raw(&params, x),
        move |lo, _hi| objective::f_third_raw(&params, lo.max(0.0)),
        Interval {
            lo: 0.0,
            hi: f64::INFINITY,
        },
    )
    .with_hint(hint)
}

/// Laplace approximation of ln(g_n ∫₀^∞ e^{f_n}).
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveApprox {
    pub laplace: LaplaceResult,
    pub log_g: f64,
    /// ln g_n + laplace.log_value
    pub log_value: f64,
}

pub fn approx_objective(p: f64, q: f64, n: u64, beta: f64) -> Result<ObjectiveApprox> {
    let params = ObjectiveParams::new(p, q, n)?;
    let m = objective::maximize(&params);
    if m.boundary_max {
        return Err(Error::NoInteriorMaximum(format!(
            "f_n is maximal at x = 0 for p = {p}, q = {q}, n = {n}; \
             use the exact series instead of the Laplace approximation"
        )));
    }
    let laplace = approx(&objective_problem(params), beta)?;
    let log_g = objective::log_g(&params);
    Ok(ObjectiveApprox {
        log_value: log_g + laplace.log_value,
        laplace,
        log_g,
    })
}

/// Both sides of |Σ_k e^{f_n(k)} − ∫₀^∞ e^{f_n}| ≤ 2e^{f_n(x_n)}, in logs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumIntegralGap {
    pub log_sum: f64,
    pub log_integral: f64,
    pub log_gap: f64,
    pub log_bound: f64,
    pub holds: bool,
}

pub fn sum_integral_gap(p: f64, q: f64, n: u64) -> Result<SumIntegralGap> {
    let params = ObjectiveParams::new(p, q, n)?;
    let m = objective::maximize(&params);
    if m.boundary_max {
        return Err(Error::NoInteriorMaximum(format!(
            "f_n is maximal at x = 0 for p = {p}, q = {q}, n = {n}"
        )));
    }
    let log_sum = log_sum_of_objective(&params, m.x_star)?;
    let log_integral = integrate_direct(&objective_problem(params), 1e-13)?;
    let log_gap = log_abs_diff(log_sum, log_integral);
    let log_bound = 2f64.ln() + m.f_at_max;
    Ok(SumIntegralGap {
        log_sum,
        log_integral,
        log_gap,
        log_bound,
        holds: log_gap <= log_bound,
    })
}

/// ln Σ_{k≥0} e^{f_n(k)}, truncated past the maximum once the geometric
/// tail bound e^{f(k)}·e^{f'(k)}/(1 − e^{f'(k)}) drops below 1e-17 of the sum.
fn log_sum_of_objective(params: &ObjectiveParams, x_star: f64) -> Result<f64> {
    let mut acc = LogSumExp::new();
    let mut k = 0u64;
    loop {
        let x = k as f64;
        let log_t = objective::f_raw(params, x);
        acc.add(log_t);
        if x > x_star {
            let slope = objective::f_prime_raw(params, x);
            let log_tail = log_t + slope - (-slope.exp()).ln_1p();
            if log_tail <= acc.value() + 1e-17f64.ln() {
                return Ok(acc.value());
            }
        }
        k += 1;
        if k >= exactseries::MAX_TERMS {
            return Err(Error::numerical("objective sum did not converge"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{log_gamma, PositiveReal};

    fn gaussian(n: f64, center: f64, domain: Interval) -> LaplaceProblem<'static> {
        LaplaceProblem::new(
            move |x| -n * (x - center) * (x - center) / 2.0,
            move |x| -n * (x - center),
            move |_| -n,
            |_, _| 0.0,
            domain,
        )
    }

    fn gamma_problem(n: f64) -> LaplaceProblem<'static> {
        LaplaceProblem::new(
            move |x: f64| n * (x.ln() - x),
            move |x| n * (1.0 / x - 1.0),
            move |x| -n / (x * x),
            move |lo: f64, _| 2.0 * n / (lo * lo * lo),
            Interval::from(0.0).unwrap(),
        )
        .with_hint(0.5)
    }

    #[test]
    fn gauss_kronrod_is_exact_on_polynomials() {
        assert!((GK_WEIGHTS.iter().sum::<f64>() * 2.0 - GK_WEIGHTS[7] - 2.0).abs() < 1e-14);
        for deg in 0..=21 {
            let (k, _) = gauss_kronrod(&|x: f64| x.powi(deg), 0.0, 1.0);
            let want = 1.0 / (deg as f64 + 1.0);
            assert!((k - want).abs() < 1e-14, "degree {deg}");
        }
        for deg in 0..=13 {
            let (_, err) = gauss_kronrod(&|x: f64| x.powi(deg), -0.3, 0.8);
            assert!(err < 1e-14, "gauss degree {deg}");
        }
    }

    #[test]
    fn gaussian_is_exact() {
        let prob = gaussian(10.0, 1.0, Interval::real_line());
        let res = approx(&prob, 0.75).unwrap();
        assert_eq!(res.side, Side::TwoSided);
        assert!((res.x_star - 1.0).abs() < 1e-12);
        assert_eq!(res.delta, 0.0);
        let want = 0.5 * (2.0 * PI / 10.0).ln();
        assert!((res.log_value - want).abs() < 1e-12);
        let quad = integrate_direct(&prob, 1e-12).unwrap();
        assert!((quad - want).abs() < 1e-10);
    }

    #[test]
    fn half_gaussian() {
        let prob = gaussian(10.0, 0.0, Interval::from(0.0).unwrap());
        let res = approx(&prob, 0.75).unwrap();
        assert_eq!(res.side, Side::LeftBounded);
        assert!((res.log_value - 0.5 * (PI / 20.0).ln()).abs() < 1e-12);
        let quad = integrate_direct(&prob, 1e-12).unwrap();
        assert!((quad - 0.5 * (PI / 20.0).ln()).abs() < 1e-10);

        let prob = gaussian(10.0, 0.0, Interval::up_to(0.0).unwrap());
        assert_eq!(approx(&prob, 0.75).unwrap().side, Side::RightBounded);
    }

    #[test]
    fn stirling_correction() {
        let n = 100.0;
        let res = approx(&gamma_problem(n), 0.75).unwrap();
        let exact = log_gamma(PositiveReal::new(n + 1.0).unwrap()) - (n + 1.0) * n.ln();
        let eps = (res.log_value - exact).exp() - 1.0;
        assert!(eps.abs() <= 2.0 / (12.0 * n), "eps = {eps}");
        let quad = integrate_direct(&gamma_problem(n), 1e-12).unwrap();
        assert!((quad - exact).abs() < 1e-10, "{quad} vs {exact}");
    }

    #[test]
    fn shift_covariance() {
        for (domain, center) in [
            (Interval::real_line(), 2.0),
            (Interval::from(0.0).unwrap(), 0.0),
        ] {
            let base = approx(&gaussian(7.0, center, domain), 0.75).unwrap();
            let shifted = LaplaceProblem::new(
                move |x| -7.0 * (x - center) * (x - center) / 2.0 + 3.25,
                move |x| -7.0 * (x - center),
                |_| -7.0,
                |_, _| 0.0,
                domain,
            );
            let s = approx(&shifted, 0.75).unwrap();
            assert!((s.log_value - base.log_value - 3.25).abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_beyond_domain_is_rejected() {
        let prob = gaussian(10.0, -1.0, Interval::from(0.0).unwrap());
        assert!(matches!(
            approx(&prob, 0.75),
            Err(Error::NoInteriorMaximum(_))
        ));
        let convex = LaplaceProblem::new(
            |x| x * x,
            |x| 2.0 * x,
            |_| 2.0,
            |_, _| 0.0,
            Interval::real_line(),
        );
        assert!(matches!(
            approx(&convex, 0.75),
            Err(Error::NotConcave { .. })
        ));
        let linear =
            LaplaceProblem::new(|x| x, |_| 1.0, |_| 0.0, |_, _| 0.0, Interval::real_line());
        assert!(matches!(
            approx(&linear, 0.75),
            Err(Error::NoInteriorMaximum(_))
        ));
        assert!(approx(&gaussian(1.0, 0.0, Interval::real_line()), 1.0).is_err());
    }

    #[test]
    fn clipped_window_warns() {
        // maximum 0.5 away from the boundary, window radius 1
        let prob = gaussian(400.0, 0.5, Interval::from(0.0).unwrap());
        let res = approx(&prob, 0.75).unwrap();
        assert_eq!(res.side, Side::TwoSided);
        assert!(res.warning.is_some());
        assert!((res.r - 0.5).abs() < 1e-12);
    }

    #[test]
    fn objective_boundary_case() {
        assert!(matches!(
            approx_objective(0.5, 1.0, 2, 0.75),
            Err(Error::NoInteriorMaximum(_))
        ));
    }

    #[test]
    fn objective_against_closed_form() {
        // Σ_k g_n e^{f_n(k)} = e^{−n I}
        let i = crate::rate::rate_i(crate::rate::RatePoint::new(0.3, 1.0).unwrap());
        let mut prev = f64::INFINITY;
        for n in [50u64, 100, 200] {
            let a = approx_objective(0.3, 1.0, n, 0.75).unwrap();
            let err = ((a.log_value + n as f64 * i).exp() - 1.0).abs();
            assert!(err < prev);
            prev = err;
        }
        assert!(prev <= 0.05);
    }

    #[test]
    fn sum_integral_gap_examples() {
        for (p, q, n) in [(0.3, 1.0, 100u64), (0.5, 2.0, 50)] {
            let g = sum_integral_gap(p, q, n).unwrap();
            assert!(g.holds, "p={p} q={q} n={n}: {g:?}");
        }
    }
}
