//! Log-Gamma, log-Beta and the polygamma functions ψ₀, ψ₁, ψ₂ on the
//! positive real axis.
//!
//! Arguments below [`SHIFT_THRESHOLD`] are moved upward with the recurrence
//! ψₙ(x+1) = ψₙ(x) + (−1)ⁿ n!/xⁿ⁺¹ (and Γ(x+1) = xΓ(x)), after which the
//! Bernoulli-coefficient asymptotic series is summed. On `[0.5, 2.5]` the
//! log-Gamma uses a zeta-series expansion around 1 so that the zeros at
//! x = 1 and x = 2 are resolved to full relative accuracy.

use crate::error::{Error, Result};

/// Arguments are shifted up by the recurrence until they reach this value.
pub const SHIFT_THRESHOLD: f64 = 12.0;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_7;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// B₂ₖ for k = 1..=10.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// ζ(k) − 1 for k = 2..=40.
const ZETA_MINUS_ONE: [f64; 39] = [
    6.449_340_668_482_264e-1,
    2.020_569_031_595_943e-1,
    8.232_323_371_113_819e-2,
    3.692_775_514_336_993e-2,
    1.734_306_198_444_914e-2,
    8.349_277_381_922_827e-3,
    4.077_356_197_944_34e-3,
    2.008_392_826_082_214e-3,
    9.945_751_278_180_853e-4,
    4.941_886_041_194_645e-4,
    2.460_865_533_080_483e-4,
    1.227_133_475_784_891e-4,
    6.124_813_505_870_483e-5,
    3.058_823_630_702_049e-5,
    1.528_225_940_865_187e-5,
    7.637_197_637_899_763e-6,
    3.817_293_264_999_84e-6,
    1.908_212_716_553_939e-6,
    9.539_620_338_727_962e-7,
    4.769_329_867_878_064e-7,
    2.384_505_027_277_33e-7,
    1.192_199_259_653_111e-7,
    5.960_818_905_125_948e-8,
    2.980_350_351_465_228e-8,
    1.490_155_482_836_504e-8,
    7.450_711_789_835_43e-9,
    3.725_334_024_788_457e-9,
    1.862_659_723_513_049e-9,
    9.313_274_324_196_682e-10,
    4.656_629_065_033_784e-10,
    2.328_311_833_676_505e-10,
    1.164_155_017_270_052e-10,
    5.820_772_087_902_701e-11,
    2.910_385_044_497_1e-11,
    1.455_192_189_104_198e-11,
    7.275_959_835_057_482e-12,
    3.637_979_547_378_651e-12,
    1.818_989_650_307_066e-12,
    9.094_947_840_263_888e-13,
];

/// A finite, strictly positive real argument.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PositiveReal(f64);

impl PositiveReal {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(PositiveReal(value))
        } else {
            Err(Error::domain(format!(
                "special functions require a finite positive argument, got {value}"
            )))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for PositiveReal {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        PositiveReal::new(value)
    }
}

/// ln Γ(x).
pub fn log_gamma(x: PositiveReal) -> f64 {
    let x = x.get();
    if (0.5..=1.5).contains(&x) {
        return log_gamma_near_one(x - 1.0);
    }
    if (1.5..=2.5).contains(&x) {
        // Γ(x) = (x − 1)Γ(x − 1)
        return (x - 2.0).ln_1p() + log_gamma_near_one(x - 2.0);
    }
    if x >= SHIFT_THRESHOLD {
        return log_gamma_asymptotic(x);
    }
    let mut shifted = x;
    let mut product = 1.0;
    while shifted < SHIFT_THRESHOLD {
        product *= shifted;
        shifted += 1.0;
    }
    log_gamma_asymptotic(shifted) - product.ln()
}

/// ln Γ(1 + z) for |z| ≤ 1/2.
fn log_gamma_near_one(z: f64) -> f64 {
    // ln Γ(1+z) = −ln(1+z) + z(1−γ) + Σ_{k≥2} (−1)ᵏ (ζ(k)−1) zᵏ/k
    let mut series = 0.0;
    let mut power = -z;
    for (i, zeta) in ZETA_MINUS_ONE.iter().enumerate() {
        power *= -z;
        let k = (i + 2) as f64;
        let term = zeta * power / k;
        series += term;
        if term.abs() < 1e-18 * series.abs() {
            break;
        }
    }
    -z.ln_1p() + z * (1.0 - EULER_GAMMA) + series
}

fn log_gamma_asymptotic(x: f64) -> f64 {
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_correction(x)
}

/// ω(x) = ln Γ(x) − (x − ½)ln x + x − ½ln 2π, valid for x ≥ [`SHIFT_THRESHOLD`].
fn stirling_correction(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut power = inv;
    let mut series = 0.0;
    for (i, b) in BERNOULLI.iter().enumerate() {
        let k = (i + 1) as f64;
        series += b / (2.0 * k * (2.0 * k - 1.0)) * power;
        power *= inv2;
    }
    series
}

/// ln B(x, y) = ln Γ(x) + ln Γ(y) − ln Γ(x + y).
///
/// Large arguments are combined before the logarithms are taken so that
/// the result keeps its relative accuracy when ln Γ(x + y) and ln Γ(y)
/// nearly cancel.
pub fn log_beta(x: PositiveReal, y: PositiveReal) -> f64 {
    let (a, b) = if x.get() <= y.get() {
        (x.get(), y.get())
    } else {
        (y.get(), x.get())
    };
    let s = a + b;
    if b < SHIFT_THRESHOLD {
        return log_gamma(PositiveReal(a)) + log_gamma(PositiveReal(b))
            - log_gamma(PositiveReal(s));
    }
    if a < SHIFT_THRESHOLD {
        // ln Γ(b + a) − ln Γ(b) = (b − ½)·ln(1 + a/b) + a·(ln s − 1) + ω(s) − ω(b)
        let ratio_term = (b - 0.5) * (a / b).ln_1p() + a * (s.ln() - 1.0);
        return log_gamma(PositiveReal(a))
            - (ratio_term + (stirling_correction(s) - stirling_correction(b)));
    }
    // (a−½)ln(a/s) + (b−½)ln(b/s) − ½ln s + ½ln 2π + ω(a) + ω(b) − ω(s)
    let ln_a_over_s = (a / s).ln();
    let ln_b_over_s = (-a / s).ln_1p();
    (a - 0.5) * ln_a_over_s + (b - 0.5) * ln_b_over_s - 0.5 * s.ln()
        + HALF_LN_2PI
        + (stirling_correction(a) + stirling_correction(b) - stirling_correction(s))
}

/// Polygamma function ψ_order(x) for order ∈ {0, 1, 2}.
pub fn polygamma(order: u32, x: PositiveReal) -> Result<f64> {
    match order {
        0 => Ok(digamma(x)),
        1 => Ok(trigamma(x)),
        2 => Ok(tetragamma(x)),
        _ => Err(Error::domain(format!(
            "polygamma order {order} is not supported (only 0, 1, 2)"
        ))),
    }
}

/// ψ₀(x).
pub fn digamma(x: PositiveReal) -> f64 {
    let mut x = x.get();
    let mut acc = 0.0;
    while x < SHIFT_THRESHOLD {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut power = inv2;
    let mut series = 0.0;
    for (i, b) in BERNOULLI.iter().enumerate() {
        let k = (i + 1) as f64;
        series += b / (2.0 * k) * power;
        power *= inv2;
    }
    acc + x.ln() - 0.5 * inv - series
}

/// ψ₁(x).
pub fn trigamma(x: PositiveReal) -> f64 {
    let mut x = x.get();
    let mut acc = 0.0;
    while x < SHIFT_THRESHOLD {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut power = inv2 * inv;
    let mut series = 0.0;
    for b in BERNOULLI.iter() {
        series += b * power;
        power *= inv2;
    }
    acc + inv + 0.5 * inv2 + series
}

/// ψ₂(x).
pub fn tetragamma(x: PositiveReal) -> f64 {
    let mut x = x.get();
    let mut acc = 0.0;
    while x < SHIFT_THRESHOLD {
        acc -= 2.0 / (x * x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut power = inv2 * inv2;
    let mut series = 0.0;
    for (i, b) in BERNOULLI.iter().enumerate() {
        let k = (i + 1) as f64;
        series += (2.0 * k + 1.0) * b * power;
        power *= inv2;
    }
    acc - inv2 - inv2 * inv - series
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pr(x: f64) -> PositiveReal {
        PositiveReal::new(x).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // 50-digit reference values (mpmath).
    const ARGS: [f64; 15] = [
        0.001, 0.01, 0.1, 0.5, 1.5, 2.5, 3.7, 7.25, 11.9, 12.5, 33.3, 100.75, 1234.5, 1e5, 1e8,
    ];
    const LOG_GAMMA_REF: [f64; 15] = [
        6.9071788853838536825,
        4.5994798780420217225,
        2.2527126517342059599,
        0.57236494292470008707,
        -0.12078223763524522235,
        0.28468287047291915963,
        1.4280723266653879219,
        7.0521854507385394449,
        17.258477450595521147,
        18.734347511936445702,
        82.603723581654952928,
        362.58714629323386783,
        7550.5509010778948957,
        1051287.7089736568949,
        1742068066.1038347093,
    ];
    const DIGAMMA_REF: [f64; 15] = [
        -1000.5755719318103005,
        -100.5608854578686745,
        -10.423754940411076795,
        -1.9635100260214234794,
        0.036489973978576520559,
        0.70315664064524318723,
        1.1671535393615113859,
        1.9104535268837360284,
        2.4339335368825374548,
        2.4851956512749120482,
        3.4904672385202428639,
        4.6076712120256890471,
        7.1180162318279978433,
        11.512920464961895087,
        18.420680738952365464,
    ];
    const TRIGAMMA_REF: [f64; 15] = [
        1000001.642533195869,
        10001.62121352831322,
        101.43329915079275882,
        4.9348022005446793094,
        0.93480220054467930942,
        0.49035775610023486497,
        0.3100378576700383191,
        0.14787923315893216965,
        0.087663201190004186303,
        0.083285224601578370444,
        0.030485444095338885149,
        0.0099749796355745432727,
        0.0008103727271269666527,
        0.000010000050000166666667,
        1.0000000050000000167e-8,
    ];
    const TETRAGAMMA_REF: [f64; 15] = [
        -2000000002.3976322897,
        -2000002.3403986770845,
        -2001.8614573783440063,
        -16.828796644234319996,
        -0.8287966442343199956,
        -0.236204051641727403,
        -0.095395308728554043835,
        -0.021828952295197739222,
        -0.0076799391593283073724,
        -0.0069324365857882407909,
        -0.00092929036781151712057,
        -0.000099499393757649695765,
        -6.5670392093287152052e-7,
        -1.00001000005e-10,
        -1.00000001000000005e-16,
    ];

    #[test]
    fn log_gamma_matches_reference() {
        for (x, want) in ARGS.iter().zip(LOG_GAMMA_REF) {
            let got = log_gamma(pr(*x));
            assert!(rel(got, want) <= 1e-13, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn log_gamma_small_values() {
        assert_eq!(log_gamma(pr(1.0)), 0.0);
        assert!(log_gamma(pr(2.0)).abs() < 1e-16);
        assert!(rel(log_gamma(pr(5.0)), 24f64.ln()) <= 1e-14);
        assert!(rel(log_gamma(pr(0.5)), 0.5 * PI.ln()) <= 1e-14);
        // slightly off the zeros: Γ(1+z) ≈ 1 − γz
        let z = 1e-9;
        assert!(rel(log_gamma(pr(1.0 + z)), -EULER_GAMMA * z) < 1e-6);
    }

    #[test]
    fn log_gamma_duplication_formula() {
        // ln Γ(2x) = (2x−1) ln 2 − ½ ln π + ln Γ(x) + ln Γ(x+½)
        for &x in &[0.3, 0.75, 1.2, 3.3, 10.0, 57.5] {
            let lhs = log_gamma(pr(2.0 * x));
            let rhs = (2.0 * x - 1.0) * 2f64.ln() - 0.5 * PI.ln()
                + log_gamma(pr(x))
                + log_gamma(pr(x + 0.5));
            assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + lhs.abs()), "x={x}");
        }
    }

    #[test]
    fn log_gamma_functional_equation() {
        let mut x = 0.01;
        while x < 100.0 {
            let lg = log_gamma(pr(x));
            let diff = log_gamma(pr(x + 1.0)) - lg - x.ln();
            assert!(diff.abs() <= 1e-13 * (1.0 + lg.abs()), "x={x}: {diff}");
            x *= 1.07;
        }
    }

    #[test]
    fn log_beta_examples() {
        assert!(rel(log_beta(pr(1.0), pr(3.0)), (1.0f64 / 3.0).ln()) < 1e-14);
        assert!(rel(log_beta(pr(2.0), pr(2.0)), (1.0f64 / 6.0).ln()) < 1e-14);
        for &(x, y) in &[(0.3, 7.0), (2.5, 11.0), (100.0, 0.1)] {
            assert!((log_beta(pr(x), pr(y)) - log_beta(pr(y), pr(x))).abs() < 1e-13);
        }
    }

    #[test]
    fn polygamma_matches_reference() {
        for (i, x) in ARGS.iter().enumerate() {
            for (order, table) in [(0, &DIGAMMA_REF), (1, &TRIGAMMA_REF), (2, &TETRAGAMMA_REF)] {
                let got = polygamma(order, pr(*x)).unwrap();
                let want = table[i];
                assert!(
                    rel(got, want) <= 1e-12,
                    "ψ{order}({x}) = {got}, want {want}"
                );
            }
        }
    }

    #[test]
    fn polygamma_special_values() {
        let d = digamma(pr(2.0)) - digamma(pr(1.0));
        assert!((d - 1.0).abs() < 1e-15);

        // ψ₁(1) = Σ 1/k², partial sum plus integral tail bounds
        let n = 100_000;
        let partial: f64 = (1..=n).rev().map(|k| 1.0 / (k as f64 * k as f64)).sum();
        let lo = partial + 1.0 / (n as f64 + 1.0);
        let hi = partial + 1.0 / n as f64;
        let t = trigamma(pr(1.0));
        assert!(t > lo - 1e-15 && t < hi + 1e-15);
        assert!(rel(t, PI * PI / 6.0) < 1e-14);

        // −γ = ψ₀(N) − H_{N−1}, with ψ₀(N) ≈ ln N − 1/(2N) − 1/(12N²)
        let big_n = 1_000_000usize;
        let harmonic: f64 = (1..big_n).rev().map(|k| 1.0 / k as f64).sum();
        let nf = big_n as f64;
        let oracle = nf.ln() - 0.5 / nf - 1.0 / (12.0 * nf * nf) - harmonic;
        let got = digamma(pr(1.0));
        assert!((got - oracle).abs() < 1e-12);
        assert!(rel(got, -EULER_GAMMA) < 1e-14);
    }

    #[test]
    fn recursion_identity() {
        let mut x = 0.01;
        while x <= 100.0 {
            for order in 0..=2u32 {
                let a = polygamma(order, pr(x)).unwrap();
                let b = polygamma(order, pr(x + 1.0)).unwrap();
                let fact = [1.0, 1.0, 2.0][order as usize];
                let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
                let step = sign * fact / x.powi(order as i32 + 1);
                assert!(
                    (b - a - step).abs() <= 1e-12 * (1.0 + a.abs()),
                    "order {order} at x={x}"
                );
            }
            x *= 1.05;
        }
    }

    #[test]
    fn derivative_consistency() {
        for &x in &[0.2f64, 0.9, 1.7, 4.0, 13.0, 250.0] {
            let h = 1e-5 * x.max(1.0);
            let fd = (log_gamma(pr(x + h)) - log_gamma(pr(x - h))) / (2.0 * h);
            let psi = digamma(pr(x));
            assert!((fd - psi).abs() <= 1e-6 * psi.abs().max(1.0), "ψ₀ at {x}");
            let fd1 = (digamma(pr(x + h)) - digamma(pr(x - h))) / (2.0 * h);
            assert!(rel(fd1, trigamma(pr(x))) <= 1e-6, "ψ₁ at {x}");
        }
    }

    #[test]
    fn signs() {
        let mut x = 1e-3;
        while x < 1e8 {
            assert!(trigamma(pr(x)) > 0.0);
            assert!(tetragamma(pr(x)) < 0.0);
            x *= 1.3;
        }
    }

    #[test]
    fn domain_errors() {
        assert!(PositiveReal::new(0.0).is_err());
        assert!(PositiveReal::new(-1.0).is_err());
        assert!(PositiveReal::new(f64::NAN).is_err());
        assert!(PositiveReal::new(f64::INFINITY).is_err());
        assert!(polygamma(3, pr(1.0)).is_err());
    }
}
