//! Small numerical building blocks shared by the series, quadrature and
//! simulation code.

/// Running log-sum-exp: accumulates Σ e^{xᵢ} as (max, Σ e^{xᵢ − max}).
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp {
    max: f64,
    scaled: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        LogSumExp::new()
    }
}

impl LogSumExp {
    pub fn new() -> Self {
        LogSumExp {
            max: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }

    pub fn add(&mut self, log_term: f64) {
        if log_term == f64::NEG_INFINITY {
            return;
        }
        if log_term <= self.max {
            self.scaled += (log_term - self.max).exp();
        } else {
            self.scaled = self.scaled * (self.max - log_term).exp() + 1.0;
            self.max = log_term;
        }
    }

    /// ln Σ e^{xᵢ}, or −∞ when nothing was added.
    pub fn value(&self) -> f64 {
        if self.scaled == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }
}

/// ln(e^a + e^b).
pub fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// ln|e^a − e^b|, −∞ when a == b.
pub fn log_abs_diff(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == hi {
        return f64::NEG_INFINITY;
    }
    hi + (-(lo - hi).exp()).ln_1p()
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new(initial: f64) -> Self {
        CompensatedSum {
            sum: initial,
            compensation: 0.0,
        }
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// ⌊x⌋, snapping products that land within a few ulps of an integer onto it.
///
/// Thresholds such as k·q with q entered as a decimal (q = 0.29, k = 100
/// gives 28.999999999999996) are meant to be exact; treating them as the
/// nearby integer keeps the strict event `z > k·q` on the intended side.
pub fn floor_snapped(x: f64) -> f64 {
    let nearest = x.round();
    if (x - nearest).abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
        nearest
    } else {
        x.floor()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sum_exp_handles_extreme_terms() {
        let mut acc = LogSumExp::new();
        assert_eq!(acc.value(), f64::NEG_INFINITY);
        for x in [-1000.0, -1001.0, -999.5, f64::NEG_INFINITY] {
            acc.add(x);
        }
        let want = -1000.0 + (1.0 + (-1.0f64).exp() + 0.5f64.exp()).ln();
        assert!((acc.value() - want).abs() < 1e-12);
    }

    #[test]
    fn log_add_and_diff() {
        assert!((log_add(0.0, 0.0) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(log_add(3.0, f64::NEG_INFINITY), 3.0);
        assert!((log_abs_diff(2f64.ln(), 0.0)).abs() < 1e-15);
        assert_eq!(log_abs_diff(1.5, 1.5), f64::NEG_INFINITY);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new(1e16);
        for _ in 0..1000 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 1000.0);
    }

    #[test]
    fn floor_snapping() {
        assert_eq!(floor_snapped(0.29 * 100.0), 29.0);
        assert_eq!(floor_snapped(2.5), 2.0);
        assert_eq!(floor_snapped(7.0), 7.0);
        assert_eq!(floor_snapped(6.999), 6.0);
        assert_eq!(floor_snapped(0.1 * 3.0), 0.0);
    }
}
