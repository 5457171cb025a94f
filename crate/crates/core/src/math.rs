//! Log-domain arithmetic.
//!
//! Probability zero is `f64::NEG_INFINITY`; probability one is `0.0`.

/// log(0), the additive identity of [`log_add`].
pub const LOG_ZERO: f64 = f64::NEG_INFINITY;

/// log(1).
pub const LOG_ONE: f64 = 0.0;

/// log(exp(a) + exp(b)) without leaving log space.
#[inline]
pub fn log_add(a: f64, b: f64) -> f64 {
    if a == LOG_ZERO {
        return b;
    }
    if b == LOG_ZERO {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// log(Σ exp(v)) over a slice, max-shifted for stability.
///
/// The empty sum is log(0). The result is never NaN for log-domain inputs.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let mut max = LOG_ZERO;
    for &v in values {
        if v > max {
            max = v;
        }
    }
    if max == LOG_ZERO || max == f64::INFINITY {
        return max;
    }
    let mut sum = 0.0;
    for &v in values {
        sum += (v - max).exp();
    }
    max + sum.ln()
}
