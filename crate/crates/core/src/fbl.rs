//! Finite-block-length rate under the normal approximation.
//!
//! All rates are in nats per channel use:
//!
//! ```text
//! r(γ) = ln(1 + γ) − c · sqrt(2γ / (1 + γ)),   c = Q⁻¹(ε) / sqrt(n)
//! ```
//!
//! `r` decreases on `[0, γ̄]` and increases on `[γ̄, ∞)` with
//! `γ̄ = (sqrt(1 + 2c²) − 1) / 2`, the nonnegative root of `2γ² + 2γ − c² = 0`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Upper tail of the standard normal distribution.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Rational approximation of the standard normal quantile (Acklam), |rel err| < 1.2e-9.
fn acklam_quantile(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

/// Inverse of the Q-function on `(0, 0.5]`.
///
/// The rational seed is polished with Halley steps on `Q(x) − ε`, which
/// brings the absolute error well below `1e-9` down to `ε = 1e-12`.
pub fn q_inverse(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::invalid("epsilon", format!("{eps} is outside (0, 0.5]")));
    }
    if eps == 0.5 {
        return Ok(0.0);
    }
    // Q(x) = ε  <=>  Φ(x) = 1 − ε  <=>  x = −Φ⁻¹(ε)
    let mut x = -acklam_quantile(eps);
    for _ in 0..3 {
        let err = q_function(x) - eps;
        let pdf = normal_pdf(x);
        if pdf == 0.0 {
            break;
        }
        // f = Q(x) − ε, f' = −φ(x), f'' = xφ(x)
        let newton = err / -pdf;
        let step = newton / (1.0 - 0.5 * newton * x);
        x -= step;
        if step.abs() < 1e-15 * x.abs().max(1.0) {
            break;
        }
    }
    Ok(x.max(0.0))
}

/// Block length and error target, with the derived back-off coefficient and threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FblParams {
    pub block_length: u32,
    pub error_prob: f64,
    /// `Q⁻¹(ε) / sqrt(n)`
    pub c: f64,
    /// SINR above which the rate is nondecreasing.
    pub gamma_bar: f64,
}

impl FblParams {
    /// `error_prob` may equal 0.5 here (the Shannon limit, `c = 0`);
    /// system configurations restrict it to the open interval.
    pub fn new(block_length: u32, error_prob: f64) -> Result<Self> {
        if block_length == 0 {
            return Err(Error::invalid("block_length", "must be at least 1"));
        }
        let c = q_inverse(error_prob)? / f64::from(block_length).sqrt();
        Ok(Self::from_c(block_length, error_prob, c))
    }

    fn from_c(block_length: u32, error_prob: f64, c: f64) -> Self {
        Self {
            block_length,
            error_prob,
            c,
            gamma_bar: threshold_from_c(c),
        }
    }

    /// Parameters with a given back-off coefficient, bypassing `(n, ε)`.
    pub fn with_c(c: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::invalid("c", format!("{c} must be finite and nonnegative")));
        }
        Ok(Self::from_c(0, f64::NAN, c))
    }

    /// The Shannon limit `c = 0`.
    pub fn shannon() -> Self {
        Self::from_c(0, 0.5, 0.0)
    }

    pub fn rate(&self, sinr: f64) -> f64 {
        fbl_rate(sinr, self)
    }
}

fn threshold_from_c(c: f64) -> f64 {
    // (sqrt(1 + 2c²) − 1) / 2 rewritten to avoid cancellation at small c
    let s = 2.0 * c * c;
    0.5 * s / ((1.0 + s).sqrt() + 1.0)
}

/// `2γ / (1 + γ)`
pub fn dispersion(sinr: f64) -> f64 {
    2.0 * sinr / (1.0 + sinr)
}

/// Normal-approximation rate in nats; negative values are returned as-is.
pub fn fbl_rate(sinr: f64, params: &FblParams) -> f64 {
    sinr.ln_1p() - params.c * dispersion(sinr).sqrt()
}

fn fbl_rate_derivative(sinr: f64, c: f64) -> f64 {
    // d/dγ [ln(1+γ) − c sqrt(2γ/(1+γ))] = 1/(1+γ) − c / (sqrt(2γ) (1+γ)^{3/2})
    let one = 1.0 + sinr;
    if sinr <= 0.0 {
        return if c > 0.0 { f64::NEG_INFINITY } else { 1.0 };
    }
    1.0 / one - c / ((2.0 * sinr).sqrt() * one.powf(1.5))
}

pub fn sinr_threshold(params: &FblParams) -> f64 {
    params.gamma_bar
}

/// The unique `γ ≥ γ̄` with `fbl_rate(γ) = rate`.
pub fn rate_inverse(rate: f64, params: &FblParams) -> Result<f64> {
    let gbar = params.gamma_bar;
    let floor = fbl_rate(gbar, params);
    if !rate.is_finite() || rate < floor {
        return Err(Error::RateBelowThreshold { rate, min: floor });
    }
    if rate == floor {
        return Ok(gbar);
    }
    let mut lo = gbar;
    let mut hi = (rate + params.c * std::f64::consts::SQRT_2).exp_m1().max(gbar) + 1.0;
    while fbl_rate(hi, params) < rate {
        lo = hi;
        hi *= 2.0;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let f = fbl_rate(x, params) - rate;
        if f.abs() < 1e-13 * rate.abs().max(1.0) {
            break;
        }
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let d = fbl_rate_derivative(x, params.c);
        let newton = x - f / d;
        x = if d > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo < 1e-15 * hi.max(1.0) {
            break;
        }
    }
    Ok(x)
}

pub fn nats_to_bits(nats: f64) -> f64 {
    nats / std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_inverse_median_and_range() {
        assert_eq!(q_inverse(0.5).unwrap(), 0.0);
        assert!(q_inverse(0.0).is_err());
        assert!(q_inverse(0.6).is_err());
        assert!(q_inverse(f64::NAN).is_err());
    }

    #[test]
    fn q_inverse_round_trips_forward_evaluation() {
        let q1 = q_function(1.0);
        assert!((q1 - 0.158_655_253_931_457_05).abs() < 1e-15);
        assert!((q_inverse(q1).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dispersion_values() {
        assert_eq!(dispersion(0.0), 0.0);
        assert_eq!(dispersion(1.0), 1.0);
        assert!(dispersion(1e12) < 2.0);
        assert!(dispersion(1e6) < dispersion(1e7));
    }

    #[test]
    fn shannon_reduction() {
        let p = FblParams::new(256, 0.5).unwrap();
        assert_eq!(p.c, 0.0);
        assert_eq!(p.gamma_bar, 0.0);
        assert!((fbl_rate(1.0, &p) - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(rate_inverse(0.0, &p).unwrap(), 0.0);
    }

    #[test]
    fn zero_sinr_gives_zero_rate() {
        for (n, e) in [(64, 1e-9), (256, 1e-5), (4096, 0.3)] {
            let p = FblParams::new(n, e).unwrap();
            assert_eq!(fbl_rate(0.0, &p), 0.0);
        }
    }

    #[test]
    fn threshold_closed_form_at_unit_c() {
        let p = FblParams::with_c(1.0).unwrap();
        assert!((p.gamma_bar - (3f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        assert_eq!(FblParams::with_c(0.0).unwrap().gamma_bar, 0.0);
        assert!(FblParams::with_c(-1.0).is_err());
    }

    #[test]
    fn rate_inverse_rejects_rates_below_floor() {
        let p = FblParams::new(64, 1e-9).unwrap();
        let floor = fbl_rate(p.gamma_bar, &p);
        assert!(floor < 0.0);
        assert!(rate_inverse(floor - 1e-3, &p).is_err());
        assert!((rate_inverse(floor, &p).unwrap() - p.gamma_bar).abs() < 1e-12);
    }

    #[test]
    fn rate_inverse_round_trip() {
        let p = FblParams::new(256, 1e-5).unwrap();
        let r = fbl_rate(3.0, &p);
        assert!((rate_inverse(r, &p).unwrap() - 3.0).abs() < 1e-8);
    }

    #[test]
    fn block_length_zero_rejected() {
        assert!(FblParams::new(0, 1e-3).is_err());
    }
}
