use proptest::prelude::*;
use risrate::fbl::{dispersion, fbl_rate, q_function, q_inverse, rate_inverse, FblParams};

/// Q(x) from erfc, inverted by plain bisection.
fn q_inverse_oracle(eps: f64) -> f64 {
    let q = |x: f64| 0.5 * libm::erfc(x / std::f64::consts::SQRT_2);
    let (mut lo, mut hi) = (-40.0f64, 40.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if q(mid) > eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section minimum of `f` on `[a, b]`.
fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..300 {
        let c = b - r * (b - a);
        let d = a + r * (b - a);
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}

#[test]
fn q_inverse_reference_values() {
    assert!((q_inverse(1e-5).unwrap() - 4.26489).abs() < 1e-5);
    assert!(q_inverse(0.5).unwrap().abs() < 1e-12);
    for eps in [1e-12, 1e-9, 1e-7, 1e-5, 1e-3, 0.05, 0.2, 0.4, 0.49] {
        let got = q_inverse(eps).unwrap();
        let want = q_inverse_oracle(eps);
        assert!((got - want).abs() < 1e-9, "eps {eps}: {got} vs {want}");
    }
}

#[test]
fn q_inverse_rejects_out_of_range() {
    assert!(q_inverse(0.0).is_err());
    assert!(q_inverse(0.7).is_err());
    assert!(q_inverse(f64::NAN).is_err());
}

#[test]
fn rate_at_sinr_ten() {
    // ln 11 − (Q⁻¹(1e-5)/16)·sqrt(20/11)
    let p = FblParams::new(256, 1e-5).unwrap();
    let want = 11f64.ln() - q_inverse_oracle(1e-5) / 16.0 * (20.0f64 / 11.0).sqrt();
    assert!((fbl_rate(10.0, &p) - want).abs() < 1e-9);
    // the five-digit figure is rounded from rounded intermediates
    assert!((fbl_rate(10.0, &p) - 2.03845).abs() < 5e-5);
}

#[test]
fn threshold_reference_value() {
    let p = FblParams::new(256, 1e-5).unwrap();
    assert!((p.gamma_bar - 0.034347).abs() < 1e-6);
    let numeric = golden_min(|g| fbl_rate(g, &p), 0.0, 1.0);
    assert!((numeric - p.gamma_bar).abs() < 1e-6);
}

#[test]
fn shannon_limit_has_no_threshold() {
    let p = FblParams::shannon();
    assert_eq!(p.gamma_bar, 0.0);
    assert!((fbl_rate(3.0, &p) - 4f64.ln()).abs() < 1e-15);
}

proptest! {
    #[test]
    fn threshold_is_the_minimizer(n in 64u32..4096, log_eps in -9.0f64..-0.4) {
        let p = FblParams::new(n, 10f64.powf(log_eps)).unwrap();
        let closed = 0.5 * ((1.0 + 2.0 * p.c * p.c).sqrt() - 1.0);
        prop_assert!((p.gamma_bar - closed).abs() < 1e-12);
        let numeric = golden_min(|g| fbl_rate(g, &p), 0.0, 10.0);
        prop_assert!((numeric - p.gamma_bar).abs() < 1e-6);
    }

    #[test]
    fn rate_nondecreasing_above_threshold(n in 64u32..4096, log_eps in -9.0f64..-0.4, a in 0.0f64..100.0, b in 0.0f64..100.0) {
        let p = FblParams::new(n, 10f64.powf(log_eps)).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(fbl_rate(p.gamma_bar + hi, &p) >= fbl_rate(p.gamma_bar + lo, &p) - 1e-15);
    }

    #[test]
    fn rate_below_shannon(g in 0.0f64..1e4, n in 1u32..10000, log_eps in -12.0f64..-0.31) {
        let p = FblParams::new(n, 10f64.powf(log_eps)).unwrap();
        prop_assert!(fbl_rate(g, &p) <= g.ln_1p());
    }

    #[test]
    fn rate_inverse_round_trip(g in 0.0f64..1e3, n in 64u32..4096, log_eps in -9.0f64..-1.0) {
        let p = FblParams::new(n, 10f64.powf(log_eps)).unwrap();
        let g = p.gamma_bar + g;
        let back = rate_inverse(fbl_rate(g, &p), &p).unwrap();
        prop_assert!((back - g).abs() <= 1e-8 * g.max(1.0));
    }

    #[test]
    fn dispersion_in_unit_interval_times_two(g in 0.0f64..1e9) {
        let v = dispersion(g);
        prop_assert!((0.0..2.0).contains(&v));
    }

    #[test]
    fn q_function_inverts(x in -8.0f64..8.0) {
        let eps = q_function(x);
        prop_assume!(eps > 1e-15 && eps < 0.5 - 1e-12);
        prop_assert!((q_inverse(eps).unwrap() - x).abs() < 1e-7);
    }
}

#[test]
fn rate_inverse_of_reference_rate() {
    let p = FblParams::new(256, 1e-5).unwrap();
    let g = rate_inverse(2.03845, &p).unwrap();
    assert!((g - 10.0).abs() < 1e-3, "{g}");
    assert!(rate_inverse(fbl_rate(p.gamma_bar, &p) - 1e-3, &p).is_err());
}
