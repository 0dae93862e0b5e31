use proptest::prelude::*;
use subgauss_core::{
    check_proxy, GridSpec, Truncated, TruncatedExponential, TruncatedGaussian, TruncationInterval,
};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gaussian_proxy_scales_with_sigma_squared(
        mu in -5.0..5.0f64, sigma in 0.1..10.0f64, lo in -4.0..3.0f64, w in 0.05..8.0f64,
    ) {
        let (a, b) = (mu + sigma * lo, mu + sigma * (lo + w));
        let d = TruncatedGaussian::new(mu, sigma, TruncationInterval::from_f64(a, b).unwrap()).unwrap();
        let s = TruncatedGaussian::standard((a - mu) / sigma, (b - mu) / sigma).unwrap();
        let (p, ps) = (d.variance_proxy(), s.variance_proxy());
        prop_assert!(rel(p.variance_proxy, sigma * sigma * ps.variance_proxy) < 1e-10);
        prop_assert!(rel(p.variance, sigma * sigma * ps.variance) < 1e-10);
        prop_assert_eq!(p.case_tag, ps.case_tag);
    }

    #[test]
    fn exponential_proxy_scales_with_inverse_rate_squared(
        lambda in 0.05..20.0f64, a in 0.0..10.0f64, w in 0.01..15.0f64,
    ) {
        let (lo, hi) = (a / lambda, (a + w) / lambda);
        let d = TruncatedExponential::new(lambda, TruncationInterval::from_f64(lo, hi).unwrap()).unwrap();
        let s = TruncatedExponential::standard(lambda * lo, lambda * hi).unwrap();
        let p = d.variance_proxy().unwrap().variance_proxy;
        let ps = s.variance_proxy().unwrap().variance_proxy;
        prop_assert!(rel(p, ps / (lambda * lambda)) < 1e-10);
    }

    #[test]
    fn proxy_between_variance_and_hoeffding(a in -6.0..6.0f64, w in 0.01..10.0f64, e in 0.0..20.0f64) {
        let g = TruncatedGaussian::standard(a, a + w).unwrap().variance_proxy();
        prop_assert!(g.variance_proxy >= g.variance * (1.0 - 1e-12));
        prop_assert!(g.variance_proxy <= 0.25 * w * w * (1.0 + 1e-12));
        prop_assert!(g.variance_proxy <= 1.0);
        let x = TruncatedExponential::standard(e, e + w).unwrap().variance_proxy().unwrap();
        prop_assert!(x.variance_proxy > x.variance);
        prop_assert!(x.variance_proxy <= 0.25 * w * w * (1.0 + 1e-12));
    }

    #[test]
    fn gaussian_proxy_dominates_log_cmgf(a in -4.0..3.0f64, w in 0.1..8.0f64) {
        let d = TruncatedGaussian::standard(a, a + w).unwrap();
        let s2 = d.variance_proxy().variance_proxy;
        let grid = GridSpec::symmetric(12.0).unwrap().with_points(801).unwrap();
        let c = check_proxy(|t| d.log_centered_mgf(t), s2, &grid).unwrap();
        prop_assert!(c.max_residual <= 1e-9, "residual {} at {}", c.max_residual, c.theta_star);
    }

    #[test]
    fn exponential_proxy_dominates_log_cmgf(a in 0.0..5.0f64, w in 0.1..10.0f64) {
        let d = TruncatedExponential::standard(a, a + w).unwrap();
        let s2 = d.variance_proxy().unwrap().variance_proxy;
        let grid = GridSpec::span(-10.0, 3.0 * (a + w) + 10.0).unwrap().with_points(801).unwrap();
        let c = check_proxy(|t| d.log_centered_mgf(t), s2, &grid).unwrap();
        prop_assert!(c.max_residual <= 1e-9, "residual {} at {}", c.max_residual, c.theta_star);
    }

    #[test]
    fn domination_is_monotone_in_s_squared(a in -3.0..2.0f64, w in 0.2..6.0f64, s2 in 0.01..1.2f64) {
        let d = TruncatedGaussian::standard(a, a + w).unwrap();
        let grid = GridSpec::symmetric(10.0).unwrap().with_points(401).unwrap();
        let f = |t| d.log_centered_mgf(t);
        let lower = check_proxy(f, s2, &grid).unwrap();
        let higher = check_proxy(f, 1.1 * s2, &grid).unwrap();
        prop_assert!(higher.max_residual <= lower.max_residual);
        prop_assert!(!lower.holds || higher.holds);
    }

    #[test]
    fn symmetric_truncation_is_strict(b in 0.01..8.0f64, t in -20.0..20.0f64) {
        let d = TruncatedGaussian::standard(-b, b).unwrap();
        let p = d.variance_proxy();
        prop_assert!(p.is_strict);
        prop_assert!(rel(p.variance_proxy, p.variance) < 1e-12);
        let (up, down) = (d.log_centered_mgf(t), d.log_centered_mgf(-t));
        prop_assert!((up - down).abs() <= 1e-12 * up.abs().max(1e-300));
        prop_assert!(up >= 0.0);
    }

    #[test]
    fn log_cmgf_is_nonnegative(a in 0.0..8.0f64, w in 0.01..12.0f64, t in -30.0..30.0f64) {
        let d = TruncatedExponential::standard(a, a + w).unwrap();
        prop_assert!(d.log_centered_mgf(t) >= -1e-15);
        let g = TruncatedGaussian::standard(a - 4.0, a - 4.0 + w).unwrap();
        prop_assert!(g.log_centered_mgf(t) >= -1e-15);
    }
}
