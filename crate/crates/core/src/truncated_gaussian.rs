//! Normal distribution truncated to an interval.
//!
//! All quantities are computed for the standardized copy on `(alpha, beta)`
//! and rescaled by `mu` and `sigma`.

use crate::error::{domain, Result};
use crate::special::{
    ln_std_normal_cdf_diff, ln_std_normal_pdf, narrow_truncated_moments, pdf_diff_ratio, std_normal_cdf,
    std_normal_cdf_diff, std_normal_quantile, std_normal_sf,
    weighted_pdf_diff_ratio, ExtendedReal,
};
use crate::types::{CaseTag, ProxyResult, Truncated, TruncationInterval};

/// Below this `|alpha + beta|` the interval is treated as symmetric about the mean.
pub const SYMMETRY_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedGaussian {
    mu: f64,
    sigma: f64,
    interval: TruncationInterval,
    alpha: f64,
    beta: f64,
    ln_mass: f64,
}

impl TruncatedGaussian {
    pub fn new(mu: f64, sigma: f64, interval: TruncationInterval) -> Result<Self> {
        if !mu.is_finite() {
            return Err(domain(format!("mu must be finite, got {mu}")));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(domain(format!("sigma must be positive and finite, got {sigma}")));
        }
        let alpha = (interval.lower().to_f64() - mu) / sigma;
        let beta = (interval.upper().to_f64() - mu) / sigma;
        if !(alpha < beta) {
            return Err(domain(format!(
                "standardized interval ({alpha}, {beta}) is empty at this precision"
            )));
        }
        let ln_mass = ln_std_normal_cdf_diff(alpha, beta)?;
        if ln_mass == f64::NEG_INFINITY {
            return Err(domain(format!(
                "interval {interval} carries no probability mass under N({mu}, {sigma}^2)"
            )));
        }
        Ok(Self {
            mu,
            sigma,
            interval,
            alpha,
            beta,
            ln_mass,
        })
    }

    /// Standard normal truncated to `(alpha, beta)`.
    pub fn standard(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(0.0, 1.0, TruncationInterval::from_f64(alpha, beta)?)
    }

    /// The `mu = 0, sigma = 1` copy on `(alpha, beta)`.
    pub fn standardized(&self) -> Self {
        Self {
            mu: 0.0,
            sigma: 1.0,
            interval: TruncationInterval::from_f64(self.alpha, self.beta)
                .expect("alpha < beta was checked at construction"),
            ..*self
        }
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn interval(&self) -> TruncationInterval {
        self.interval
    }

    pub fn alpha(&self) -> ExtendedReal {
        ExtendedReal::new(self.alpha).expect("alpha is never NaN")
    }

    pub fn beta(&self) -> ExtendedReal {
        ExtendedReal::new(self.beta).expect("beta is never NaN")
    }

    /// Midpoint `(alpha + beta) / 2` of the standardized interval, when finite.
    pub fn theta0(&self) -> Option<f64> {
        (self.alpha.is_finite() && self.beta.is_finite()).then_some(0.5 * (self.alpha + self.beta))
    }

    /// `ln(Phi(beta) - Phi(alpha))`
    pub fn ln_mass(&self) -> f64 {
        self.ln_mass
    }

    /// Standardized mean shift `(phi(alpha) - phi(beta)) / (Phi(beta) - Phi(alpha))`.
    pub fn mean_shift(&self) -> f64 {
        match narrow_truncated_moments(self.alpha, self.beta) {
            Some((offset, _)) => 0.5 * (self.alpha + self.beta) + offset,
            None => pdf_diff_ratio(self.alpha, self.beta).expect("valid interval"),
        }
    }

    /// `mean_shift - theta0` for finite intervals.
    fn offset_from_midpoint(&self) -> f64 {
        match narrow_truncated_moments(self.alpha, self.beta) {
            Some((offset, _)) => offset,
            None => self.mean_shift() - 0.5 * (self.alpha + self.beta),
        }
    }

    fn is_symmetric(&self) -> bool {
        self.alpha.is_finite() && self.beta.is_finite() && (self.alpha + self.beta).abs() < SYMMETRY_THRESHOLD
    }

    /// `1 - 2 b phi(b) / (2 Phi(b) - 1)` for the half-width `b` of a symmetric interval.
    fn symmetric_variance(half_width: f64) -> f64 {
        let ln_mass = ln_std_normal_cdf_diff(-half_width, half_width).expect("positive width");
        1.0 - 2.0 * half_width * (ln_std_normal_pdf(half_width) - ln_mass).exp()
    }

    fn standardized_variance(&self) -> f64 {
        if self.is_symmetric() {
            return Self::symmetric_variance(0.5 * (self.beta - self.alpha));
        }
        if let Some((_, v)) = narrow_truncated_moments(self.alpha, self.beta) {
            return v;
        }
        let c = self.mean_shift();
        let d = weighted_pdf_diff_ratio(self.alpha, self.beta).expect("valid interval");
        1.0 - d - c * c
    }

    /// Closed-form optimal variance proxy.
    pub fn variance_proxy(&self) -> ProxyResult {
        let s2 = self.sigma * self.sigma;
        let variance = s2 * self.standardized_variance();
        let (standardized_proxy, is_strict, case_tag) =
            match (self.alpha.is_finite(), self.beta.is_finite()) {
                (false, false) => (1.0, true, CaseTag::Untruncated),
                (true, true) if self.is_symmetric() => (
                    Self::symmetric_variance(0.5 * (self.beta - self.alpha)),
                    true,
                    CaseTag::SymmetricFinite,
                ),
                (true, true) => (
                    // 1 - 2c / (alpha + beta), without the cancellation
                    -2.0 * self.offset_from_midpoint() / (self.alpha + self.beta),
                    false,
                    CaseTag::AsymmetricFinite,
                ),
                _ => (1.0, false, CaseTag::SemiInfinite),
            };
        ProxyResult {
            variance_proxy: s2 * standardized_proxy,
            variance,
            is_strict,
            case_tag,
        }
    }

    /// `variance_proxy - variance`, clamped to zero below `1e-14`.
    pub fn strictness_gap(&self) -> f64 {
        self.variance_proxy().gap()
    }
}

impl Truncated for TruncatedGaussian {
    fn density(&self, x: f64) -> f64 {
        if !self.interval.contains(x) {
            return 0.0;
        }
        let z = (x - self.mu) / self.sigma;
        (ln_std_normal_pdf(z) - self.ln_mass).exp() / self.sigma
    }

    fn mean(&self) -> f64 {
        self.mu + self.sigma * self.mean_shift()
    }

    fn variance(&self) -> Result<f64> {
        Ok(self.sigma * self.sigma * self.standardized_variance())
    }

    fn log_centered_mgf(&self, theta: f64) -> f64 {
        if theta == 0.0 {
            return 0.0;
        }
        let t = self.sigma * theta;
        let shifted = ln_std_normal_cdf_diff(self.alpha - t, self.beta - t).expect("valid interval");
        -t * self.mean_shift() + 0.5 * t * t + shifted - self.ln_mass
    }

    fn support(&self) -> (f64, f64) {
        (self.interval.lower().to_f64(), self.interval.upper().to_f64())
    }

    fn quantile(&self, u: f64) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        let z = if u <= 0.0 {
            a
        } else if u >= 1.0 {
            b
        } else if a >= 0.0 {
            // upper tail: Q(z) = Q(a) - u (Q(a) - Q(b))
            let qa = std_normal_sf(a);
            let q = qa - u * (qa - std_normal_sf(b));
            if q > 0.0 {
                -std_normal_quantile(q.min(0.5)).unwrap_or(a)
            } else {
                a
            }
        } else if b <= 0.0 {
            let pa = std_normal_cdf(a);
            let p = pa + u * (std_normal_cdf(b) - pa);
            if p > 0.0 {
                std_normal_quantile(p.min(0.5)).unwrap_or(b)
            } else {
                b
            }
        } else {
            let p = std_normal_cdf(a) + u * std_normal_cdf_diff(a, b).expect("valid interval");
            std_normal_quantile(p.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON)).unwrap_or(0.0)
        };
        let z = z.clamp(a, b);
        self.mu + self.sigma * z
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn rejects_bad_parameters() {
        let i = TruncationInterval::from_f64(-1.0, 1.0).unwrap();
        assert!(TruncatedGaussian::new(0.0, 0.0, i).is_err());
        assert!(TruncatedGaussian::new(0.0, -1.0, i).is_err());
        assert!(TruncatedGaussian::new(f64::NAN, 1.0, i).is_err());
        assert!(TruncationInterval::from_f64(1.0, 1.0).is_err());
    }

    #[test]
    fn untruncated_is_the_parent() {
        let d = TruncatedGaussian::new(2.0, 3.0, TruncationInterval::full()).unwrap();
        assert_eq!(d.mean(), 2.0);
        assert!((d.variance().unwrap() - 9.0).abs() < 1e-14);
        let p = d.variance_proxy();
        assert_eq!(p.variance_proxy, 9.0);
        assert!(p.is_strict);
        assert_eq!(p.case_tag, CaseTag::Untruncated);
    }

    #[test]
    fn symmetric_interval_mean_is_mu() {
        let d = TruncatedGaussian::new(3.0, 2.0, TruncationInterval::from_f64(1.0, 5.0).unwrap()).unwrap();
        assert!((d.mean() - 3.0).abs() < 1e-15);
        let p = d.variance_proxy();
        assert_eq!(p.case_tag, CaseTag::SymmetricFinite);
        assert_eq!(p.variance_proxy, p.variance);
    }

    #[test]
    fn semi_infinite_proxy_is_sigma_squared_and_not_strict() {
        let d = TruncatedGaussian::new(0.0, 1.5, TruncationInterval::from_f64(0.0, f64::INFINITY).unwrap()).unwrap();
        let p = d.variance_proxy();
        assert_eq!(p.variance_proxy, 2.25);
        assert!(!p.is_strict);
        assert_eq!(p.case_tag, CaseTag::SemiInfinite);
    }

    #[test]
    fn near_symmetric_branches_agree() {
        let sym = TruncatedGaussian::standard(-1.7, 1.7).unwrap().variance_proxy();
        let off = TruncatedGaussian::standard(-1.7, 1.7 + 2e-8).unwrap().variance_proxy();
        let inside = TruncatedGaussian::standard(-1.7, 1.7 + 5e-9).unwrap().variance_proxy();
        assert_eq!(off.case_tag, CaseTag::AsymmetricFinite);
        assert_eq!(inside.case_tag, CaseTag::SymmetricFinite);
        assert!(rel(off.variance_proxy, sym.variance_proxy) < 1e-7);
        assert!(rel(inside.variance_proxy, sym.variance_proxy) < 1e-8);
    }

    #[test]
    fn far_tail_truncation_is_finite() {
        let d = TruncatedGaussian::standard(40.0, 41.0).unwrap();
        let m = d.mean();
        assert!(m > 40.0 && m < 41.0);
        let v = d.variance().unwrap();
        // exponential-like tail with rate ~40: variance ~ 1/40^2
        assert!(v > 0.0 && v < 1e-3);
        assert!(d.log_centered_mgf(2.0).is_finite());
    }

    #[test]
    fn quantile_stays_in_support() {
        for &(a, b) in &[(-1.0, 4.0), (3.0, 9.0), (-9.0, -3.0), (0.0, f64::INFINITY)] {
            let d = TruncatedGaussian::standard(a, b).unwrap();
            for i in 0..=20 {
                let x = d.quantile(f64::from(i) / 20.0);
                assert!(x >= a && x <= b, "({a},{b}) u={i}/20 -> {x}");
            }
        }
    }
}
