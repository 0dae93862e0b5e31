//! Functions of the exponential optimality argument.
//!
//! For `Y` a unit-rate exponential truncated to `(alpha, beta)` with mean `m`,
//! `g(theta) = E[exp(theta (Y - m))] - exp(s^2 theta^2 / 2)` and `G` is `g`
//! rescaled by the positive factor `(e^beta - e^alpha) exp(-s^2 theta^2 / 2)`.

use crate::error::{domain, Result};
use crate::lemmas::appendix::AppendixFunction;
use crate::truncated_exponential::{ln_expm1_ratio, standardized_proxy, standardized_variance, TruncatedExponential};
use crate::types::Truncated;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpFrame {
    alpha: f64,
    beta: f64,
    s: f64,
    mean: f64,
    dist: TruncatedExponential,
}

/// Lower bound, both roots of the discriminant in `s^2` (as `s`), and `delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpBounds {
    pub s_inf: f64,
    pub s1: f64,
    pub s2: f64,
    pub delta: f64,
}

impl ExpFrame {
    pub fn new(alpha: f64, beta: f64, s: f64) -> Result<Self> {
        if !(alpha >= 0.0 && beta.is_finite() && alpha < beta) {
            return Err(domain(format!("frame needs 0 <= alpha < beta < inf, got ({alpha}, {beta})")));
        }
        if !(s > 0.0 && s.is_finite()) {
            return Err(domain(format!("s must be positive, got {s}")));
        }
        let dist = TruncatedExponential::standard(alpha, beta)?;
        Ok(Self {
            alpha,
            beta,
            s,
            mean: dist.standardized_mean(),
            dist,
        })
    }

    /// Frame at the closed-form optimal `s`.
    pub fn optimal(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(alpha, beta, standardized_proxy(beta - alpha).sqrt())
    }

    pub fn with_s(&self, s: f64) -> Result<Self> {
        Self::new(self.alpha, self.beta, s)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn width(&self) -> f64 {
        self.beta - self.alpha
    }

    pub fn distribution(&self) -> &TruncatedExponential {
        &self.dist
    }

    pub fn g(&self, theta: f64) -> f64 {
        self.dist.log_centered_mgf(theta).exp() - (0.5 * self.s * self.s * theta * theta).exp()
    }

    /// `e^alpha - e^beta + eps exp(-s^2 theta^2/2 - m theta + alpha theta + beta) E(eps (theta - 1))`
    /// with `E(z) = (e^z - 1) / z`; smooth through `theta = 1`.
    pub fn big_g(&self, theta: f64) -> f64 {
        let eps = self.width();
        let exponent = -0.5 * self.s * self.s * theta * theta - self.mean * theta
            + self.alpha * theta
            + self.beta
            + ln_expm1_ratio(eps * (theta - 1.0));
        self.alpha.exp() - self.beta.exp() + eps * exponent.exp()
    }

    /// `G / (e^beta - e^alpha)`, computed as `expm1` of the log residual.
    pub fn big_g_normalized(&self, theta: f64) -> f64 {
        (self.dist.log_centered_mgf(theta) - 0.5 * self.s * self.s * theta * theta).exp_m1()
    }

    /// The factor `h` in `G'(theta) = e^{alpha theta + beta - s^2 theta^2/2 - m theta} h(theta) / (theta - 1)^2`.
    pub fn h(&self, theta: f64) -> f64 {
        let (s2, m, a, b) = (self.s * self.s, self.mean, self.alpha, self.beta);
        (-s2 * theta * theta + (s2 + b - m) * theta + m - b - 1.0) * ((theta - 1.0) * self.width()).exp()
            + s2 * theta * theta
            - (s2 + a - m) * theta
            - m
            + a
            + 1.0
    }

    /// `G'` from the factorization through `h`; undefined at `theta = 1`.
    pub fn big_g_prime_factored(&self, theta: f64) -> f64 {
        let exponent = self.alpha * theta + self.beta - 0.5 * self.s * self.s * theta * theta - self.mean * theta;
        exponent.exp() * self.h(theta) / (theta - 1.0).powi(2)
    }

    /// Coefficients `(A, B, C)` of the quadratic `P(theta) = A theta^2 + B theta + C`.
    pub fn p_coefficients(&self) -> (f64, f64, f64) {
        let (s2, m, a, b) = (self.s * self.s, self.mean, self.alpha, self.beta);
        let e = self.width();
        let big_a = -s2 * e * e;
        let big_b = (a - b) * (a - b + 6.0) * s2 + e * e * (b - m);
        let big_c = 3.0 * (e - 2.0) * s2 + e * ((e - 3.0) * m + a * b - b * b + a + 2.0 * b);
        (big_a, big_b, big_c)
    }

    pub fn p(&self, theta: f64) -> f64 {
        let (a, b, c) = self.p_coefficients();
        (a * theta + b) * theta + c
    }

    /// `h''' = eps e^{(theta - 1) eps} P(theta)`
    pub fn h_third(&self, theta: f64) -> f64 {
        let e = self.width();
        e * ((theta - 1.0) * e).exp() * self.p(theta)
    }

    /// `B^2 - 4AC`
    pub fn discriminant(&self) -> f64 {
        let (a, b, c) = self.p_coefficients();
        b * b - 4.0 * a * c
    }

    /// The same discriminant written as a quadratic in `s^2`.
    pub fn discriminant_in_s2(&self) -> f64 {
        let e2 = self.width().powi(2);
        let s2 = self.s * self.s;
        let d = self.beta - self.mean;
        e2 * ((e2 + 12.0) * s2 * s2 - 2.0 * e2 * (d + 2.0) * s2 + e2 * d * d)
    }

    /// `s_inf`, `s1`, `s2`, `delta`; a domain error if the radicand of `delta` is negative.
    pub fn bounds(&self) -> Result<ExpBounds> {
        let e = self.width();
        let d = self.beta - self.mean;
        let radicand = e * e * (d + 1.0) - 3.0 * d * d;
        if radicand < 0.0 {
            return Err(domain(format!(
                "negative radicand {radicand:e} in delta for (alpha, beta) = ({}, {})",
                self.alpha, self.beta
            )));
        }
        let delta = 2.0 * e * radicand.sqrt();
        let base = e * e * (d + 2.0);
        let den = e * e + 12.0;
        Ok(ExpBounds {
            s_inf: standardized_variance(e).sqrt(),
            s1: ((base - delta) / den).sqrt(),
            s2: ((base + delta) / den).sqrt(),
            delta,
        })
    }
}

/// `g'''(0)` at `s = s_inf`, equal to `P(eps) / (e^eps - 1)^3`; independent of `alpha`.
pub fn exp_g3_at_zero(alpha: f64, epsilon: f64) -> Result<f64> {
    if !(alpha >= 0.0) || !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(domain(format!("need alpha >= 0 and eps > 0, got ({alpha}, {epsilon})")));
    }
    let p = AppendixFunction::P.evaluate(epsilon)?;
    // (e^eps - 1)^3 = e^{3 eps} (1 - e^{-eps})^3
    let ln_den = 3.0 * (epsilon + (-(-epsilon).exp_m1()).ln());
    Ok(p.scaled * (p.ln_scale - ln_den).exp())
}
