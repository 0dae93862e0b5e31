//! Exponential distribution truncated to a subinterval of `[0, +inf]`.
//!
//! Every formula is written in terms of the standardized width
//! `eps = lambda (b - a)` so that nothing overflows for wide intervals.

use crate::error::{domain, Error, Result};
use crate::lemmas::appendix::k_function;
use crate::special::ExtendedReal;
use crate::types::{CaseTag, ProxyResult, Truncated, TruncationInterval};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedExponential {
    lambda: f64,
    interval: TruncationInterval,
    alpha: f64,
    beta: f64,
}

/// `ln((e^z - 1) / z)`, zero at `z = 0`.
pub(crate) fn ln_expm1_ratio(z: f64) -> f64 {
    if z == 0.0 {
        0.0
    } else if z > 0.0 {
        z + (-(-z).exp_m1() / z).ln()
    } else {
        (z.exp_m1() / z).ln()
    }
}

/// `1 - eps / (e^eps - 1)`, the standardized mean minus the left endpoint.
fn mean_offset_from_width(eps: f64) -> f64 {
    if eps < 1e-3 {
        // eps/2 - eps^2/12 + eps^4/720
        let e2 = eps * eps;
        eps * (0.5 - eps / 12.0 + e2 * eps / 720.0)
    } else {
        1.0 - eps / eps.exp_m1()
    }
}

/// `sinh(u) - u`
fn sinh_minus_identity(u: f64) -> f64 {
    if u < 1.0 {
        let u2 = u * u;
        let mut term = u * u2 / 6.0;
        let mut sum = term;
        let mut k = 2.0;
        while term > 1e-18 * sum {
            term *= u2 / ((2.0 * k) * (2.0 * k + 1.0));
            sum += term;
            k += 1.0;
        }
        sum
    } else {
        u.sinh() - u
    }
}

/// `u / sinh(u)`, finite for all `u >= 0`.
fn identity_over_sinh(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else if u < 20.0 {
        u / u.sinh()
    } else {
        2.0 * u * (-u).exp() / (-(-2.0 * u).exp_m1())
    }
}

/// Standardized variance `1 - (u / sinh u)^2` with `u = eps / 2`.
pub(crate) fn standardized_variance(eps: f64) -> f64 {
    let u = 0.5 * eps;
    let x = identity_over_sinh(u);
    let one_minus_x = if u < 20.0 {
        sinh_minus_identity(u) / u.sinh()
    } else {
        1.0 - x
    };
    one_minus_x * (1.0 + x)
}

/// Standardized proxy `u coth(u) - 1` with `u = eps / 2`.
pub(crate) fn standardized_proxy(eps: f64) -> f64 {
    let u = 0.5 * eps;
    if u < 2.0 {
        // u cosh u - sinh u = sum_{k>=1} 2k u^(2k+1) / (2k+1)!
        let u2 = u * u;
        let mut power_over_fact = u * u2 / 6.0;
        let mut sum = 2.0 * power_over_fact;
        let mut k = 2.0;
        loop {
            power_over_fact *= u2 / ((2.0 * k) * (2.0 * k + 1.0));
            let term = 2.0 * k * power_over_fact;
            sum += term;
            if term <= 1e-18 * sum {
                break;
            }
            k += 1.0;
        }
        sum / u.sinh()
    } else {
        u / u.tanh() - 1.0
    }
}

/// Standardized `proxy - variance = K(eps) / (8 sinh^2(eps / 2))`.
pub(crate) fn standardized_gap(eps: f64) -> f64 {
    if eps <= 10.0 {
        let s = (0.5 * eps).sinh();
        k_function(eps) / (8.0 * s * s)
    } else {
        let q = (-eps).exp();
        let num = (eps - 4.0) + (2.0 * eps * eps + 8.0) * q - (eps + 4.0) * q * q;
        let den = 1.0 - q;
        num / (2.0 * den * den)
    }
}

impl TruncatedExponential {
    pub fn new(lambda: f64, interval: TruncationInterval) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(domain(format!("lambda must be positive and finite, got {lambda}")));
        }
        match interval.lower() {
            ExtendedReal::Finite(a) if a >= 0.0 => {}
            lower => {
                return Err(domain(format!(
                    "exponential truncation needs a finite lower endpoint >= 0, got {lower}"
                )))
            }
        }
        let alpha = lambda * interval.lower().to_f64();
        let beta = lambda * interval.upper().to_f64();
        if !(alpha < beta) {
            return Err(domain(format!(
                "standardized interval ({alpha}, {beta}) is empty at this precision"
            )));
        }
        Ok(Self {
            lambda,
            interval,
            alpha,
            beta,
        })
    }

    /// Unit-rate exponential truncated to `(alpha, beta)`.
    pub fn standard(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(1.0, TruncationInterval::from_f64(alpha, beta)?)
    }

    pub fn standardized(&self) -> Self {
        Self::standard(self.alpha, self.beta).expect("validated at construction")
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn interval(&self) -> TruncationInterval {
        self.interval
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> ExtendedReal {
        ExtendedReal::new(self.beta).expect("beta is never NaN")
    }

    /// Standardized width `beta - alpha`, possibly infinite.
    pub fn width(&self) -> f64 {
        self.beta - self.alpha
    }

    fn require_bounded(&self) -> Result<f64> {
        if self.beta.is_finite() {
            Ok(self.width())
        } else {
            Err(Error::NotSubGaussian(format!(
                "exponential truncated to {} has an unbounded right tail; b must be finite",
                self.interval
            )))
        }
    }

    /// Standardized mean `E[Y]` of the unit-rate copy.
    pub fn standardized_mean(&self) -> f64 {
        let eps = self.width();
        if eps.is_infinite() {
            self.alpha + 1.0
        } else {
            self.alpha + mean_offset_from_width(eps)
        }
    }

    /// Closed-form optimal variance proxy; fails with [`Error::NotSubGaussian`] when `b = +inf`.
    pub fn variance_proxy(&self) -> Result<ProxyResult> {
        let eps = self.require_bounded()?;
        let l2 = self.lambda * self.lambda;
        Ok(ProxyResult {
            variance_proxy: standardized_proxy(eps) / l2,
            variance: standardized_variance(eps) / l2,
            is_strict: false,
            case_tag: CaseTag::ExponentialFinite,
        })
    }

    /// `proxy - variance` from the `K` identity; always positive.
    pub fn strictness_gap(&self) -> Result<f64> {
        let eps = self.require_bounded()?;
        Ok(standardized_gap(eps) / (self.lambda * self.lambda))
    }
}

impl Truncated for TruncatedExponential {
    fn density(&self, x: f64) -> f64 {
        if !self.interval.contains(x) {
            return 0.0;
        }
        let a = self.interval.lower().to_f64();
        let eps = self.width();
        self.lambda * (-self.lambda * (x - a)).exp() / -(-eps).exp_m1()
    }

    fn mean(&self) -> f64 {
        self.standardized_mean() / self.lambda
    }

    /// Fails for `b = +inf`: that variable is not sub-Gaussian and the proxy pipeline needs a finite `b`.
    fn variance(&self) -> Result<f64> {
        let eps = self
            .require_bounded()
            .map_err(|_| domain("variance requested for an exponential with b = +inf"))?;
        Ok(standardized_variance(eps) / (self.lambda * self.lambda))
    }

    fn log_centered_mgf(&self, theta: f64) -> f64 {
        if theta == 0.0 {
            return 0.0;
        }
        let t = theta / self.lambda;
        let m = self.standardized_mean();
        let eps = self.width();
        if eps.is_infinite() {
            return if t < 1.0 {
                t * (self.alpha - m) - (-t).ln_1p()
            } else {
                f64::INFINITY
            };
        }
        t * (self.alpha - m) + eps.ln() + ln_expm1_ratio((t - 1.0) * eps) - (-(-eps).exp_m1()).ln()
    }

    fn support(&self) -> (f64, f64) {
        (self.interval.lower().to_f64(), self.interval.upper().to_f64())
    }

    fn quantile(&self, u: f64) -> f64 {
        let a = self.interval.lower().to_f64();
        let b = self.interval.upper().to_f64();
        let u = u.clamp(0.0, 1.0);
        let x = a - (u * (-self.width()).exp_m1()).ln_1p() / self.lambda;
        x.clamp(a, b)
    }
}
