use std::fmt;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::special::ExtendedReal;

/// Open interval `(lower, upper)` with `lower < upper`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationInterval {
    lower: ExtendedReal,
    upper: ExtendedReal,
}

impl TruncationInterval {
    pub fn new(lower: ExtendedReal, upper: ExtendedReal) -> Result<Self> {
        if lower == ExtendedReal::PosInf || upper == ExtendedReal::NegInf || lower >= upper {
            return Err(domain(format!(
                "truncation interval needs lower < upper, got ({lower}, {upper})"
            )));
        }
        Ok(Self { lower, upper })
    }

    /// Builds an interval from `f64` endpoints, accepting IEEE infinities.
    pub fn from_f64(lower: f64, upper: f64) -> Result<Self> {
        Self::new(ExtendedReal::new(lower)?, ExtendedReal::new(upper)?)
    }

    pub fn full() -> Self {
        Self {
            lower: ExtendedReal::NegInf,
            upper: ExtendedReal::PosInf,
        }
    }

    pub fn lower(&self) -> ExtendedReal {
        self.lower
    }

    pub fn upper(&self) -> ExtendedReal {
        self.upper
    }

    pub fn is_bounded(&self) -> bool {
        self.lower.is_finite() && self.upper.is_finite()
    }

    /// `(upper - lower)^2 / 4`, the Hoeffding proxy; infinite for unbounded intervals.
    pub fn hoeffding_bound(&self) -> f64 {
        let w = self.upper.to_f64() - self.lower.to_f64();
        0.25 * w * w
    }

    /// Closed-interval membership; densities are evaluated at finite endpoints too.
    pub fn contains(&self, x: f64) -> bool {
        x >= self.lower.to_f64() && x <= self.upper.to_f64()
    }
}

impl fmt::Display for TruncationInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lower, self.upper)
    }
}

/// Which closed form produced a [`ProxyResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseTag {
    /// Gaussian, both endpoints finite and not symmetric about the mean.
    AsymmetricFinite,
    /// Gaussian, both endpoints finite and symmetric about the mean.
    SymmetricFinite,
    /// Gaussian with exactly one infinite endpoint.
    SemiInfinite,
    /// Gaussian with no truncation at all.
    Untruncated,
    /// Exponential truncated to a bounded interval.
    ExponentialFinite,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::AsymmetricFinite => "asymmetric-finite",
            Self::SymmetricFinite => "symmetric-finite",
            Self::SemiInfinite => "semi-infinite",
            Self::Untruncated => "untruncated",
            Self::ExponentialFinite => "exponential-finite",
        })
    }
}

/// Optimal variance proxy together with the variance it is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProxyResult {
    pub variance_proxy: f64,
    pub variance: f64,
    /// True when the proxy equals the variance; decided by the case, not by comparing floats.
    pub is_strict: bool,
    pub case_tag: CaseTag,
}

impl ProxyResult {
    /// `variance_proxy - variance`, with values below `1e-14` reported as zero.
    pub fn gap(&self) -> f64 {
        let g = self.variance_proxy - self.variance;
        if g < 1e-14 {
            0.0
        } else {
            g
        }
    }
}

/// A univariate distribution obtained by truncating a parent to an interval.
pub trait Truncated {
    fn density(&self, x: f64) -> f64;

    fn mean(&self) -> f64;

    fn variance(&self) -> Result<f64>;

    /// `ln E[exp(theta (X - E X))]`; `+inf` where the MGF diverges.
    fn log_centered_mgf(&self, theta: f64) -> f64;

    /// Endpoints of the support as `f64`, infinities included.
    fn support(&self) -> (f64, f64);

    /// Inverse CDF of the truncated law, for `u` in `[0, 1]`.
    fn quantile(&self, u: f64) -> f64;
}
