//! Standard normal density, distribution function and quantile.
//!
//! Upper-tail probabilities come from `erfc` on `|x| <= 8` and from a
//! continued fraction for the Mills ratio beyond that, so differences
//! `Phi(hi) - Phi(lo)` keep their relative accuracy far out in the tails.
//! Every probability also has a log-space twin for arguments where the
//! linear value would underflow.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::quadrature::{GAUSS10_NODES, GAUSS10_WEIGHTS};

/// `1 / sqrt(2 pi)`
pub const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
/// `ln sqrt(2 pi)`
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

const TAIL_CUTOFF: f64 = 8.0;
const MILLS_CF_TERMS: u32 = 80;

/// A real number or one of the two infinities. NaN is not representable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtendedReal {
    /// Wraps an `f64`, mapping IEEE infinities onto the infinite variants.
    pub fn new(x: f64) -> Result<Self> {
        if x.is_nan() {
            Err(domain("NaN is not an extended real"))
        } else if x == f64::INFINITY {
            Ok(Self::PosInf)
        } else if x == f64::NEG_INFINITY {
            Ok(Self::NegInf)
        } else {
            Ok(Self::Finite(x))
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Self::NegInf => f64::NEG_INFINITY,
            Self::Finite(x) => x,
            Self::PosInf => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Self::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Self::Finite(_))
    }

    /// `self * k + shift` for a positive finite scale `k`.
    pub fn affine(self, k: f64, shift: f64) -> Self {
        match self {
            Self::Finite(x) => Self::Finite(x * k + shift),
            other => other,
        }
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.to_f64().partial_cmp(&other.to_f64())
    }
}

impl TryFrom<f64> for ExtendedReal {
    type Error = Error;

    fn try_from(x: f64) -> Result<Self> {
        Self::new(x)
    }
}

impl FromStr for ExtendedReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "-inf" | "-infinity" => Ok(Self::NegInf),
            "inf" | "+inf" | "infinity" | "+infinity" => Ok(Self::PosInf),
            t => {
                let x: f64 = t
                    .parse()
                    .map_err(|_| domain(format!("cannot parse {s:?} as an extended real")))?;
                Self::new(x)
            }
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NegInf => f.write_str("-inf"),
            Self::PosInf => f.write_str("+inf"),
            Self::Finite(x) => write!(f, "{x}"),
        }
    }
}

/// Finite values serialize as numbers, infinities as the strings `"-inf"` / `"+inf"`.
impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(x) => serializer.serialize_f64(*x),
            other => serializer.serialize_str(&other.to_string()),
        }
    }
}

pub fn std_normal_pdf(x: f64) -> f64 {
    let sq = x * x;
    if sq == f64::INFINITY {
        return 0.0;
    }
    // rounding error of x^2 matters once x^2/2 is large
    let err = x.mul_add(x, -sq);
    FRAC_1_SQRT_2PI * (-0.5 * sq).exp() * (-0.5 * err).exp()
}

pub fn ln_std_normal_pdf(x: f64) -> f64 {
    -0.5 * x * x - LN_SQRT_2PI
}

/// Mills ratio `Q(x) / phi(x)` for `x >= 0`.
pub fn mills_ratio(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x == f64::INFINITY {
        return 0.0;
    }
    if x < TAIL_CUTOFF {
        return 0.5 * libm::erfc(x * std::f64::consts::FRAC_1_SQRT_2) / std_normal_pdf(x);
    }
    // Laplace continued fraction 1/(x + 1/(x + 2/(x + 3/(x + ...)))), evaluated backwards.
    let mut t = x;
    for k in (1..=MILLS_CF_TERMS).rev() {
        t = x + f64::from(k) / t;
    }
    1.0 / t
}

/// Upper tail `Q(x) = 1 - Phi(x)`.
pub fn std_normal_sf(x: f64) -> f64 {
    if x.is_nan() {
        f64::NAN
    } else if x > TAIL_CUTOFF {
        std_normal_pdf(x) * mills_ratio(x)
    } else {
        0.5 * libm::erfc(x * std::f64::consts::FRAC_1_SQRT_2)
    }
}

/// `ln Q(x)`, finite for every finite `x`.
pub fn ln_std_normal_sf(x: f64) -> f64 {
    if x == f64::INFINITY {
        f64::NEG_INFINITY
    } else if x > TAIL_CUTOFF {
        ln_std_normal_pdf(x) + mills_ratio(x).ln()
    } else if x >= -TAIL_CUTOFF {
        std_normal_sf(x).ln()
    } else {
        (-std_normal_sf(-x)).ln_1p()
    }
}

/// `Phi(x)`, with `Phi(-inf) = 0` and `Phi(+inf) = 1`.
pub fn std_normal_cdf(x: f64) -> f64 {
    std_normal_sf(-x)
}

pub fn ln_std_normal_cdf(x: f64) -> f64 {
    ln_std_normal_sf(-x)
}

fn check_interval(lo: f64, hi: f64) -> Result<()> {
    if lo.is_nan() || hi.is_nan() {
        return Err(domain("NaN endpoint"));
    }
    if lo >= hi {
        return Err(domain(format!("empty interval: lo = {lo} >= hi = {hi}")));
    }
    Ok(())
}

/// For short intervals `int_lo^hi phi` is a smooth, nearly flat integral;
/// returns `(ln phi(mid), ln of the integral of phi(mid + t)/phi(mid))`.
fn narrow_mass_parts(lo: f64, hi: f64) -> Option<(f64, f64)> {
    if !(lo.is_finite() && hi.is_finite()) {
        return None;
    }
    let scale = lo.abs().max(hi.abs()).max(1.0);
    if (hi - lo) * scale > 1.0 {
        return None;
    }
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut sum = 0.0;
    for (&x, &w) in GAUSS10_NODES.iter().zip(GAUSS10_WEIGHTS.iter()) {
        let t = half * x;
        sum += w * ((-mid * t - 0.5 * t * t).exp() + (mid * t - 0.5 * t * t).exp());
    }
    Some((ln_std_normal_pdf(mid), (half * sum).ln()))
}

/// Offset of the mean from the midpoint, and the variance, of the standard normal
/// truncated to a short `(lo, hi)`, from Gauss-Legendre moments about the
/// midpoint. `None` outside the narrow regime.
pub fn narrow_truncated_moments(lo: f64, hi: f64) -> Option<(f64, f64)> {
    narrow_mass_parts(lo, hi)?;
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let (mut m0, mut m1, mut m2) = (0.0, 0.0, 0.0);
    for (&x, &w) in GAUSS10_NODES.iter().zip(GAUSS10_WEIGHTS.iter()) {
        let t = half * x;
        let (up, down) = ((-mid * t - 0.5 * t * t).exp(), (mid * t - 0.5 * t * t).exp());
        m0 += w * (up + down);
        m1 += w * t * (up - down);
        m2 += w * t * t * (up + down);
    }
    let shift = m1 / m0;
    Some((shift, m2 / m0 - shift * shift))
}

/// `Phi(hi) - Phi(lo)` without catastrophic cancellation. Errors if `lo >= hi`.
pub fn std_normal_cdf_diff(lo: f64, hi: f64) -> Result<f64> {
    check_interval(lo, hi)?;
    if let Some((ln_peak, ln_rel)) = narrow_mass_parts(lo, hi) {
        return Ok((ln_peak + ln_rel).exp());
    }
    let mass = if lo >= 0.0 {
        std_normal_sf(lo) - std_normal_sf(hi)
    } else if hi <= 0.0 {
        std_normal_sf(-hi) - std_normal_sf(-lo)
    } else {
        1.0 - std_normal_sf(hi) - std_normal_sf(-lo)
    };
    Ok(mass)
}

/// `ln(Phi(hi) - Phi(lo))`, usable where the mass itself underflows.
pub fn ln_std_normal_cdf_diff(lo: f64, hi: f64) -> Result<f64> {
    check_interval(lo, hi)?;
    if let Some((ln_peak, ln_rel)) = narrow_mass_parts(lo, hi) {
        return Ok(ln_peak + ln_rel);
    }
    // Same-sign intervals are written as a difference of upper tails Q(near) - Q(far).
    let (near, far) = if lo >= 0.0 {
        (lo, hi)
    } else if hi <= 0.0 {
        (-hi, -lo)
    } else {
        return Ok((-(std_normal_sf(hi) + std_normal_sf(-lo))).ln_1p());
    };
    let ln_near = ln_std_normal_sf(near);
    if far == f64::INFINITY {
        return Ok(ln_near);
    }
    let ln_far = ln_std_normal_sf(far);
    Ok(ln_near + (-(ln_far - ln_near).exp_m1()).ln())
}

/// `(phi(lo) / M, phi(hi) / M)` with `M = Phi(hi) - Phi(lo)` and `phi(+-inf) = 0`.
///
/// Far-tail intervals avoid the large logarithms of `phi` and `M`, whose
/// rounding would otherwise leak into the ratios.
fn endpoint_pdf_ratios(lo: f64, hi: f64) -> Result<(f64, f64)> {
    check_interval(lo, hi)?;
    let over = |x: f64, f: &dyn Fn(f64) -> f64| if x.is_infinite() { 0.0 } else { f(x) };
    if let Some((_, ln_rel)) = narrow_mass_parts(lo, hi) {
        let mid = 0.5 * (lo + hi);
        let at = |x: f64| (-0.5 * (x - mid) * (x + mid) - ln_rel).exp();
        return Ok((at(lo), at(hi)));
    }
    if lo >= 0.0 || hi <= 0.0 {
        // reflect so that the interval is (near, far) in the upper tail
        let (near, far) = if lo >= 0.0 { (lo, hi) } else { (-hi, -lo) };
        let r = if far.is_infinite() {
            0.0
        } else {
            (-0.5 * (far - near) * (far + near)).exp()
        };
        let scaled_mass = mills_ratio(near) - if r == 0.0 { 0.0 } else { r * mills_ratio(far) };
        let at_near = 1.0 / scaled_mass;
        let at_far = if far.is_infinite() { 0.0 } else { r / scaled_mass };
        return Ok(if lo >= 0.0 { (at_near, at_far) } else { (at_far, at_near) });
    }
    let ln_mass = ln_std_normal_cdf_diff(lo, hi)?;
    let f = |x: f64| (ln_std_normal_pdf(x) - ln_mass).exp();
    Ok((over(lo, &f), over(hi, &f)))
}

/// `(phi(lo) - phi(hi)) / (Phi(hi) - Phi(lo))`, the standardized mean shift of a
/// normal truncated to `(lo, hi)`. Accurate near `lo = -hi`, where it vanishes.
pub fn pdf_diff_ratio(lo: f64, hi: f64) -> Result<f64> {
    let (at_lo, at_hi) = endpoint_pdf_ratios(lo, hi)?;
    if lo.is_infinite() || hi.is_infinite() {
        return Ok(at_lo - at_hi);
    }
    // phi(lo) - phi(hi) = phi(x) * (1 - exp((x^2 - y^2)/2)) with |x| <= |y|.
    Ok(if lo.abs() <= hi.abs() {
        -(0.5 * (lo - hi) * (lo + hi)).exp_m1() * at_lo
    } else {
        (0.5 * (hi - lo) * (hi + lo)).exp_m1() * at_hi
    })
}

/// `(hi phi(hi) - lo phi(lo)) / (Phi(hi) - Phi(lo))` with `x phi(x) -> 0` at infinity.
pub fn weighted_pdf_diff_ratio(lo: f64, hi: f64) -> Result<f64> {
    let (at_lo, at_hi) = endpoint_pdf_ratios(lo, hi)?;
    let term = |x: f64, r: f64| if x.is_infinite() { 0.0 } else { x * r };
    Ok(term(hi, at_hi) - term(lo, at_lo))
}

/// Inverse of `Phi` on `(0, 1)`, accurate to a few ulps of the argument.
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain(format!("quantile needs p in (0, 1), got {p}")));
    }
    if p > 0.5 {
        // 1 - p is exact for p >= 0.5
        Ok(-lower_quantile(1.0 - p))
    } else {
        Ok(lower_quantile(p))
    }
}

/// Quantile for `p <= 0.5`: Acklam's rational approximation polished by Halley steps.
fn lower_quantile(p: f64) -> f64 {
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

    let mut x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    };
    for _ in 0..2 {
        let err = std_normal_cdf(x) - p;
        let u = err / std_normal_pdf(x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    x
}

/// `F(theta) = Phi(beta - theta) - Phi(-beta - theta)` and its first three
/// theta-derivatives, for the interval `(-beta, beta)` shifted by `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FDerivatives {
    pub f: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

pub fn gauss_f_derivatives(beta: f64, theta: f64) -> Result<FDerivatives> {
    if !(beta > 0.0) || !theta.is_finite() {
        return Err(domain(format!(
            "F-derivatives need beta > 0 and finite theta, got beta = {beta}, theta = {theta}"
        )));
    }
    let plus = std_normal_pdf(theta + beta);
    let minus = std_normal_pdf(theta - beta);
    Ok(FDerivatives {
        f: std_normal_cdf_diff(-beta - theta, beta - theta)?,
        d1: plus - minus,
        d2: -(beta + theta) * plus + (theta - beta) * minus,
        d3: plus * ((beta + theta).powi(2) - 1.0) + minus * (1.0 - (beta - theta).powi(2)),
    })
}
