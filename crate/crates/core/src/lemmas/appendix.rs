//! Four elementary functions whose positivity on `(0, +inf)` closes the proofs.
//!
//! Near zero each one is a small difference of large exponentials, so it is
//! summed from its Taylor series (all coefficients positive from the first
//! non-vanishing one). Far out the dominant exponential is factored out and
//! the value is carried as `scaled * exp(ln_scale)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AppendixFunction {
    /// `K(e) = 2e sinh e - 8 cosh e + 2e^2 + 8`
    K,
    /// `P(e) = 2e^{3e} - (e^3 + 6)e^{2e} + (6 - e^3)e^e - 2`
    P,
    /// `R(s) = 20s sinh s cosh^2 s - 21 cosh^3 s - 18s^2 cosh s + 19s sinh s + 21 cosh s`
    R,
    /// `B0(s) = sinh 5s - 5 sinh 3s + 10 sinh s + 4s^3 cosh s - 4s^3 cosh 3s`
    B0,
}

impl AppendixFunction {
    pub const ALL: [AppendixFunction; 4] = [Self::K, Self::P, Self::R, Self::B0];

    pub fn name(self) -> &'static str {
        match self {
            Self::K => "K",
            Self::P => "P",
            Self::R => "R",
            Self::B0 => "B0",
        }
    }

    /// Value as `scaled * exp(ln_scale)`, with the sum of absolute terms for margin checks.
    pub fn evaluate(self, x: f64) -> Result<ScaledValue> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(domain(format!("{} needs a finite x > 0, got {x}", self.name())));
        }
        Ok(match self {
            Self::K => eval_k(x),
            Self::P => eval_p(x),
            Self::R => eval_r(x),
            Self::B0 => eval_b0(x),
        })
    }

    pub fn eval(self, x: f64) -> Result<f64> {
        Ok(self.evaluate(x)?.value())
    }

    /// Natural log of the value; a domain error if the value is not positive.
    pub fn ln_eval(self, x: f64) -> Result<f64> {
        let v = self.evaluate(x)?;
        if v.scaled > 0.0 {
            Ok(v.scaled.ln() + v.ln_scale)
        } else {
            Err(domain(format!("{}({x}) is not positive", self.name())))
        }
    }
}

impl FromStr for AppendixFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "K" | "k" => Ok(Self::K),
            "P" | "p" => Ok(Self::P),
            "R" | "r" => Ok(Self::R),
            "B0" | "b0" => Ok(Self::B0),
            other => Err(Error::UnknownFunction(other.to_string())),
        }
    }
}

impl fmt::Display for AppendixFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `scaled * exp(ln_scale)`; `magnitude` bounds the cancellation in `scaled`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue {
    pub scaled: f64,
    pub ln_scale: f64,
    pub magnitude: f64,
}

impl ScaledValue {
    fn plain(value: f64, magnitude: f64) -> Self {
        Self {
            scaled: value,
            ln_scale: 0.0,
            magnitude,
        }
    }

    pub fn value(&self) -> f64 {
        self.scaled * self.ln_scale.exp()
    }

    /// `scaled / magnitude`; a sign check passes when this exceeds the margin.
    pub fn relative_margin(&self) -> f64 {
        self.scaled / self.magnitude
    }
}

/// Sums `sum_n coef(n) x^n / n!` style series given term generator `term(n)`,
/// stopping once terms are negligible.
fn sum_series(mut term: impl FnMut(u32) -> f64, start: u32) -> f64 {
    let mut sum = 0.0;
    let mut n = start;
    loop {
        let t = term(n);
        sum += t;
        if n > start + 8 && t.abs() <= 1e-17 * sum.abs() {
            return sum;
        }
        n += 1;
        if n > 400 {
            return sum;
        }
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `x^n / n!` computed as a running product to stay finite.
fn power_over_factorial(x: f64, n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * x / f64::from(k))
}

const SERIES_LIMIT_K: f64 = 10.0;
const SERIES_LIMIT_P: f64 = 6.0;
const SERIES_LIMIT_R: f64 = 6.0;
const SERIES_LIMIT_B0: f64 = 3.0;

/// `K(eps)`, always evaluated without overflow; used directly by the exponential gap.
pub fn k_function(eps: f64) -> f64 {
    eval_k(eps).value()
}

fn eval_k(e: f64) -> ScaledValue {
    if e <= SERIES_LIMIT_K {
        // sum_{m>=3} (4m - 8) e^{2m} / (2m)!
        let v = sum_series(|m| f64::from(4 * m - 8) * power_over_factorial(e, 2 * m), 3);
        return ScaledValue::plain(v, v);
    }
    // K e^{-e} = e (1 - e^{-2e}) - 4 (1 + e^{-2e}) + (2e^2 + 8) e^{-e}
    let q = (-e).exp();
    let terms = [e, -e * q * q, -4.0, -4.0 * q * q, (2.0 * e * e + 8.0) * q];
    ScaledValue {
        scaled: terms.iter().sum(),
        ln_scale: e,
        magnitude: terms.iter().map(|t| t.abs()).sum(),
    }
}

/// Coefficient of `e^n` in `P(e)`, zero below `n = 7`.
fn p_coefficient(n: u32) -> f64 {
    let nf = f64::from(n);
    let first = (2.0 * 3f64.powf(nf) - 6.0 * 2f64.powf(nf) + 6.0) / factorial(n);
    let second = (2f64.powf(nf - 3.0) + 1.0) / factorial(n - 3);
    first - second
}

fn eval_p(e: f64) -> ScaledValue {
    if e <= SERIES_LIMIT_P {
        let v = sum_series(|n| p_coefficient(n) * e.powi(n as i32), 7);
        return ScaledValue::plain(v, v);
    }
    // P e^{-3e} = 2 - (e^3 + 6) e^{-e} + (6 - e^3) e^{-2e} - 2 e^{-3e}
    let q = (-e).exp();
    let e3 = e * e * e;
    let terms = [2.0, -(e3 + 6.0) * q, (6.0 - e3) * q * q, -2.0 * q * q * q];
    ScaledValue {
        scaled: terms.iter().sum(),
        ln_scale: 3.0 * e,
        magnitude: terms.iter().map(|t| t.abs()).sum(),
    }
}

fn eval_r(s: f64) -> ScaledValue {
    if s <= SERIES_LIMIT_R {
        // R = 5s sinh 3s + 24s sinh s - (21/4) cosh 3s + (21/4) cosh s - 18 s^2 cosh s;
        // coefficient of s^{2k}: [10k 3^{2k-1} + 48k - (21/4)(9^k - 1) - 36k(2k-1)] / (2k)!
        let v = sum_series(
            |k| {
                let kf = f64::from(k);
                let c = 10.0 * kf * 3f64.powf(2.0 * kf - 1.0) + 48.0 * kf
                    - 5.25 * (9f64.powf(kf) - 1.0)
                    - 36.0 * kf * (2.0 * kf - 1.0);
                c * power_over_factorial(s, 2 * k)
            },
            3,
        );
        return ScaledValue::plain(v, v);
    }
    // R e^{-3s}, term by term
    let q = (-2.0 * s).exp();
    let terms = [
        2.5 * s * (1.0 - q * q * q),
        12.0 * s * (q - q * q),
        -2.625 * (1.0 + q * q * q),
        2.625 * (q + q * q),
        -9.0 * s * s * (q + q * q),
    ];
    ScaledValue {
        scaled: terms.iter().sum(),
        ln_scale: 3.0 * s,
        magnitude: terms.iter().map(|t| t.abs()).sum(),
    }
}

fn eval_b0(s: f64) -> ScaledValue {
    if s <= SERIES_LIMIT_B0 {
        // coefficient of s^{2k+1}: (5^{2k+1} - 5 3^{2k+1} + 10)/(2k+1)! + 4 (1 - 9^{k-1})/(2k-2)!
        let v = sum_series(
            |k| {
                let n = 2 * k + 1;
                let nf = f64::from(n);
                let hyper = (5f64.powf(nf) - 5.0 * 3f64.powf(nf) + 10.0) * power_over_factorial(s, n);
                let cubic = 4.0 * (1.0 - 9f64.powf(f64::from(k) - 1.0)) * s.powi(3)
                    * power_over_factorial(s, 2 * k - 2);
                hyper + cubic
            },
            4,
        );
        return ScaledValue::plain(v, v);
    }
    // B0 e^{-5s}, term by term
    let q = (-2.0 * s).exp();
    let s3 = s * s * s;
    let terms = [
        0.5 * (1.0 - q.powi(5)),
        -2.5 * (q - q.powi(4)),
        5.0 * (q * q - q.powi(3)),
        2.0 * s3 * (q * q + q.powi(3)),
        -2.0 * s3 * (q + q.powi(4)),
    ];
    ScaledValue {
        scaled: terms.iter().sum(),
        ln_scale: 5.0 * s,
        magnitude: terms.iter().map(|t| t.abs()).sum(),
    }
}
