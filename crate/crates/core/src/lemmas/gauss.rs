//! Functions of the Gaussian optimality argument.
//!
//! With `Y` standard normal truncated to `(alpha, beta)` and `c = E[Y]`,
//! `f(theta) = ln E[exp(theta Y)] - theta^2 / 2`, `h = f'`, and the proxy
//! `s^2 = 2w + 1` is valid exactly when `f <= p_w` with `p_w(theta) = w theta^2 + c theta`.

use crate::error::{domain, Result};
use crate::special::{
    gauss_f_derivatives, ln_std_normal_cdf_diff, ln_std_normal_pdf, pdf_diff_ratio,
    weighted_pdf_diff_ratio,
};
use crate::truncated_gaussian::SYMMETRY_THRESHOLD;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussFrame {
    alpha: f64,
    beta: f64,
    c: f64,
    ln_mass: f64,
}

impl GaussFrame {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && alpha < beta) {
            return Err(domain(format!("frame needs finite alpha < beta, got ({alpha}, {beta})")));
        }
        Ok(Self {
            alpha,
            beta,
            c: pdf_diff_ratio(alpha, beta)?,
            ln_mass: ln_std_normal_cdf_diff(alpha, beta)?,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `(phi(alpha) - phi(beta)) / (Phi(beta) - Phi(alpha))`
    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn theta0(&self) -> f64 {
        0.5 * (self.alpha + self.beta)
    }

    /// Half-width `(beta - alpha) / 2` of the centred frame.
    pub fn half_width(&self) -> f64 {
        0.5 * (self.beta - self.alpha)
    }

    pub fn is_symmetric(&self) -> bool {
        (self.alpha + self.beta).abs() < SYMMETRY_THRESHOLD
    }

    /// Optimal parabola coefficient; the optimal proxy is `2 w_c + 1`.
    pub fn w_c(&self) -> f64 {
        if self.is_symmetric() {
            let b = self.half_width();
            let ln_mass = ln_std_normal_cdf_diff(-b, b).expect("positive width");
            -b * (ln_std_normal_pdf(b) - ln_mass).exp()
        } else {
            -self.c / (self.alpha + self.beta)
        }
    }

    /// `ln(F(theta) / (Phi(beta) - Phi(alpha)))` with `F(theta) = Phi(beta - theta) - Phi(alpha - theta)`.
    pub fn f(&self, theta: f64) -> f64 {
        ln_std_normal_cdf_diff(self.alpha - theta, self.beta - theta).expect("valid frame") - self.ln_mass
    }

    /// `f'`: the mean of the normal truncated to the shifted interval.
    pub fn h(&self, theta: f64) -> f64 {
        pdf_diff_ratio(self.alpha - theta, self.beta - theta).expect("valid frame")
    }

    /// `h' = F''/F - h^2`
    pub fn h_prime(&self, theta: f64) -> f64 {
        let (lo, hi) = (self.alpha - theta, self.beta - theta);
        let m = pdf_diff_ratio(lo, hi).expect("valid frame");
        -weighted_pdf_diff_ratio(lo, hi).expect("valid frame") - m * m
    }

    /// `h''` evaluated in the centred frame, where it is `Z / F^3`.
    pub fn h_second(&self, theta: f64) -> f64 {
        centered_h_second(self.half_width(), theta - self.theta0()).0
    }

    /// `p_w(theta) = w theta^2 + c theta`
    pub fn p(&self, w: f64, theta: f64) -> f64 {
        theta * (w * theta + self.c)
    }

    pub fn p_prime(&self, w: f64, theta: f64) -> f64 {
        2.0 * w * theta + self.c
    }
}

/// `h''` of the frame `(-b, b)` at `t`, with the sum of absolute terms.
///
/// Uses ratios `F^(k) / F` so nothing underflows far from the interval.
pub fn centered_h_second(b: f64, t: f64) -> (f64, f64) {
    let ln_f = ln_std_normal_cdf_diff(-b - t, b - t).expect("positive width");
    let plus = (ln_std_normal_pdf(t + b) - ln_f).exp();
    let minus = (ln_std_normal_pdf(t - b) - ln_f).exp();
    let r1 = plus - minus;
    let r2 = -(b + t) * plus + (t - b) * minus;
    let r3 = plus * ((b + t).powi(2) - 1.0) + minus * (1.0 - (b - t).powi(2));
    let terms = [r3, -3.0 * r1 * r2, 2.0 * r1 * r1 * r1];
    (terms.iter().sum(), terms.iter().map(|x| x.abs()).sum())
}

/// `Z = F^2 F''' - 3 F F' F'' + 2 F'^3` on the frame `(-beta, beta)`, with the
/// sum of absolute terms.
pub fn gauss_z_with_magnitude(beta: f64, theta: f64) -> Result<(f64, f64)> {
    let d = gauss_f_derivatives(beta, theta)?;
    let terms = [
        d.f * d.f * d.d3,
        -3.0 * d.f * d.d1 * d.d2,
        2.0 * d.d1 * d.d1 * d.d1,
    ];
    Ok((terms.iter().sum(), terms.iter().map(|x| x.abs()).sum()))
}

pub fn gauss_z(beta: f64, theta: f64) -> Result<f64> {
    Ok(gauss_z_with_magnitude(beta, theta)?.0)
}

/// The six-term polynomial in `F'` and `F''` whose positivity gives concavity of `h`.
pub fn gauss_s_with_magnitude(beta: f64, theta: f64) -> Result<(f64, f64)> {
    if !(theta > 0.0) {
        return Err(domain(format!("S needs theta > 0, got {theta}")));
    }
    let d = gauss_f_derivatives(beta, theta)?;
    let (f1, f2) = (d.d1, d.d2);
    let (t, b2) = (theta, beta * beta);
    let t2 = t * t;
    let t4 = t2 * t2;
    let terms = [
        9.0 * t * f2.powi(5),
        (42.0 * t2 - 9.0) * f1 * f2.powi(4),
        -15.0 * (b2 - 79.0 / 15.0 * t2 + 2.0) * t * f1 * f1 * f2.powi(3),
        (75.0 * t4 - (42.0 * b2 + 36.0) * t2 - b2 * b2 + 12.0 * b2 - 3.0) * f1.powi(3) * f2 * f2,
        4.0 * (9.0 * t4 - (10.0 * b2 + 4.5) * t2 + b2 * b2 + 4.5 * b2 - 1.5) * t * f1.powi(4) * f2,
        (7.0 * t4 * t2 - (13.0 * b2 + 3.0) * t4 + (5.0 * b2 * b2 + 6.0 * b2 - 3.0) * t2 + (b2 - 1.0).powi(3))
            * f1.powi(5),
    ];
    Ok((terms.iter().sum(), terms.iter().map(|x| x.abs()).sum()))
}

pub fn gauss_s(beta: f64, theta: f64) -> Result<f64> {
    Ok(gauss_s_with_magnitude(beta, theta)?.0)
}

/// Hyperbolic form `S~` with `S = 2 (exp(-(theta^2 + beta^2)/2) / sqrt(2 pi))^5 S~`.
pub fn gauss_s_hyperbolic(beta: f64, theta: f64) -> f64 {
    let (b, t) = (beta, theta);
    let (b2, t2) = (b * b, t * t);
    let b4 = b2 * b2;
    let x = b * t;
    (5.0 * x).sinh()
        + (4.0 * b4 * b2 + 4.0 * (3.0 * t2 + 6.0) * b4 + 12.0 * b2 - 5.0) * (3.0 * x).sinh()
        + (-12.0 * b4 * b2 + 4.0 * (3.0 * t2 + 18.0) * b4 - 36.0 * b2 + 10.0) * x.sinh()
        - 4.0 * (3.0 * b2 + t2 + 6.0) * b2 * b * t * (3.0 * x).cosh()
        + 4.0 * (-33.0 * b2 + t2 + 6.0) * b2 * b * t * x.cosh()
}

/// `S~` after the substitution `s = beta theta`.
pub fn gauss_a(beta: f64, s: f64) -> f64 {
    let (b2, s2) = (beta * beta, s * s);
    let b4 = b2 * b2;
    (5.0 * s).sinh()
        + (4.0 * b4 * b2 + 24.0 * b4 + 12.0 * s2 * b2 + 12.0 * b2 - 5.0) * (3.0 * s).sinh()
        + (-12.0 * b4 * b2 + 72.0 * b4 + 12.0 * s2 * b2 - 36.0 * b2 + 10.0) * s.sinh()
        - 4.0 * (3.0 * b4 + 6.0 * b2 + s2) * s * (3.0 * s).cosh()
        + 4.0 * (-33.0 * b4 + 6.0 * b2 + s2) * s * s.cosh()
}
