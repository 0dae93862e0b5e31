//! Grid batteries turning each lemma into a pass/fail check with a worst-case figure.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error};
use crate::lemmas::appendix::AppendixFunction;
use crate::lemmas::exp::ExpFrame;
use crate::lemmas::gauss::{centered_h_second, gauss_s_with_magnitude, gauss_z_with_magnitude, GaussFrame};
use crate::types::Truncated;

/// Relative margin a sign claim must clear: `value / sum|terms| > MARGIN`.
pub const SIGN_MARGIN: f64 = 1e-12;
pub const DEFAULT_GRID: usize = 200;

const EXP_ALPHAS: [f64; 6] = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0];
const EXP_WIDTHS: [f64; 6] = [0.1, 0.5, 1.0, 3.0, 6.0, 12.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Gaussian,
    Exponential,
    Appendix,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "gaussian" => Ok(Self::Gaussian),
            "exponential" => Ok(Self::Exponential),
            "appendix" => Ok(Self::Appendix),
            "all" => Ok(Self::All),
            other => Err(domain(format!("unknown suite {other:?}"))),
        }
    }
}

/// What [`LemmaCheck::worst`] measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    /// Smallest relative margin of a strict sign claim; passes above the threshold.
    SignMargin,
    /// Largest error of an identity; passes at or below the threshold.
    MaxError,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaCheck {
    pub name: String,
    pub passed: bool,
    pub kind: CheckKind,
    pub worst: f64,
    pub threshold: f64,
    pub points: usize,
    pub detail: String,
}

impl fmt::Display for LemmaCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let (what, rel) = match self.kind {
            CheckKind::SignMargin => ("worst margin", ">"),
            CheckKind::MaxError => ("worst error", "<="),
        };
        write!(
            f,
            "{verdict} {:<34} {what} {:>11.3e} (need {rel} {:.0e}) over {} points",
            self.name, self.worst, self.threshold, self.points
        )?;
        if !self.detail.is_empty() {
            write!(f, "; {}", self.detail)?;
        }
        Ok(())
    }
}

/// Accumulates one check: the worst value seen and where it was seen.
struct Tracker {
    name: String,
    kind: CheckKind,
    threshold: f64,
    worst: f64,
    at: String,
    points: usize,
    failure: Option<String>,
}

impl Tracker {
    fn new(name: &str, kind: CheckKind, threshold: f64) -> Self {
        Self {
            name: name.to_string(),
            kind,
            threshold,
            worst: match kind {
                CheckKind::SignMargin => f64::INFINITY,
                CheckKind::MaxError => 0.0,
            },
            at: String::new(),
            points: 0,
            failure: None,
        }
    }

    fn record(&mut self, value: f64, at: impl FnOnce() -> String) {
        self.points += 1;
        let worse = match self.kind {
            CheckKind::SignMargin => !(value >= self.worst),
            CheckKind::MaxError => !(value <= self.worst),
        };
        if worse {
            self.worst = value;
            self.at = at();
        }
    }

    fn fail(&mut self, reason: String) {
        self.failure.get_or_insert(reason);
    }

    fn finish(self) -> LemmaCheck {
        let ok = match self.kind {
            CheckKind::SignMargin => self.worst > self.threshold,
            CheckKind::MaxError => self.worst <= self.threshold,
        };
        let passed = ok && self.failure.is_none() && self.points > 0;
        let detail = match self.failure {
            Some(reason) => reason,
            None if self.at.is_empty() => String::new(),
            None => format!("worst at {}", self.at),
        };
        LemmaCheck {
            name: self.name,
            passed,
            kind: self.kind,
            worst: self.worst,
            threshold: self.threshold,
            points: self.points,
            detail,
        }
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let n = n.max(2);
    (0..n).map(move |i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
}

fn logspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    linspace(lo.ln(), hi.ln(), n).map(f64::exp)
}

/// Runs the requested batteries with `grid` points per one-dimensional sweep.
pub fn run_battery(suite: Suite, grid: usize) -> Vec<LemmaCheck> {
    let grid = grid.max(10);
    let mut out = Vec::new();
    if matches!(suite, Suite::Gaussian | Suite::All) {
        out.extend(gaussian_checks(grid));
    }
    if matches!(suite, Suite::Exponential | Suite::All) {
        out.extend(exponential_checks(grid));
    }
    if matches!(suite, Suite::Appendix | Suite::All) {
        out.extend(appendix_checks(grid));
    }
    out
}

fn gaussian_checks(grid: usize) -> Vec<LemmaCheck> {
    vec![
        gauss_symmetry(grid),
        gauss_concavity(grid),
        gauss_tangency(),
        gauss_z_negative(grid),
        gauss_s_positive(grid),
    ]
}

fn gauss_symmetry(grid: usize) -> LemmaCheck {
    let mut t = Tracker::new("gaussian/symmetry-f-h-p", CheckKind::MaxError, 1e-11);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..grid {
        let alpha = rng.random_range(-5.0..3.0);
        let beta = alpha + rng.random_range(0.2..8.0);
        let s = rng.random_range(0.0..4.0);
        let w = rng.random_range(-0.45..2.0);
        let frame = GaussFrame::new(alpha, beta).expect("finite frame");
        let th0 = frame.theta0();
        let (fp, fm) = (frame.f(th0 + s), frame.f(th0 - s));
        let (hp, hm) = (frame.h(th0 + s), frame.h(th0 - s));
        let vertex = -frame.c() / (2.0 * w);
        let (pp, pm) = (frame.p(w, vertex + s), frame.p(w, vertex - s));
        let err = ((fp - fm).abs() / fp.abs().max(1.0))
            .max((hp + hm).abs() / hp.abs().max(1.0))
            .max((pp - pm).abs() / pp.abs().max(1.0));
        t.record(err, || format!("(alpha, beta, t, w) = ({alpha:.3}, {beta:.3}, {s:.3}, {w:.3})"));
    }
    t.finish()
}

fn gauss_concavity(grid: usize) -> LemmaCheck {
    let mut t = Tracker::new("gaussian/concavity-h''", CheckKind::SignMargin, SIGN_MARGIN);
    for &width in &[0.5, 2.0, 4.0, 10.0] {
        for &center in &[-2.0, 0.0, 1.5, 3.0] {
            let frame = GaussFrame::new(center - 0.5 * width, center + 0.5 * width).expect("finite frame");
            let b = frame.half_width();
            for off in logspace(1e-3, 20.0, grid) {
                // right of the centre h'' < 0, left of it h'' > 0
                for sign in [1.0, -1.0] {
                    let (v, mag) = centered_h_second(b, sign * off);
                    t.record(-sign * v / mag, || {
                        format!("width {width}, theta0 {center}, theta = theta0 {} {off:.4}", if sign > 0.0 { "+" } else { "-" })
                    });
                }
            }
        }
    }
    t.finish()
}

fn gauss_tangency() -> LemmaCheck {
    let mut t = Tracker::new("gaussian/tangency-identities", CheckKind::MaxError, 1e-10);
    for &(alpha, beta) in &[(-1.0, 4.0), (-3.0, -0.5), (0.5, 2.0), (-2.0, 0.5), (-6.0, 1.0)] {
        let frame = GaussFrame::new(alpha, beta).expect("finite frame");
        let (w, c, th0) = (frame.w_c(), frame.c(), frame.theta0());
        let residuals = [
            frame.f(0.0) - frame.p(w, 0.0),
            frame.f(2.0 * th0),
            frame.p(w, 2.0 * th0),
            frame.h(th0),
            frame.p_prime(w, th0),
            frame.h(2.0 * th0) + c,
            frame.p_prime(w, 2.0 * th0) + c,
            frame.h(0.0) - c,
            frame.p_prime(w, 0.0) - c,
        ];
        let err = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        t.record(err, || format!("(alpha, beta) = ({alpha}, {beta})"));
    }
    for &b in &[0.3, 1.0, 2.0, 4.0] {
        let frame = GaussFrame::new(-b, b).expect("finite frame");
        // second-order contact at the origin: f''(0) = h'(0) = 2 w_c
        let err = (frame.h_prime(0.0) - 2.0 * frame.w_c()).abs() + frame.h(0.0).abs();
        t.record(err, || format!("symmetric beta = {b}"));
    }
    t.finish()
}

fn gauss_z_negative(grid: usize) -> LemmaCheck {
    let mut t = Tracker::new("gaussian/Z-negative", CheckKind::SignMargin, SIGN_MARGIN);
    for beta in logspace(0.1, 6.0, 12).chain([3f64.sqrt()]) {
        for theta in logspace(1e-2, 10.0, grid) {
            match gauss_z_with_magnitude(beta, theta) {
                Ok((z, mag)) => t.record(-z / mag, || format!("(beta, theta) = ({beta:.4}, {theta:.4})")),
                Err(e) => t.fail(e.to_string()),
            }
        }
    }
    t.finish()
}

fn gauss_s_positive(grid: usize) -> LemmaCheck {
    let mut t = Tracker::new("gaussian/S-positive", CheckKind::SignMargin, SIGN_MARGIN);
    let betas: Vec<f64> = [0.5, 3f64.sqrt(), 2.0, 5.0].into_iter().chain(logspace(0.1, 6.0, 8)).collect();
    for &beta in &betas {
        for theta in logspace(0.05, 10.0, grid) {
            match gauss_s_with_magnitude(beta, theta) {
                Ok((s, mag)) => t.record(s / mag, || format!("(beta, theta) = ({beta:.4}, {theta:.4})")),
                Err(e) => t.fail(e.to_string()),
            }
        }
    }
    t.finish()
}

fn exp_frames() -> impl Iterator<Item = (f64, f64)> {
    EXP_ALPHAS
        .iter()
        .flat_map(|&a| EXP_WIDTHS.iter().map(move |&e| (a, a + e)))
}

fn exponential_checks(grid: usize) -> Vec<LemmaCheck> {
    let mut bracket = Tracker::new("exponential/bracketing", CheckKind::SignMargin, -1e-12);
    let mut identity = Tracker::new("exponential/s_inf-variance", CheckKind::MaxError, 1e-13);
    let mut root = Tracker::new("exponential/discriminant-root", CheckKind::MaxError, 1e-8);
    let mut above = Tracker::new("exponential/no-second-max-above", CheckKind::SignMargin, 1e-12);
    let mut below = Tracker::new("exponential/second-max-below", CheckKind::SignMargin, 0.0);
    let mut signs = Tracker::new("exponential/sign-g-equals-sign-G", CheckKind::MaxError, 0.0);
    let mut tangency = Tracker::new("exponential/tangency-at-2", CheckKind::MaxError, 1e-9);

    for (alpha, beta) in exp_frames() {
        let at = || format!("(alpha, beta) = ({alpha}, {beta})");
        let frame = ExpFrame::optimal(alpha, beta).expect("valid frame");
        let s_c = frame.s();
        let dist = *frame.distribution();

        match frame.bounds() {
            Ok(b) => {
                let m = ((s_c - b.s_inf) / s_c).min((b.s1 - s_c) / s_c);
                bracket.record(m, at);
                // s_inf itself must sit strictly below
                if !(b.s_inf < s_c) {
                    bracket.fail(format!("s_inf >= s_c at {}", at()));
                }
                let var = dist.variance().expect("finite width");
                identity.record(((b.s_inf * b.s_inf - var) / var).abs(), at);
                let at_root = frame.with_s(b.s1).expect("positive s");
                let e2 = at_root.width().powi(2);
                let d = beta - at_root.mean();
                let s2 = b.s1 * b.s1;
                let scale = e2 * ((e2 + 12.0) * s2 * s2 + 2.0 * e2 * (d + 2.0) * s2 + e2 * d * d);
                root.record(at_root.discriminant_in_s2().abs() / scale, at);
            }
            Err(e) => {
                bracket.fail(e.to_string());
                identity.fail(e.to_string());
                root.fail(e.to_string());
            }
        }

        let lo_theta = -10.0;
        let hi_theta = 3.0 * beta + 10.0;

        let up = frame.with_s(1.001 * s_c).expect("positive s");
        let mut worst_up = f64::INFINITY;
        for theta in linspace(lo_theta, hi_theta, grid).filter(|t| t.abs() >= 0.5) {
            worst_up = worst_up.min(-up.big_g_normalized(theta));
        }
        above.record(worst_up, at);

        let down = frame.with_s(0.999 * s_c).expect("positive s");
        let best = linspace(1.5, 2.5, grid)
            .map(|t| down.big_g_normalized(t))
            .fold(f64::NEG_INFINITY, f64::max);
        below.record(best, at);

        let mut mismatches = 0.0;
        for factor in [0.9, 1.0, 1.1] {
            let f = frame.with_s(factor * s_c).expect("positive s");
            for theta in linspace(lo_theta, hi_theta, grid) {
                let normalized = f.big_g_normalized(theta);
                if normalized.abs() < 1e-9 {
                    continue;
                }
                let (g, big_g) = (f.g(theta), f.big_g(theta));
                // both exponentials overflow
                if g.is_nan() {
                    continue;
                }
                if g.signum() != big_g.signum() {
                    mismatches += 1.0;
                }
            }
        }
        signs.record(mismatches, at);

        let resid = dist.log_centered_mgf(2.0) - 2.0 * s_c * s_c;
        let step = 1e-4;
        let slope = ((dist.log_centered_mgf(2.0 + step) - 0.5 * s_c * s_c * (2.0 + step).powi(2))
            - (dist.log_centered_mgf(2.0 - step) - 0.5 * s_c * s_c * (2.0 - step).powi(2)))
            / (2.0 * step);
        tangency.record(resid.abs().max(slope.abs() * 1e-3), at);
    }

    vec![
        bracket.finish(),
        identity.finish(),
        root.finish(),
        above.finish(),
        below.finish(),
        signs.finish(),
        tangency.finish(),
    ]
}

fn appendix_checks(grid: usize) -> Vec<LemmaCheck> {
    AppendixFunction::ALL
        .iter()
        .map(|&f| {
            let mut t = Tracker::new(&format!("appendix/{}-positive", f.name()), CheckKind::SignMargin, SIGN_MARGIN);
            let points = logspace(1e-4, 1.0, grid).chain(linspace(20.0 / grid as f64, 20.0, grid));
            for x in points {
                match f.evaluate(x) {
                    Ok(v) => t.record(v.relative_margin(), || format!("x = {x:.5}")),
                    Err(e) => t.fail(e.to_string()),
                }
            }
            match f.eval(1e-8) {
                Ok(v) if v.abs() < 1e-20 => {}
                Ok(v) => t.fail(format!("{}(1e-8) = {v:e} does not vanish", f.name())),
                Err(e) => t.fail(e.to_string()),
            }
            t.finish()
        })
        .collect()
}
