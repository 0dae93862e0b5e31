//! Numerical certification of variance proxies by MGF domination.
//!
//! A candidate `s^2` is accepted when `ln E[exp(theta (X - E X))] - s^2 theta^2 / 2`
//! stays below a small slack over a refined theta grid. Bisection on `s^2`
//! then brackets the smallest accepted value, independently of any closed form.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate, Tolerance};
use crate::truncated_exponential::TruncatedExponential;
use crate::truncated_gaussian::TruncatedGaussian;
use crate::types::Truncated;

pub const DEFAULT_GRID_POINTS: usize = 4001;
pub const MIN_GRID_POINTS: usize = 101;
pub const DEFAULT_REFINEMENT_ROUNDS: u32 = 2;
pub const DEFAULT_SLACK: f64 = 1e-10;

/// Standardized theta extent used when the Gaussian support is unbounded on
/// one side; the supremum of the residual is then only reached as theta grows.
pub const UNBOUNDED_GAUSSIAN_EXTENT: f64 = 1e6;

const REFINE_POINTS: usize = 21;
const REFINED_PEAKS: usize = 4;

/// Theta grid on which domination is checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub theta_min: f64,
    pub theta_max: f64,
    pub n_points: usize,
    /// Local zoom rounds around the grid maximizer, each shrinking the step tenfold.
    pub refinement_rounds: u32,
    /// Largest residual still counted as domination.
    pub slack: f64,
}

impl GridSpec {
    /// `[-theta_max, theta_max]` with default density, refinement and slack.
    pub fn symmetric(theta_max: f64) -> Result<Self> {
        Self::span(-theta_max, theta_max)
    }

    pub fn span(theta_min: f64, theta_max: f64) -> Result<Self> {
        let g = Self {
            theta_min,
            theta_max,
            n_points: DEFAULT_GRID_POINTS,
            refinement_rounds: DEFAULT_REFINEMENT_ROUNDS,
            slack: DEFAULT_SLACK,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn with_points(mut self, n_points: usize) -> Result<Self> {
        self.n_points = n_points;
        self.validate()?;
        Ok(self)
    }

    pub fn with_refinement_rounds(mut self, rounds: u32) -> Self {
        self.refinement_rounds = rounds;
        self
    }

    pub fn with_slack(mut self, slack: f64) -> Result<Self> {
        self.slack = slack;
        self.validate()?;
        Ok(self)
    }

    /// Standardized extent `|alpha| + |beta| + 12`, mapped back by `1 / sigma`.
    pub fn for_gaussian(d: &TruncatedGaussian) -> Result<Self> {
        let (a, b) = (d.alpha().to_f64(), d.beta().to_f64());
        let extent = if a.is_finite() && b.is_finite() {
            a.abs() + b.abs() + 12.0
        } else {
            UNBOUNDED_GAUSSIAN_EXTENT
        };
        Self::symmetric(extent / d.sigma())
    }

    /// Standardized span `[-10, 3 beta + 10]`, mapped back by `lambda`.
    pub fn for_exponential(d: &TruncatedExponential) -> Result<Self> {
        let beta = d
            .beta()
            .finite()
            .ok_or_else(|| domain("exponential grid needs a finite upper endpoint"))?;
        Self::span(-10.0 * d.lambda(), (3.0 * beta + 10.0) * d.lambda())
    }

    fn validate(&self) -> Result<()> {
        if !(self.theta_min.is_finite() && self.theta_max.is_finite() && self.theta_min < self.theta_max) {
            return Err(domain(format!(
                "theta grid needs finite theta_min < theta_max, got [{}, {}]",
                self.theta_min, self.theta_max
            )));
        }
        if self.theta_max <= 0.0 {
            return Err(domain("theta_max must be positive"));
        }
        if self.n_points < MIN_GRID_POINTS {
            return Err(domain(format!(
                "grid needs at least {MIN_GRID_POINTS} points, got {}",
                self.n_points
            )));
        }
        if !(self.slack >= 0.0 && self.slack.is_finite()) {
            return Err(domain(format!("slack must be finite and >= 0, got {}", self.slack)));
        }
        Ok(())
    }

    fn step(&self) -> f64 {
        (self.theta_max - self.theta_min) / (self.n_points - 1) as f64
    }

    /// The `i`-th grid point; exact at both ends.
    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.theta_max
        } else {
            self.theta_min + i as f64 * self.step()
        }
    }
}

/// Outcome of a single domination check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProxyCheck {
    pub holds: bool,
    pub theta_star: f64,
    pub max_residual: f64,
    pub evaluations: usize,
}

/// Result of the bisection search for the smallest dominating `s^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProxyCertificate {
    /// Upper end of the final bracket; domination holds here.
    pub s_squared: f64,
    /// Residual maximizer at the last rejected `s^2`, i.e. the tangency witness.
    pub theta_star: f64,
    /// Maximal residual at `s_squared`.
    pub max_residual: f64,
    pub bracket: (f64, f64),
    pub evaluations: usize,
    pub grid: GridSpec,
}

fn residual<F: Fn(f64) -> f64>(log_cmgf: &F, s_squared: f64, theta: f64) -> Result<f64> {
    let v = log_cmgf(theta);
    if !v.is_finite() {
        return Err(Error::Evaluation { theta, value: v });
    }
    Ok(v - 0.5 * s_squared * theta * theta)
}

/// Checks `log_cmgf(theta) <= s_squared theta^2 / 2 + slack` on the grid.
pub fn check_proxy<F: Fn(f64) -> f64>(log_cmgf: F, s_squared: f64, grid: &GridSpec) -> Result<ProxyCheck> {
    if !(s_squared >= 0.0) {
        return Err(domain(format!("s^2 must be >= 0, got {s_squared}")));
    }
    grid.validate()?;
    let mut values = Vec::with_capacity(grid.n_points);
    for i in 0..grid.n_points {
        values.push(residual(&log_cmgf, s_squared, grid.point(i))?);
    }
    // near the optimum the tangency peak and the trivial one at theta = 0 have
    // almost equal height, so several grid-local maxima get refined
    let mut peaks: Vec<usize> = (0..values.len())
        .filter(|&i| {
            (i == 0 || values[i] >= values[i - 1]) && (i + 1 == values.len() || values[i] >= values[i + 1])
        })
        .collect();
    peaks.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    peaks.truncate(REFINED_PEAKS);

    let mut evaluations = grid.n_points;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for &i in &peaks {
        let mut local = (values[i], grid.point(i));
        let mut half = grid.step();
        for _ in 0..grid.refinement_rounds {
            let center = local.1;
            let lo = (center - half).max(grid.theta_min);
            let hi = (center + half).min(grid.theta_max);
            for j in 0..REFINE_POINTS {
                let theta = lo + (hi - lo) * j as f64 / (REFINE_POINTS - 1) as f64;
                let r = residual(&log_cmgf, s_squared, theta)?;
                if r > local.0 {
                    local = (r, theta);
                }
            }
            evaluations += REFINE_POINTS;
            half /= 10.0;
        }
        if local.0 > best.0 {
            best = local;
        }
    }
    Ok(ProxyCheck {
        holds: best.0 <= grid.slack,
        theta_star: best.1,
        max_residual: best.0,
        evaluations,
    })
}

/// Bisects on `s^2` in `[lo, hi]` until the bracket is narrower than `tol`.
/// Domination must fail at `lo` and hold at `hi`.
pub fn certify_optimal_proxy<F: Fn(f64) -> f64>(
    log_cmgf: F,
    lo: f64,
    hi: f64,
    tol: f64,
    grid: &GridSpec,
) -> Result<ProxyCertificate> {
    if !(tol > 0.0) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Bracket {
            lo,
            hi,
            reason: "need finite lo < hi".into(),
        });
    }
    let at_lo = check_proxy(&log_cmgf, lo, grid)?;
    if at_lo.holds {
        return Err(Error::Bracket {
            lo,
            hi,
            reason: format!("domination already holds at lo (max residual {:e})", at_lo.max_residual),
        });
    }
    let mut upper = check_proxy(&log_cmgf, hi, grid)?;
    if !upper.holds {
        return Err(Error::Bracket {
            lo,
            hi,
            reason: format!(
                "domination fails at hi (residual {:e} at theta = {})",
                upper.max_residual, upper.theta_star
            ),
        });
    }
    let mut evaluations = at_lo.evaluations + upper.evaluations;
    let mut witness = at_lo.theta_star;
    let (mut a, mut b) = (lo, hi);
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let c = check_proxy(&log_cmgf, mid, grid)?;
        evaluations += c.evaluations;
        if c.holds {
            b = mid;
            upper = c;
        } else {
            a = mid;
            witness = c.theta_star;
        }
    }
    Ok(ProxyCertificate {
        s_squared: b,
        theta_star: witness,
        max_residual: upper.max_residual,
        bracket: (a, b),
        evaluations,
        grid: *grid,
    })
}

/// Bisection seeds: half the variance below, the smaller of the Hoeffding
/// bound and `sigma^2` (plus `1e-9`) above.
pub fn certify_gaussian(d: &TruncatedGaussian, tol: f64, grid: &GridSpec) -> Result<ProxyCertificate> {
    let variance = d.variance()?;
    let hi = d.interval().hoeffding_bound().min(d.sigma() * d.sigma()) + 1e-9;
    certify_optimal_proxy(|t| d.log_centered_mgf(t), 0.5 * variance, hi, tol, grid)
}

pub fn certify_exponential(d: &TruncatedExponential, tol: f64, grid: &GridSpec) -> Result<ProxyCertificate> {
    d.variance_proxy()?;
    let variance = d.variance()?;
    let hi = d.interval().hoeffding_bound() + 1e-9;
    certify_optimal_proxy(|t| d.log_centered_mgf(t), 0.5 * variance, hi, tol, grid)
}

/// `ln int exp(theta (x - m)) f(x) dx` with `m` and the normalization also
/// obtained by quadrature.
pub fn log_cmgf_quadrature<F: Fn(f64) -> f64>(density: F, support: (f64, f64), theta: f64) -> Result<f64> {
    let tol = Tolerance {
        abs_tol: 1e-15,
        rel_tol: 1e-13,
    };
    let (a, b) = support;
    let mass = integrate(&density, a, b, tol)?.value;
    let first = integrate(|x| x * density(x), a, b, tol)?.value;
    let m = first / mass;
    if theta == 0.0 {
        return Ok(0.0);
    }
    let mgf = integrate(
        |x| {
            let f = density(x);
            if f == 0.0 {
                0.0
            } else {
                (theta * (x - m)).exp() * f
            }
        },
        a,
        b,
        tol,
    )?;
    let v = (mgf.value / mass).ln();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Evaluation { theta, value: v })
    }
}

/// `n` inverse-transform draws; identical for identical seeds.
pub fn sample<D: Truncated + ?Sized>(d: &D, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut u: f64 = rng.random();
            while u == 0.0 {
                u = rng.random();
            }
            d.quantile(u)
        })
        .collect()
}

/// Empirical `ln mean(exp(theta (x_i - m)))` and its delta-method standard error.
pub fn empirical_log_cmgf(samples: &[f64], m: f64, theta: f64) -> (f64, f64) {
    let n = samples.len() as f64;
    let values: Vec<f64> = samples.iter().map(|&x| (theta * (x - m)).exp()).collect();
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean.ln(), (var / n).sqrt() / mean)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(GridSpec::symmetric(0.0).is_err());
        assert!(GridSpec::symmetric(5.0).unwrap().with_points(100).is_err());
        assert!(GridSpec::span(1.0, -1.0).is_err());
        let g = GridSpec::symmetric(5.0).unwrap();
        assert_eq!(g.point(0), -5.0);
        assert_eq!(g.point(g.n_points - 1), 5.0);
        assert_eq!(g.point(2000), 0.0);
    }

    #[test]
    fn pure_gaussian_is_certified_at_one() {
        let grid = GridSpec::symmetric(10.0).unwrap();
        let cert = certify_optimal_proxy(|t| 0.5 * t * t, 0.5, 1.5, 1e-8, &grid).unwrap();
        assert!((cert.s_squared - 1.0).abs() < 2e-8);
        assert!(cert.bracket.1 - cert.bracket.0 <= 1e-8);
    }

    #[test]
    fn bracket_errors() {
        let grid = GridSpec::symmetric(10.0).unwrap();
        let f = |t: f64| 0.5 * t * t;
        assert!(matches!(
            certify_optimal_proxy(f, 1.1, 2.0, 1e-6, &grid),
            Err(Error::Bracket { .. })
        ));
        assert!(matches!(
            certify_optimal_proxy(f, 0.1, 0.9, 1e-6, &grid),
            Err(Error::Bracket { .. })
        ));
    }

    #[test]
    fn non_finite_values_are_reported_with_theta() {
        let grid = GridSpec::symmetric(2.0).unwrap();
        let err = check_proxy(|t| if t > 1.0 { f64::INFINITY } else { 0.0 }, 1.0, &grid).unwrap_err();
        match err {
            Error::Evaluation { theta, .. } => assert!(theta > 1.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn same_seed_same_samples() {
        let d = TruncatedExponential::standard(1.0, 4.0).unwrap();
        assert_eq!(sample(&d, 50, 9), sample(&d, 50, 9));
        assert_ne!(sample(&d, 50, 9), sample(&d, 50, 10));
    }
}
