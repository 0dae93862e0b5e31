//! CSV data for the four figures. Floats are written with 17 significant digits.

use std::fmt::Write as _;

use subgauss_core::lemmas::{ExpFrame, GaussFrame};
use subgauss_core::{Error, Truncated, TruncatedExponential, TruncatedGaussian};

/// Gaussian truncation lower endpoint of figure 1.
pub const FIG1_ALPHA: f64 = -2.0;
pub const FIG1_DENSITY_BETAS: [f64; 4] = [-0.5, 0.0, 0.5, 2.0];
pub const FIG2_INTERVAL: (f64, f64) = (-1.0, 4.0);
/// Multiples of the optimal `s^2` drawn as a valid and an invalid parabola.
pub const FIG2_FACTORS: (f64, f64) = (1.1, 0.9);
/// Exponential truncation lower endpoint of figure 3.
pub const FIG3_ALPHA: f64 = 0.5;
pub const FIG3_DENSITY_BETAS: [f64; 2] = [2.0, 4.0];
pub const FIG4_INTERVAL: (f64, f64) = (1.0, 4.0);
pub const FIG4_LEVELS: [f64; 3] = [0.8095, 0.8107, 0.812];

/// `n` evenly spaced points on `[lo, hi]` with `anchors` merged in exactly.
pub fn sweep(lo: f64, hi: f64, n: usize, anchors: &[f64]) -> Vec<f64> {
    let n = n.max(2);
    let mut xs: Vec<f64> = (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
        .collect();
    for &a in anchors {
        if let Some(x) = xs.iter_mut().find(|x| (**x - a).abs() <= 1e-12 * (hi - lo)) {
            *x = a;
        } else {
            xs.push(a);
        }
    }
    xs.sort_by(f64::total_cmp);
    xs
}

fn push_row(csv: &mut String, values: &[f64]) {
    let mut first = true;
    for v in values {
        if !first {
            csv.push(',');
        }
        first = false;
        write!(csv, "{v:.16e}").expect("writing to a String");
    }
    csv.push('\n');
}

fn label(x: f64) -> String {
    format!("{x}")
}

/// Renders figure `id` (1 to 4) with about `n` rows.
pub fn render(id: u8, n: usize) -> Result<String, Error> {
    match id {
        1 => figure1(n),
        2 => figure2(n),
        3 => figure3(n),
        4 => figure4(n),
        other => Err(Error::Domain(format!("figure id must be 1..4, got {other}"))),
    }
}

/// Gaussian variance and proxy against `beta` for fixed `alpha`, and densities on a shared `x` column.
fn figure1(n: usize) -> Result<String, Error> {
    let betas = sweep(-1.5, 3.0, n, &[2.0]);
    let xs = sweep(-2.5, 3.5, betas.len(), &[]);
    let densities = FIG1_DENSITY_BETAS
        .iter()
        .map(|&b| TruncatedGaussian::standard(FIG1_ALPHA, b))
        .collect::<Result<Vec<_>, _>>()?;
    let mut csv = String::from("beta,variance,proxy,x");
    for b in FIG1_DENSITY_BETAS {
        write!(csv, ",density_beta_{}", label(b)).expect("writing to a String");
    }
    csv.push('\n');
    for (&beta, &x) in betas.iter().zip(&xs) {
        let p = TruncatedGaussian::standard(FIG1_ALPHA, beta)?.variance_proxy();
        let mut row = vec![beta, p.variance, p.variance_proxy, x];
        row.extend(densities.iter().map(|d| d.density(x)));
        push_row(&mut csv, &row);
    }
    Ok(csv)
}

/// `f` against the optimal parabola and two rescaled ones.
fn figure2(n: usize) -> Result<String, Error> {
    let g = GaussFrame::new(FIG2_INTERVAL.0, FIG2_INTERVAL.1)?;
    let s2 = 2.0 * g.w_c() + 1.0;
    let w_at = |factor: f64| 0.5 * (factor * s2 - 1.0);
    let (w_valid, w_invalid) = (w_at(FIG2_FACTORS.0), w_at(FIG2_FACTORS.1));
    let tangency = 2.0 * g.theta0();
    let mut csv = String::from("theta,f,p_optimal,p_valid,p_invalid\n");
    for theta in sweep(-2.0, 5.0, n, &[0.0, tangency]) {
        push_row(
            &mut csv,
            &[theta, g.f(theta), g.p(g.w_c(), theta), g.p(w_valid, theta), g.p(w_invalid, theta)],
        );
    }
    Ok(csv)
}

/// Exponential variance and proxy against `beta` for fixed `alpha`, and densities on a shared `x` column.
fn figure3(n: usize) -> Result<String, Error> {
    let betas = sweep(1.0, 5.0, n, &FIG3_DENSITY_BETAS);
    let xs = sweep(0.0, 5.5, betas.len(), &[]);
    let densities = FIG3_DENSITY_BETAS
        .iter()
        .map(|&b| TruncatedExponential::standard(FIG3_ALPHA, b))
        .collect::<Result<Vec<_>, _>>()?;
    let mut csv = String::from("beta,variance,proxy,x");
    for b in FIG3_DENSITY_BETAS {
        write!(csv, ",density_beta_{}", label(b)).expect("writing to a String");
    }
    csv.push('\n');
    for (&beta, &x) in betas.iter().zip(&xs) {
        let p = TruncatedExponential::standard(FIG3_ALPHA, beta)?.variance_proxy()?;
        let mut row = vec![beta, p.variance, p.variance_proxy, x];
        row.extend(densities.iter().map(|d| d.density(x)));
        push_row(&mut csv, &row);
    }
    Ok(csv)
}

/// `E exp(theta (Y - m)) - exp(s^2 theta^2 / 2)` for three values of `s`.
fn figure4(n: usize) -> Result<String, Error> {
    let frames = FIG4_LEVELS
        .iter()
        .map(|&s| ExpFrame::new(FIG4_INTERVAL.0, FIG4_INTERVAL.1, s))
        .collect::<Result<Vec<_>, _>>()?;
    let mut csv = String::from("theta");
    for s in FIG4_LEVELS {
        write!(csv, ",g_at_{}", label(s)).expect("writing to a String");
    }
    csv.push('\n');
    for theta in sweep(-6.0, 6.0, n, &[0.0, 2.0]) {
        let mut row = vec![theta];
        row.extend(frames.iter().map(|f| f.g(theta)));
        push_row(&mut csv, &row);
    }
    Ok(csv)
}
