//! Command-line front end: proxies, certification, lemma batteries and figure data.

pub mod figures;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use subgauss_core::certifier::{empirical_log_cmgf, DEFAULT_GRID_POINTS};
use subgauss_core::lemmas::battery::DEFAULT_GRID;
use subgauss_core::lemmas::{run_battery, Suite};
use subgauss_core::{
    certify_exponential, certify_gaussian, sample, Error, GridSpec, ProxyCertificate, ProxyResult, Truncated,
    TruncatedExponential, TruncatedGaussian, TruncationInterval,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

/// Environment variable overriding the Monte Carlo seed of `certify --monte-carlo`.
pub const SEED_VAR: &str = "SUBGAUSS_SEED";
pub const DEFAULT_SEED: u64 = 20_240_601;
const MONTE_CARLO_SAMPLES: usize = 200_000;

#[derive(Debug, Parser)]
#[command(name = "subgauss", version, about = "Optimal sub-Gaussian variance proxies of truncated distributions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form mean, variance and optimal variance proxy as JSON.
    Proxy {
        #[command(subcommand)]
        family: Family,
    },
    /// Compare the closed form against the numerical domination oracle.
    Certify {
        #[command(flatten)]
        opts: CertifyOpts,
        #[command(subcommand)]
        family: Family,
    },
    /// Write the data behind one of the four figures as CSV.
    Figure(FigureArgs),
    /// Run the lemma batteries and print one line per check.
    Lemmas {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum Family {
    Gaussian(GaussianArgs),
    Exponential(ExponentialArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GaussianArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Lower endpoint; accepts -inf.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_endpoint)]
    pub a: f64,
    /// Upper endpoint; accepts +inf.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_endpoint)]
    pub b: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ExponentialArgs {
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_endpoint)]
    pub a: f64,
    /// Upper endpoint; +inf is accepted and rejected later as not sub-Gaussian.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_endpoint)]
    pub b: f64,
}

#[derive(Debug, Clone, Args)]
pub struct CertifyOpts {
    /// Bisection tolerance on s^2.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Check domination on [-theta_max, theta_max] instead of the family default.
    #[arg(long)]
    pub theta_max: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    pub grid: usize,
    /// Also estimate the log-MGF at the tangency point from seeded samples.
    #[arg(long)]
    pub monte_carlo: bool,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
    pub id: u8,
    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 400, value_parser = clap::value_parser!(u64).range(2..))]
    pub grid_points: u64,
}

fn parse_endpoint(s: &str) -> Result<f64, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" | "+infinity" => Ok(f64::INFINITY),
        "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
        other => other.parse::<f64>().map_err(|e| format!("{s:?}: {e}")),
    }
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|_| format!("expected one of gaussian, exponential, appendix, all; got {s:?}"))
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) | Error::NotSubGaussian(_) | Error::UnknownFunction(_) => EXIT_DOMAIN,
            Error::Evaluation { .. } | Error::Quadrature { .. } | Error::Bracket { .. } => EXIT_VERIFICATION,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn endpoint_value(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x > 0.0 {
        json!("+inf")
    } else {
        json!("-inf")
    }
}

enum Model {
    Gaussian(TruncatedGaussian),
    Exponential(TruncatedExponential),
}

impl Family {
    fn name(&self) -> &'static str {
        match self {
            Family::Gaussian(_) => "gaussian",
            Family::Exponential(_) => "exponential",
        }
    }

    fn params(&self) -> Value {
        match self {
            Family::Gaussian(g) => json!({
                "mu": g.mu, "sigma": g.sigma, "a": endpoint_value(g.a), "b": endpoint_value(g.b),
            }),
            Family::Exponential(e) => json!({
                "lambda": e.lambda, "a": endpoint_value(e.a), "b": endpoint_value(e.b),
            }),
        }
    }

    fn model(&self) -> Result<Model, Error> {
        Ok(match self {
            Family::Gaussian(g) => {
                Model::Gaussian(TruncatedGaussian::new(g.mu, g.sigma, TruncationInterval::from_f64(g.a, g.b)?)?)
            }
            Family::Exponential(e) => {
                Model::Exponential(TruncatedExponential::new(e.lambda, TruncationInterval::from_f64(e.a, e.b)?)?)
            }
        })
    }
}

impl Model {
    fn proxy(&self) -> Result<ProxyResult, Error> {
        match self {
            Model::Gaussian(d) => Ok(d.variance_proxy()),
            Model::Exponential(d) => d.variance_proxy(),
        }
    }

    fn distribution(&self) -> &dyn Truncated {
        match self {
            Model::Gaussian(d) => d,
            Model::Exponential(d) => d,
        }
    }

    fn certify(&self, opts: &CertifyOpts) -> Result<ProxyCertificate, Error> {
        let grid = match (opts.theta_max, self) {
            (Some(t), _) => GridSpec::symmetric(t)?,
            (None, Model::Gaussian(d)) => GridSpec::for_gaussian(d)?,
            (None, Model::Exponential(d)) => GridSpec::for_exponential(d)?,
        }
        .with_points(opts.grid)?;
        match self {
            Model::Gaussian(d) => certify_gaussian(d, opts.tol, &grid),
            Model::Exponential(d) => certify_exponential(d, opts.tol, &grid),
        }
    }
}

pub fn cmd_proxy(family: &Family) -> Result<Value, Failure> {
    let model = family.model()?;
    let p = model.proxy()?;
    Ok(json!({
        "family": family.name(),
        "params": family.params(),
        "mean": model.distribution().mean(),
        "variance": p.variance,
        "variance_proxy": p.variance_proxy,
        "is_strict": p.is_strict,
        "case_tag": p.case_tag.to_string(),
    }))
}

/// Returns the JSON document and whether the certificate agrees with the closed form.
pub fn cmd_certify(family: &Family, opts: &CertifyOpts) -> Result<(Value, bool), Failure> {
    if !(opts.tol > 0.0 && opts.tol.is_finite()) {
        return Err(Failure::usage(format!("--tol must be positive, got {}", opts.tol)));
    }
    let model = family.model()?;
    let closed = model.proxy()?.variance_proxy;
    let cert = model.certify(opts)?;
    let abs_diff = (cert.s_squared - closed).abs();
    let agrees = abs_diff <= f64::max(1e-4, 10.0 * opts.tol);
    let mut doc = Map::new();
    doc.insert("closed_form".into(), json!(closed));
    doc.insert("certified".into(), json!(cert.s_squared));
    doc.insert("abs_diff".into(), json!(abs_diff));
    doc.insert("theta_star".into(), json!(cert.theta_star));
    doc.insert("evaluations".into(), json!(cert.evaluations));
    if opts.monte_carlo {
        doc.insert("monte_carlo".into(), monte_carlo(model.distribution(), cert.theta_star)?);
    }
    Ok((Value::Object(doc), agrees))
}

fn monte_carlo(d: &dyn Truncated, theta: f64) -> Result<Value, Failure> {
    let seed = match std::env::var(SEED_VAR) {
        Ok(s) => s
            .trim()
            .parse::<u64>()
            .map_err(|e| Failure::usage(format!("{SEED_VAR}={s:?}: {e}")))?,
        Err(_) => DEFAULT_SEED,
    };
    let xs = sample(d, MONTE_CARLO_SAMPLES, seed);
    let (estimate, std_error) = empirical_log_cmgf(&xs, d.mean(), theta);
    Ok(json!({
        "seed": seed,
        "samples": MONTE_CARLO_SAMPLES,
        "theta": theta,
        "estimate": estimate,
        "std_error": std_error,
        "exact": d.log_centered_mgf(theta),
    }))
}

/// Prints the battery report; returns whether every check passed.
pub fn cmd_lemmas(suite: Suite, grid: usize, out: &mut dyn Write) -> std::io::Result<bool> {
    let checks = run_battery(suite, grid);
    for c in &checks {
        writeln!(out, "{c}")?;
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    writeln!(out, "{passed}/{} checks passed", checks.len())?;
    Ok(passed == checks.len())
}

fn write_json(out: &mut dyn Write, v: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Failure::usage(e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| Failure::usage(e.to_string()))
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Proxy { family } => {
            write_json(out, &cmd_proxy(&family)?)?;
            Ok(EXIT_OK)
        }
        Command::Certify { opts, family } => {
            let (doc, agrees) = cmd_certify(&family, &opts)?;
            write_json(out, &doc)?;
            Ok(if agrees { EXIT_OK } else { EXIT_VERIFICATION })
        }
        Command::Figure(args) => {
            let csv = figures::render(args.id, args.grid_points as usize)?;
            match args.out {
                Some(path) => std::fs::write(&path, csv)
                    .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?,
                None => out.write_all(csv.as_bytes()).map_err(|e| Failure::usage(e.to_string()))?,
            }
            Ok(EXIT_OK)
        }
        Command::Lemmas { suite, grid } => {
            let ok = cmd_lemmas(suite, grid, out).map_err(|e| Failure::usage(e.to_string()))?;
            Ok(if ok { EXIT_OK } else { EXIT_VERIFICATION })
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("subgauss").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn endpoints_parse_infinities() {
        assert_eq!(parse_endpoint("-inf"), Ok(f64::NEG_INFINITY));
        assert_eq!(parse_endpoint("+inf"), Ok(f64::INFINITY));
        assert_eq!(parse_endpoint("-2.5"), Ok(-2.5));
        assert!(parse_endpoint("abc").is_err());
    }

    #[test]
    fn untruncated_gaussian_proxy() {
        let (code, out, _) = run_capture(&["proxy", "gaussian", "--mu", "0", "--sigma", "1", "--a", "-inf", "--b", "+inf"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["variance_proxy"], json!(1.0));
        assert_eq!(v["is_strict"], json!(true));
        assert_eq!(v["params"]["a"], json!("-inf"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_capture(&["proxy"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["proxy", "gaussian", "--a", "x", "--b", "1"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["figure", "5"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
        let (code, _, err) = run_capture(&["proxy", "exponential", "--lambda", "1", "--a", "0", "--b", "+inf"]);
        assert_eq!(code, EXIT_DOMAIN);
        assert!(err.contains("not sub-Gaussian"));
        assert_eq!(run_capture(&["proxy", "gaussian", "--a", "2", "--b", "1"]).0, EXIT_DOMAIN);
        assert_eq!(run_capture(&["proxy", "gaussian", "--sigma", "0", "--a", "0", "--b", "1"]).0, EXIT_DOMAIN);
    }

    #[test]
    fn failure_codes_by_error_kind() {
        assert_eq!(Failure::from(Error::Domain("x".into())).code, EXIT_DOMAIN);
        assert_eq!(Failure::from(Error::NotSubGaussian("x".into())).code, EXIT_DOMAIN);
        let bracket = Error::Bracket {
            lo: 0.0,
            hi: 1.0,
            reason: "x".into(),
        };
        assert_eq!(Failure::from(bracket).code, EXIT_VERIFICATION);
    }
}
