//! Parameter sets shared by the benchmarks.

use subgauss_core::{TruncatedExponential, TruncatedGaussian};

/// Standardized Gaussian truncations covering symmetric, asymmetric and far-tail cases.
pub fn gaussian_cases() -> Vec<TruncatedGaussian> {
    [(-2.0, 2.0), (-2.0, 0.5), (-1.0, 4.0), (3.0, 9.0), (10.0, 11.0)]
        .iter()
        .map(|&(a, b)| TruncatedGaussian::standard(a, b).expect("valid interval"))
        .collect()
}

/// Unit-rate exponential truncations from narrow to wide.
pub fn exponential_cases() -> Vec<TruncatedExponential> {
    [(0.0, 0.1), (1.0, 4.0), (0.5, 12.0), (0.0, 200.0)]
        .iter()
        .map(|&(a, b)| TruncatedExponential::standard(a, b).expect("valid interval"))
        .collect()
}
