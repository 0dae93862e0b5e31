//! Optimal sub-Gaussian variance proxies of truncated Gaussian and truncated
//! exponential random variables, with a numerical certifier for the closed
//! forms and evaluable versions of the functions used to prove them.
//!
//! ```
//! use subgauss_core::{TruncatedExponential, TruncatedGaussian};
//!
//! let g = TruncatedGaussian::standard(-2.0, 0.5).unwrap();
//! let r = g.variance_proxy();
//! assert!(r.variance_proxy > r.variance);
//!
//! let e = TruncatedExponential::standard(1.0, 4.0).unwrap();
//! let s2 = e.variance_proxy().unwrap().variance_proxy;
//! assert!((s2.sqrt() - 0.8107).abs() < 5e-4);
//! ```

pub mod certifier;
pub mod error;
pub mod lemmas;
pub mod quadrature;
pub mod special;
pub mod truncated_exponential;
pub mod truncated_gaussian;
pub mod types;

pub use certifier::{
    certify_exponential, certify_gaussian, certify_optimal_proxy, check_proxy, log_cmgf_quadrature, sample,
    GridSpec, ProxyCertificate, ProxyCheck,
};
pub use error::{Error, Result};
pub use special::ExtendedReal;
pub use truncated_exponential::TruncatedExponential;
pub use truncated_gaussian::TruncatedGaussian;
pub use types::{CaseTag, ProxyResult, Truncated, TruncationInterval};
