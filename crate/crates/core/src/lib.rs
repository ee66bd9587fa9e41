//! Honest Monte Carlo error assessment for Markov chain output.
//!
//! This crate holds the numerical side of the toolkit:
//!
//! * [`rng`]: a seeded, reproducible generator with normal and gamma variates.
//! * [`dist`]: log-gamma, the regularized incomplete beta function and the
//!   normal / Student-t distribution functions used for critical values.
//! * [`mcse`]: batch means (BM), overlapping batch means (OBM), type-1
//!   quantiles, subsampling standard errors for quantiles and the matching
//!   confidence intervals.
//! * [`samplers`]: an AR(1) chain, a data-augmentation Gibbs sampler for a
//!   Student-t target with 4 degrees of freedom and a Gibbs sampler for a
//!   normal mean/variance posterior.
//! * [`diagnostics`]: running estimates, autocorrelation, Rao-Blackwellized
//!   estimators and kernel density estimates.
//! * [`stopping`]: fixed-width sequential stopping rules.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the
//! command-line front end live in the `mcmc-confidence` crate.
//!
//! ```
//! use mcmc_confidence_core::mcse::{mcse_obm, BatchPolicy};
//! use mcmc_confidence_core::rng::Rng;
//! use mcmc_confidence_core::samplers::{ar1_run, Ar1Params};
//!
//! let params = Ar1Params::new(0.5, 1.0).unwrap();
//! let mut rng = Rng::new(1976);
//! let chain = ar1_run(1.0, 2000, params, &mut rng).unwrap();
//! let est = mcse_obm(chain.values(), BatchPolicy::SquareRoot, |x| x)
//!     .unwrap()
//!     .into_value()
//!     .unwrap();
//! assert!(est.se > 0.0 && est.se < 0.2);
//! ```
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod diagnostics;
pub mod dist;
mod error;
pub mod mcse;
pub mod rng;
pub mod samplers;
pub mod stopping;

pub use error::{Error, Result};
