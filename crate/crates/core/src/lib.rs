//! Wasserstein steepest-descent flows of Riesz discrepancies and interaction
//! energies: analytic flows from Dirac initial measures, the minimizing
//! movement scheme, quantile-space flows in one dimension, and particle
//! simulations including image halftoning.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic_flows;
pub mod cli;
pub mod equilibrium;
pub mod error;
pub mod flow1d;
pub mod format;
pub mod halftone;
pub mod isotonic;
pub mod kernels;
pub mod measures;
pub mod mms;
pub mod particles;
pub mod quadrature;
pub mod rng;

pub use error::{Error, Result};
