//! Computational toolkit for averages of Dirichlet coefficients of GL(2)
//! cuspidal representations.
//!
//! The crate is split along the natural layers of the problem:
//!
//! * [`satake`]: local algebra at an unramified prime (Satake classes,
//!   symmetric powers, adjoint and Rankin–Selberg lifts, closed forms).
//! * [`coeffgen`]: Dirichlet coefficients `λ_n` from local data, the exact
//!   Ramanujan Δ source and a Sato–Tate sampler.
//! * [`interval`] and [`bnb`]: outward-rounded interval arithmetic and a
//!   branch-and-bound global minimizer producing rigorous enclosures.
//! * [`weights`]: the auxiliary weight functions and their certified minima.
//! * [`sums`]: prime and integer partial sums, log log regressions and
//!   finite-sum inequality checks.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bnb;
pub mod coeffgen;
mod error;
pub mod interval;
pub mod primes;
pub mod satake;
pub mod summation;
pub mod sums;
pub mod weights;

pub use error::{Error, Result};

pub use bnb::{BnbConfig, CertifiedMin, Enclosure, Objective};
pub use coeffgen::{CoefficientTable, LocalData, LocalFactor, Representation, SamplerConfig};
pub use interval::{Diff, Interval};
pub use satake::{FormulaId, LiftedClass, LocalShape, UnramifiedClass};
pub use sums::{RegressionFit, SumSeries};
pub use weights::WeightFunctionId;
