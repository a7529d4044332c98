//! Natural direct and indirect effects under cross-world confounding.
//!
//! This crate is `no_std` (it needs `alloc`) and contains every numerical
//! piece of the toolkit:
//!
//! * [`model`] — the binary-mediator structural models with a latent `U`
//!   that links `M(0)` and `Y(1, m)` across worlds, plus Monte Carlo
//!   evaluation of natural, interventional and separable effects.
//! * [`quadrature`] and [`oracle`] — Gauss–Hermite expectations over `U` and
//!   the closed-form truth, mediational g-formula estimand and bias.
//! * [`gformula`] and [`lsem`] — estimation from observed `(A, M, Y)` data and
//!   linear SEM identification with an intermediate confounder.
//! * [`bounds`] — sharp nonparametric NDE bounds for all-binary data.
//! * [`audit`] — diagnostics of the single-world and cross-world conditions on
//!   simulated counterfactuals.
//! * [`grid`] — the parameter sweeps, their summaries and the bias-vs-β₅ slice.
//!
//! Parallel execution, file formats and the command line live in the
//! `crossworld` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod audit;
pub mod bounds;
mod error;
pub mod gformula;
pub mod grid;
pub mod lsem;
pub mod math;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod rng;

pub use error::{Error, Result};
