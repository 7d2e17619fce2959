//! Numerics for the principal-value trace laws X(s) and Y(nu).
//!
//! The crate evaluates characteristic functions, densities and complex
//! moments of X(s), the finite-N Hua-Pickrell and inverse-Laguerre
//! determinant formulas, and residuals of the associated sigma-form
//! Painleve equations. Independent quadrature oracles and Monte Carlo
//! samplers are provided for cross-checking.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bessel_inverse_laguerre;
pub mod diff;
pub mod ensembles_mc;
pub mod error;
pub mod gram;
pub mod hua_charfn;
pub mod oracles;
pub mod painleve_residuals;
pub mod specfun;
pub mod verify;
pub mod xs_distribution;

mod dd;

pub use error::{Error, Result};
pub use specfun::{EvalResult, SeriesConfig};
