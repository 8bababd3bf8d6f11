//! Least-energy radial sign-changing solutions of
//!
//! ```text
//! -Δu = λu + |u|^{2*-2}u  in B_1 ⊂ R^n,   u = 0 on ∂B_1,
//! ```
//!
//! computed by shooting from the centre, together with the tools needed to
//! measure their blow-up as `λ → 0`: bubble rescalings, rate quantities, pointwise
//! envelopes, integral identities and the comparison with the Green function of
//! the ball.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod bubble;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod green;
pub mod io;
pub mod model;
pub mod ode;
pub mod quadrature;
pub mod shooting;
pub mod special;
pub mod transforms;

pub use error::{Error, Result};
pub use model::{derive_exponents, validate_lambda, Exponents, Params};
