//! Recurrence-generated polynomial sequences and the ratios of zeros of the
//! trinomials they induce.
//!
//! A [`RecurrenceSpec`] fixes polynomials `A(z)`, `B(z)` and coprime shifts
//! `k > l >= 1`; it generates `P_n(z)` through
//! `P_n + B P_{n-l} + A P_{n-k} = 0` with `P_0 = 1`. Every zero `z0` of some
//! `P_n` with `A(z0) != 0` induces the trinomial `D(t; z0) = A(z0) t^k +
//! B(z0) t^l + 1`, and this crate locates, classifies and cross-checks the
//! ratios of its zeros.
//!
//! Module map:
//!
//! * [`poly`]: dense complex polynomials and sequence generation.
//! * [`roots`]: Aberth–Ehrlich root finding with residual certification.
//! * [`trinomial`]: `h`, `g`, `g'`, q-discriminant, ratio polynomial,
//!   rotation to real coefficients.
//! * [`classify`]: ratio extraction, zero geometry and theorem verifiers.
//! * [`experiments`]: table/figure reproduction, fuzzing and reports.
//! * [`cli`]: the `trl` command-line front end.

pub mod classify;
pub mod cli;
mod error;
pub mod experiments;
pub mod poly;
mod precise;
pub mod roots;
pub mod trinomial;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use poly::{ComplexPoly, RecurrenceSpec};
pub use roots::{RootSet, SolverOptions};
pub use trinomial::TrinomialSpec;

/// Crate version embedded in every emitted artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
