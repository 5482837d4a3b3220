//! Radially symmetric finite-volume simulator for the flux-limited
//! parabolic-elliptic Keller-Segel system
//!
//! ```text
//! u_t = ∇·( u∇u / √(u² + |∇u|²) ) − χ ∇·( u∇v / √(1 + |∇v|²) )
//! 0   = Δv − μ + u
//! ```
//!
//! on a ball `B_R(0) ⊂ ℝⁿ` with no-flux boundary conditions, together with
//! a verification harness for the differential identities satisfied by
//! radial solutions.
//!
//! Module map:
//! - [`grid`]: cell-centered radial grid and the mass functional.
//! - [`chemo`]: closed-form reconstruction of `v_r`, `v_rr`, `v_rt` from `u`.
//! - [`dynamics`]: conservative right-hand side, time stepping and runs.
//! - [`operators`]: coefficient fields of the `u_r` and `z = u_t/u` equations
//!   and their residual checks.
//! - [`diagnostics`]: scalar formulas and per-sample monitors.
//! - [`driver`]: classification, sweeps, file output and the CLI.

// `!(x > 0.0)` style guards deliberately reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chemo;
pub mod diagnostics;
pub mod driver;
pub mod dynamics;
mod error;
pub mod grid;
pub mod operators;

pub use error::{Error, Result};
