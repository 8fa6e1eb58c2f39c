//! Numerical laboratory for a scalar conservation law on `(0, 1)` with a
//! relaxation source whose rate blows up at the boundary:
//!
//! ```text
//! ∂ₜu + ∂ₓ J(u) + V(x)(u - ρ(t, x)) = 0,   u(·,0) = α,  u(·,1) = β.
//! ```
//!
//! Whether `∫ V` diverges at an endpoint decides the boundary behavior: an
//! integrable rate admits Otto-style boundary inequalities and lets the trace
//! detach from the data, a non-integrable rate forces the trace onto the data
//! through an energy bound. The crate provides
//!
//! - [`model`]: fluxes, rate profiles, boundary data, entropy–flux pairs and
//!   scenario validation;
//! - [`fv`]: a monotone finite-volume solver with an exact stiff relaxation
//!   substep that tolerates infinite rate averages;
//! - [`viscous`]: the parabolic regularization solved by IMEX stepping, the
//!   second route to the same solution;
//! - [`diagnostics`]: entropy, energy, boundary-trace, contraction and
//!   initial-continuity certification of any space-time field;
//! - [`particle`]: an event-driven long-jump exclusion process with
//!   reservoirs whose empirical density approaches the same equation;
//! - [`io`] and [`cli`]: scenario files, CSV artifacts and the command-line
//!   pipelines tying the pieces together.

pub mod cli;
pub mod diagnostics;
pub mod fv;
pub mod io;
pub mod model;
pub mod numerics;
pub mod particle;
pub mod reference;
pub mod viscous;

pub use diagnostics::{Check, CheckStatus, DiagnosticsReport, Regime};
pub use model::{Flux, Profile, RelaxationProfile, Scenario};
