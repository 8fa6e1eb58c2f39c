//! Mathematical objects of the balance law: fluxes, relaxation rate profiles,
//! boundary data and relaxation targets, entropy–flux pairs, and complete
//! scenarios with validation of the standing assumptions.
//!
//! Everything here is immutable after construction and safe to share across
//! threads.

pub mod boundary;
pub mod entropy;
pub mod flux;
pub mod relaxation;
pub mod scenario;
pub mod validate;

pub use boundary::{BoundaryData, TargetFn, TimeFn};
pub use entropy::{kruzhkov_anchor_grid, kruzhkov_flux, EntropyPair, PairKind};
pub use flux::{Convexity, Flux};
pub use relaxation::RelaxationProfile;
pub use scenario::{Profile, Scenario};
pub use validate::{conforms_to_assumptions, regime, validate_assumptions};
