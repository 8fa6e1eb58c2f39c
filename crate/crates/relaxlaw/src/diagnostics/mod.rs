//! Numerical certification of candidate entropy solutions: weak-form entropy
//! residuals, the relaxation energy bound, boundary traces and Otto
//! inequalities, L¹ contraction and initial continuity. Every check is a
//! pure function of its inputs and reports a named verdict with the measured
//! value and tolerance.

pub mod checks;
pub mod report;
pub mod testfn;

pub use checks::{
    boundary_trace, build_k_grid, cell_entropy_residual, contraction_check, diagnostic_times,
    energy_bound_value, energy_refinement_check, entropy_residual, initial_continuity,
    kruzhkov_weak_residual, manufactured, CONTRACTION_SLACK_CELLS, ENTROPY_SLACK_COEFF,
    OTTO_SLACK, TRACE_TOL,
};
pub use report::{Check, CheckStatus, DiagnosticsReport, Regime};
pub use testfn::{SpaceTest, TestFunctionFamily, TimeTest};
