//! Least-squares search for 2-circulant d×2d ETFs and the alternating
//! projections experiment.

mod lm;
mod projections;
pub mod system;

pub use lm::{random_start, solve, solve_from, solve_with_retries, SolveResult, DEFAULT_MAX_ITER, DEFAULT_TOL};
pub use projections::{
    alternating_projections_gram, d4_uniqueness_experiment, normalized_core_statistics, TrialOutcome, UniquenessStats,
};
pub use system::{analytic_jacobian, constraint_count, residual, residual_inf, variable_count};
