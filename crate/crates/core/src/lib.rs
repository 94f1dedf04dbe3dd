//! Discrete principal coordinate descent (DPCD) for `min f(x)` over
//! `x in {-1, +1}^n`, optionally with an exact number of `+1` entries.
//!
//! The crate ships the solver, the signed gradient method and exhaustive,
//! random and greedy-peeling baselines, objective families (quadratic,
//! separable, dense subgraph, supervised hashing, affinity), graph loaders
//! and generators, and a supervised hashing driver.

pub mod baselines;
mod binary;
mod error;
pub mod graph;
pub mod hashing;
mod matrix;
mod objective;
pub mod objectives;
mod report;
pub mod solver;

pub use binary::{
    binomial, constraint_check, hamming_distance, random_feasible, random_feasible_with, seeded_rng, sign, stream_rng,
    BinaryVector, Constraint, SeededRng,
};
pub use error::{DpcdError, Result};
pub use matrix::{CsrMatrix, Matrix};
pub use objective::{value_at, Objective};
pub use report::{SolverReport, Termination};
pub use solver::{dpcd_solve, dpcd_solve_from, SolverConfig, ThresholdPolicy};
