use serde::Serialize;

use crate::binary::BinaryVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// The last iteration left the iterate unchanged.
    Converged,
    MaxIterations,
    /// Period-2 cycle `x, y, x` with `y != x` (signed gradient method).
    Oscillation,
}

/// Outcome of a solver run.
///
/// `value_trajectory[k]` is the objective after iteration `k` (index 0 is the
/// start), so it has `iterations + 1` entries. When the run converged, the
/// final iteration is the one that changed nothing and the last two
/// trajectory entries belong to the same point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolverReport {
    pub final_point: BinaryVector,
    pub final_value: f64,
    /// Lowest-valued iterate visited (equal to `final_point` for monotone runs).
    pub best_point: BinaryVector,
    pub best_value: f64,
    pub iterations: usize,
    /// Iterations that actually moved the iterate.
    pub steps: usize,
    pub flips_per_iteration: Vec<usize>,
    pub value_trajectory: Vec<f64>,
    pub neighborhood_improvements: usize,
    pub converged: bool,
    pub termination: Termination,
    pub wall_time: f64,
    pub rng_seed: u64,
}

impl SolverReport {
    pub fn oscillated(&self) -> bool {
        self.termination == Termination::Oscillation
    }

    pub fn total_flips(&self) -> usize {
        self.flips_per_iteration.iter().sum()
    }
}
