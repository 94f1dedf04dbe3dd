//! Concrete objectives: quadratic forms, the shifted separable example, dense
//! subgraph, supervised hashing and affinity losses.
//!
//! Matrix-valued variables `B in {-1,+1}^{n x r}` are flattened row-major, so
//! `B[i][j]` is coordinate `i * r + j`.

mod affinity;
mod hashing;
mod quadratic;
mod separable;
mod subgraph;

pub use affinity::{make_affinity_objective, AffinityObjective, AffinityProblem};
pub use hashing::{make_hashing_objective, HashingObjective, HashingProblem};
pub use quadratic::{make_quadratic, make_sparse_quadratic, QuadraticForm, SymOperator};
pub use separable::{make_shifted_separable, ShiftedSeparable};
pub use subgraph::{make_dense_subgraph, DenseSubgraph};
