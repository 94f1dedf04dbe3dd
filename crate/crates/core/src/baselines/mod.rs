//! Comparison solvers and ground-truth oracles.

mod oracle;
mod peel;
mod sgm;

pub use oracle::{exhaustive_oracle, random_search, OracleResult, DEFAULT_ORACLE_LIMIT};
pub use peel::greedy_peel;
pub use sgm::{sgm_solve, SgmConfig};
