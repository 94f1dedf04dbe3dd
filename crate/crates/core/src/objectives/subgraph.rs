use crate::binary::{BinaryVector, Constraint};
use crate::error::{DpcdError, Result};
use crate::graph::SparseGraph;
use crate::objective::Objective;

use super::quadratic::{make_sparse_quadratic, QuadraticForm};

/// Densest-k-subgraph in `y in {-1,+1}^n` form.
///
/// With `x = (y + 1) / 2`, maximizing `x^T W x` subject to `1^T x = k` is the
/// same as minimizing `-y^T W y - 2 y^T W 1 - 1^T W 1` subject to
/// `1^T y = 2k - n`. The constant `-1^T W 1` is left out of `value` and
/// reported through `constant_offset`, so `value(y) + constant_offset()`
/// equals `-4 x^T W x`.
#[derive(Clone, Debug)]
pub struct DenseSubgraph {
    form: QuadraticForm,
    total_weight: f64,
    k: usize,
}

pub fn make_dense_subgraph(w: &SparseGraph, k: usize) -> Result<(DenseSubgraph, Constraint)> {
    let n = w.node_count();
    if k > n {
        return Err(DpcdError::domain(format!("k = {k} exceeds n = {n}")));
    }
    // SparseGraph cannot hold self-loops; a zero diagonal is guaranteed.
    let a = w.adjacency().scaled(-1.0);
    let c: Vec<f64> = w.weighted_degrees().iter().map(|d| -2.0 * d).collect();
    let form = make_sparse_quadratic(a, c, 0.0)?;
    Ok((
        DenseSubgraph {
            form,
            total_weight: w.total_weight(),
            k,
        },
        Constraint::ExactOnes(k),
    ))
}

impl DenseSubgraph {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn quadratic(&self) -> &QuadraticForm {
        &self.form
    }

    /// Full objective with the dropped constant restored.
    pub fn restored_value(&self, y: &BinaryVector) -> f64 {
        self.form.value(&y.to_f64()) - self.total_weight
    }

    /// `x^T W x / k` recovered from the objective value.
    pub fn density_of(&self, y: &BinaryVector) -> f64 {
        -self.restored_value(y) / (4.0 * self.k as f64)
    }
}

impl Objective for DenseSubgraph {
    fn dimension(&self) -> usize {
        self.form.dimension()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.form.value(x)
    }

    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        self.form.gradient_into(x, out)
    }

    fn lipschitz(&self) -> Option<f64> {
        self.form.lipschitz()
    }

    fn quadratic_norms(&self) -> Option<(f64, f64)> {
        self.form.quadratic_norms()
    }

    fn flip_delta(&self, x: &[f64], grad: &[f64], flips: &[usize]) -> Option<f64> {
        self.form.flip_delta(x, grad, flips)
    }

    fn update_gradient(&self, x_new: &[f64], grad: &mut [f64], flips: &[usize]) -> bool {
        self.form.update_gradient(x_new, grad, flips)
    }

    fn constant_offset(&self) -> f64 {
        -self.total_weight
    }
}
