use log::warn;

use crate::error::{DpcdError, Result};
use crate::matrix::{CsrMatrix, Matrix};
use crate::objective::Objective;

/// Symmetric matrix storage for a quadratic form.
#[derive(Clone, Debug)]
pub enum SymOperator {
    Dense(Matrix),
    Sparse(CsrMatrix),
}

impl SymOperator {
    pub fn dim(&self) -> usize {
        match self {
            SymOperator::Dense(m) => m.rows(),
            SymOperator::Sparse(m) => m.dim(),
        }
    }

    pub fn mat_vec(&self, x: &[f64]) -> Vec<f64> {
        match self {
            SymOperator::Dense(m) => m.mat_vec(x),
            SymOperator::Sparse(m) => m.mat_vec(x),
        }
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        match self {
            SymOperator::Dense(m) => m[(i, j)],
            SymOperator::Sparse(m) => m.get(i, j),
        }
    }

    /// Adds `s * A[:, i]` (= row `i`, by symmetry) to `out`.
    fn axpy_column(&self, i: usize, s: f64, out: &mut [f64]) {
        match self {
            SymOperator::Dense(m) => {
                for (o, a) in out.iter_mut().zip(m.row(i)) {
                    *o += s * a;
                }
            }
            SymOperator::Sparse(m) => {
                for (j, a) in m.row(i) {
                    out[j] += s * a;
                }
            }
        }
    }

    pub fn entry_l1(&self) -> f64 {
        match self {
            SymOperator::Dense(m) => m.entry_l1(),
            SymOperator::Sparse(m) => m.entry_l1(),
        }
    }

    pub fn max_abs_row_sum(&self) -> f64 {
        match self {
            SymOperator::Dense(m) => m.max_abs_row_sum(),
            SymOperator::Sparse(m) => m.max_abs_row_sum(),
        }
    }
}

/// `f(x) = x^T A x + c^T x + d` with `A` symmetric.
#[derive(Clone, Debug)]
pub struct QuadraticForm {
    a: SymOperator,
    c: Vec<f64>,
    d: f64,
    lipschitz: f64,
    symmetrized: bool,
}

/// Builds a dense quadratic objective. A non-symmetric `A` is replaced by
/// `(A + A^T) / 2`, which leaves the value on every point unchanged; the
/// objective remembers that this happened.
pub fn make_quadratic(a: Matrix, c: Vec<f64>, d: f64) -> Result<QuadraticForm> {
    if a.rows() != a.cols() {
        return Err(DpcdError::Shape {
            axis: "columns of A",
            expected: a.rows(),
            found: a.cols(),
        });
    }
    if c.len() != a.rows() {
        return Err(DpcdError::Shape {
            axis: "length of c",
            expected: a.rows(),
            found: c.len(),
        });
    }
    if !a.all_finite() || !c.iter().all(|v| v.is_finite()) || !d.is_finite() {
        return Err(DpcdError::NonFinite("quadratic coefficients".into()));
    }
    let symmetrized = !a.is_symmetric();
    let a = if symmetrized {
        warn!("quadratic matrix is not symmetric; using (A + A^T)/2");
        a.symmetrized()
    } else {
        a
    };
    Ok(QuadraticForm::from_parts(SymOperator::Dense(a), c, d, symmetrized))
}

/// Sparse variant; the triplets must already describe a symmetric matrix.
pub fn make_sparse_quadratic(a: CsrMatrix, c: Vec<f64>, d: f64) -> Result<QuadraticForm> {
    if c.len() != a.dim() {
        return Err(DpcdError::Shape {
            axis: "length of c",
            expected: a.dim(),
            found: c.len(),
        });
    }
    Ok(QuadraticForm::from_parts(SymOperator::Sparse(a), c, d, false))
}

impl QuadraticForm {
    fn from_parts(a: SymOperator, c: Vec<f64>, d: f64, symmetrized: bool) -> Self {
        let lipschitz = 2.0 * a.max_abs_row_sum();
        QuadraticForm {
            a,
            c,
            d,
            lipschitz,
            symmetrized,
        }
    }

    pub fn matrix(&self) -> &SymOperator {
        &self.a
    }

    pub fn linear(&self) -> &[f64] {
        &self.c
    }

    pub fn offset(&self) -> f64 {
        self.d
    }

    pub fn was_symmetrized(&self) -> bool {
        self.symmetrized
    }
}

impl Objective for QuadraticForm {
    fn dimension(&self) -> usize {
        self.c.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let ax = self.a.mat_vec(x);
        x.iter()
            .zip(&ax)
            .zip(&self.c)
            .map(|((xi, axi), ci)| xi * axi + ci * xi)
            .sum::<f64>()
            + self.d
    }

    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        let ax = self.a.mat_vec(x);
        for ((o, axi), ci) in out.iter_mut().zip(&ax).zip(&self.c) {
            *o = 2.0 * axi + ci;
        }
    }

    /// Induced infinity norm of `2A`; it bounds the spectral norm for
    /// symmetric `A`.
    fn lipschitz(&self) -> Option<f64> {
        Some(self.lipschitz)
    }

    fn quadratic_norms(&self) -> Option<(f64, f64)> {
        Some((self.a.entry_l1(), self.c.iter().map(|v| v.abs()).sum()))
    }

    // With d_i = -2 x_i on the flipped set: delta = g^T d + d^T A d.
    fn flip_delta(&self, x: &[f64], grad: &[f64], flips: &[usize]) -> Option<f64> {
        let mut delta = 0.0;
        for (p, &i) in flips.iter().enumerate() {
            let di = -2.0 * x[i];
            delta += grad[i] * di + self.a.get(i, i) * di * di;
            for &j in &flips[..p] {
                delta += 2.0 * self.a.get(i, j) * di * (-2.0 * x[j]);
            }
        }
        Some(delta)
    }

    fn update_gradient(&self, x_new: &[f64], grad: &mut [f64], flips: &[usize]) -> bool {
        for &i in flips {
            // x_new[i] - x_old[i] = 2 x_new[i]
            self.a.axpy_column(i, 4.0 * x_new[i], grad);
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_example() {
        let q = make_quadratic(Matrix::identity(2), vec![0.0, 0.0], 0.0).unwrap();
        assert_eq!(q.value(&[1.0, -1.0]), 2.0);
        assert_eq!(q.gradient(&[1.0, -1.0]), vec![2.0, -2.0]);
        assert_eq!(q.lipschitz(), Some(2.0));
    }

    #[test]
    fn linear_gradient_is_constant() {
        let q = make_quadratic(Matrix::zeros(2, 2), vec![1.0, -1.0], 0.0).unwrap();
        for x in [[1.0, 1.0], [-1.0, 0.3], [0.0, -1.0]] {
            assert_eq!(q.gradient(&x), vec![1.0, -1.0]);
        }
    }

    #[test]
    fn asymmetric_input_is_symmetrized() {
        let a = Matrix::from_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        let q = make_quadratic(a, vec![0.0; 2], 0.0).unwrap();
        assert!(q.was_symmetrized());
        assert_eq!(q.value(&[1.0, 1.0]), 2.0);
        assert_eq!(q.gradient(&[1.0, 1.0]), vec![2.0, 2.0]);
    }

    #[test]
    fn shape_errors() {
        assert!(make_quadratic(Matrix::zeros(2, 3), vec![0.0; 2], 0.0).is_err());
        assert!(make_quadratic(Matrix::zeros(2, 2), vec![0.0; 3], 0.0).is_err());
    }

    #[test]
    fn delta_and_gradient_update_match_full_evaluation() {
        let a = Matrix::from_rows(&[
            vec![1.0, -2.0, 0.5],
            vec![-2.0, 0.0, 3.0],
            vec![0.5, 3.0, -1.0],
        ])
        .unwrap();
        let q = make_quadratic(a, vec![0.3, -0.7, 1.1], 2.0).unwrap();
        let x = [1.0, -1.0, 1.0];
        let g = q.gradient(&x);
        let flips = [0usize, 2];
        let mut y = x;
        for &i in &flips {
            y[i] = -y[i];
        }
        let delta = q.flip_delta(&x, &g, &flips).unwrap();
        assert!((q.value(&y) - q.value(&x) - delta).abs() < 1e-12);
        let mut g2 = g.clone();
        assert!(q.update_gradient(&y, &mut g2, &flips));
        for (u, v) in g2.iter().zip(q.gradient(&y)) {
            assert!((u - v).abs() < 1e-12);
        }
    }
}
