use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{DpcdError, Result};
use crate::matrix::Matrix;
use crate::objective::Objective;

const ROW_BLOCK: usize = 512;

/// Supervised hashing data: labels `Y` (`n x c`), ridge weight and code length.
#[derive(Clone, Debug)]
pub struct HashingProblem {
    pub labels: Arc<Matrix>,
    pub lambda: f64,
    pub code_length: usize,
}

impl HashingProblem {
    pub fn new(labels: Matrix, lambda: f64, code_length: usize) -> Result<Self> {
        if labels.rows() == 0 || labels.cols() == 0 {
            return Err(DpcdError::domain("label matrix must be non-empty"));
        }
        if code_length == 0 {
            return Err(DpcdError::domain("code length must be >= 1"));
        }
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(DpcdError::domain(format!("lambda must be >= 0, got {lambda}")));
        }
        Ok(HashingProblem {
            labels: Arc::new(labels),
            lambda,
            code_length,
        })
    }

    pub fn samples(&self) -> usize {
        self.labels.rows()
    }

    pub fn classes(&self) -> usize {
        self.labels.cols()
    }
}

/// `f(B) = 1/2 ||Y - B W||^2 + lambda/2 ||W||^2` over row-major `B`, for a
/// fixed projection `W` (`r x c`). The `W` penalty is constant in `B` and only
/// affects reported values.
#[derive(Clone, Debug)]
pub struct HashingObjective {
    labels: Arc<Matrix>,
    w: Matrix,
    penalty: f64,
    lipschitz: f64,
}

pub fn make_hashing_objective(p: &HashingProblem, w: &Matrix) -> Result<HashingObjective> {
    if w.rows() != p.code_length {
        return Err(DpcdError::Shape {
            axis: "rows of W (code length)",
            expected: p.code_length,
            found: w.rows(),
        });
    }
    if w.cols() != p.classes() {
        return Err(DpcdError::Shape {
            axis: "columns of W (classes)",
            expected: p.classes(),
            found: w.cols(),
        });
    }
    let wwt = w.matmul(&w.transpose())?;
    Ok(HashingObjective {
        labels: Arc::clone(&p.labels),
        w: w.clone(),
        penalty: 0.5 * p.lambda * w.frobenius_sq(),
        lipschitz: wwt.max_abs_row_sum(),
    })
}

impl HashingObjective {
    fn r(&self) -> usize {
        self.w.rows()
    }

    fn residual_row(&self, b: &[f64], i: usize, out: &mut [f64]) {
        out.copy_from_slice(self.labels.row(i));
        out.iter_mut().for_each(|v| *v = -*v);
        for (j, &bij) in b.iter().enumerate() {
            for (o, &wjc) in out.iter_mut().zip(self.w.row(j)) {
                *o += bij * wjc;
            }
        }
    }

    fn gradient_row(&self, b: &[f64], i: usize, resid: &mut [f64], out: &mut [f64]) {
        self.residual_row(b, i, resid);
        for (j, o) in out.iter_mut().enumerate() {
            *o = self.w.row(j).iter().zip(resid.iter()).map(|(a, b)| a * b).sum();
        }
    }

    pub fn projection(&self) -> &Matrix {
        &self.w
    }
}

impl Objective for HashingObjective {
    fn dimension(&self) -> usize {
        self.labels.rows() * self.r()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let r = self.r();
        let c = self.labels.cols();
        let partial: Vec<f64> = x
            .par_chunks(ROW_BLOCK * r)
            .enumerate()
            .map(|(blk, chunk)| {
                let mut resid = vec![0.0; c];
                chunk
                    .chunks(r)
                    .enumerate()
                    .map(|(off, b)| {
                        self.residual_row(b, blk * ROW_BLOCK + off, &mut resid);
                        resid.iter().map(|v| v * v).sum::<f64>()
                    })
                    .sum::<f64>()
            })
            .collect();
        0.5 * partial.iter().sum::<f64>() + self.penalty
    }

    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        let r = self.r();
        let c = self.labels.cols();
        out.par_chunks_mut(ROW_BLOCK * r)
            .zip(x.par_chunks(ROW_BLOCK * r))
            .enumerate()
            .for_each(|(blk, (g, b))| {
                let mut resid = vec![0.0; c];
                for (off, (gi, bi)) in g.chunks_mut(r).zip(b.chunks(r)).enumerate() {
                    self.gradient_row(bi, blk * ROW_BLOCK + off, &mut resid, gi);
                }
            });
    }

    /// The map `B -> B W W^T` acts row by row, so its norm is bounded by the
    /// induced infinity norm of `W W^T`.
    fn lipschitz(&self) -> Option<f64> {
        Some(self.lipschitz)
    }

    fn flip_delta(&self, x: &[f64], grad: &[f64], flips: &[usize]) -> Option<f64> {
        let r = self.r();
        let mut sorted = flips.to_vec();
        sorted.sort_unstable();
        let mut delta = 0.0;
        let mut shift = vec![0.0; self.labels.cols()];
        for group in sorted.chunk_by(|a, b| a / r == b / r) {
            shift.iter_mut().for_each(|v| *v = 0.0);
            for &idx in group {
                let d = -2.0 * x[idx];
                delta += grad[idx] * d;
                for (s, &wjc) in shift.iter_mut().zip(self.w.row(idx % r)) {
                    *s += d * wjc;
                }
            }
            delta += 0.5 * shift.iter().map(|v| v * v).sum::<f64>();
        }
        Some(delta)
    }

    fn update_gradient(&self, x_new: &[f64], grad: &mut [f64], flips: &[usize]) -> bool {
        let r = self.r();
        let mut rows: Vec<usize> = flips.iter().map(|i| i / r).collect();
        rows.sort_unstable();
        rows.dedup();
        let mut resid = vec![0.0; self.labels.cols()];
        for i in rows {
            self.gradient_row(&x_new[i * r..(i + 1) * r], i, &mut resid, &mut grad[i * r..(i + 1) * r]);
        }
        true
    }
}
