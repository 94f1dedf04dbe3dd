//! Supervised discrete hashing by alternating minimization, and Hamming-ranking
//! retrieval metrics.

mod io;
mod retrieval;

use std::time::Instant;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::binary::{stream_rng, streams};
use crate::error::{DpcdError, Result};
use crate::matrix::Matrix;
use crate::objective::Objective;
use crate::objectives::{make_hashing_objective, HashingProblem};
use crate::solver::{dpcd_solve_from, SolverConfig};

pub use io::{load_matrix, read_matrix_binary, read_matrix_csv, write_matrix_binary, write_matrix_csv, MATRIX_MAGIC};
pub use retrieval::{evaluate_retrieval, pack_codes, RetrievalScore};

/// `W = (B^T B + lambda I)^-1 B^T Y`.
pub fn solve_w(b: &Matrix, y: &Matrix, lambda: f64) -> Result<Matrix> {
    if b.rows() != y.rows() {
        return Err(DpcdError::Shape {
            axis: "rows of labels",
            expected: b.rows(),
            found: y.rows(),
        });
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(DpcdError::domain(format!("lambda must be >= 0, got {lambda}")));
    }
    let mut gram = b.gram();
    let r = gram.rows();
    for i in 0..r {
        gram.as_mut_slice()[i * r + i] += lambda;
    }
    let rhs = b.t_matmul(y)?;
    cholesky_solve(&gram, &rhs).ok_or_else(|| {
        DpcdError::Singular(if lambda == 0.0 {
            "B^T B is singular; use lambda > 0".into()
        } else {
            "B^T B + lambda I is not positive definite".into()
        })
    })
}

/// Least-squares `P` minimizing `||X P - B||^2 + ridge ||P||^2`.
///
/// `None` uses the default ridge `1e-8 trace(X^T X) / d`. An explicit ridge of
/// zero requires `X` to have full column rank.
pub fn solve_projection(x: &Matrix, b: &Matrix, ridge: Option<f64>) -> Result<Matrix> {
    if x.rows() != b.rows() {
        return Err(DpcdError::Shape {
            axis: "rows of codes",
            expected: x.rows(),
            found: b.rows(),
        });
    }
    let d = x.cols();
    let mut gram = x.gram();
    let ridge = match ridge {
        Some(r) if r >= 0.0 && r.is_finite() => r,
        Some(r) => return Err(DpcdError::domain(format!("ridge must be >= 0, got {r}"))),
        None => 1e-8 * (0..d).map(|i| gram[(i, i)]).sum::<f64>() / d.max(1) as f64,
    };
    for i in 0..d {
        gram.as_mut_slice()[i * d + i] += ridge;
    }
    let rhs = x.t_matmul(b)?;
    cholesky_solve(&gram, &rhs)
        .ok_or_else(|| DpcdError::Singular("X is rank deficient; use a positive ridge".into()))
}

fn cholesky_solve(a: &Matrix, rhs: &Matrix) -> Option<Matrix> {
    let a = DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice());
    let rhs = DMatrix::from_row_slice(rhs.rows(), rhs.cols(), rhs.as_slice());
    let chol = a.cholesky()?;
    let l = chol.l();
    let diag = l.diagonal();
    let (lo, hi) = diag.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    // Cholesky succeeds on numerically singular input; reject those too.
    if !(lo > 0.0) || lo / hi < 1e-7 {
        return None;
    }
    let sol = chol.solve(&rhs);
    let data: Vec<f64> = sol.transpose().as_slice().to_vec();
    Matrix::from_row_major(sol.nrows(), sol.ncols(), data).ok()
}

/// `sgn(X P)` with zero mapped to `+1`.
pub fn encode(x: &Matrix, p: &Matrix) -> Result<Matrix> {
    let mut z = x.matmul(p)?;
    for v in z.as_mut_slice() {
        *v = if *v >= 0.0 {
            1.0
        } else if *v < 0.0 {
            -1.0
        } else {
            return Err(DpcdError::NonFinite("projected feature".into()));
        };
    }
    Ok(z)
}

/// A `d x r` matrix of independent standard normal entries.
pub fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut rng = stream_rng(seed, streams::GAUSSIAN);
    let data = (0..rows * cols).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    Matrix::from_row_major(rows, cols, data).expect("sizes agree")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HashConfig {
    pub outer_iterations: usize,
    pub lambda: f64,
    /// `None` uses the default ridge of [`solve_projection`].
    pub projection_ridge: Option<f64>,
    pub solver: SolverConfig,
    pub seed: u64,
}

impl Default for HashConfig {
    fn default() -> Self {
        HashConfig {
            outer_iterations: 5,
            lambda: 1.0,
            projection_ridge: None,
            solver: SolverConfig {
                max_iterations: 20,
                ..SolverConfig::default()
            },
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HashModel {
    /// Training codes, `n x r`, entries `+-1`.
    pub codes: Matrix,
    /// `r x c`.
    pub w: Matrix,
    /// `d x r`.
    pub p: Matrix,
    /// Loss after initialization and after every half-step.
    pub loss_history: Vec<f64>,
    /// Max-abs `W`-gradient after each `W` update, relative to `||B^T Y||`.
    pub w_gradient_residuals: Vec<f64>,
    /// Wall time of each outer iteration in seconds.
    pub outer_times: Vec<f64>,
}

/// Alternates exact `W` updates with DPCD on `B`, then fits `P`.
///
/// Each `B` update keeps the best iterate the solver visited, so the loss
/// never increases regardless of threshold policy.
pub fn alternating_hash(x: &Matrix, y: &Matrix, r: usize, cfg: &HashConfig) -> Result<HashModel> {
    if x.rows() != y.rows() {
        return Err(DpcdError::Shape {
            axis: "rows of labels",
            expected: x.rows(),
            found: y.rows(),
        });
    }
    let n = x.rows();
    let init = gaussian_matrix(n, r, cfg.seed);
    let codes = init.as_slice().iter().map(|&v| if v >= 0.0 { 1.0 } else { -1.0 }).collect();
    let b = Matrix::from_row_major(n, r, codes)?;
    alternating_hash_from(x, y, b, cfg)
}

/// As [`alternating_hash`], starting from the given codes.
pub fn alternating_hash_from(x: &Matrix, y: &Matrix, mut b: Matrix, cfg: &HashConfig) -> Result<HashModel> {
    let r = b.cols();
    let problem = HashingProblem::new(y.clone(), cfg.lambda, r)?;
    if b.rows() != problem.samples() {
        return Err(DpcdError::Shape {
            axis: "rows of codes",
            expected: problem.samples(),
            found: b.rows(),
        });
    }
    let by_norm = |b: &Matrix| b.t_matmul(y).map(|m| m.frobenius_sq().sqrt().max(f64::MIN_POSITIVE));

    let mut w = solve_w(&b, y, cfg.lambda)?;
    let mut w_gradient_residuals = vec![w_gradient_max(&b, y, &w, cfg.lambda)? / by_norm(&b)?];
    let mut loss_history = vec![make_hashing_objective(&problem, &w)?.value(b.as_slice())];
    let mut outer_times = Vec::with_capacity(cfg.outer_iterations);

    for outer in 0..cfg.outer_iterations {
        let clock = Instant::now();
        let f = make_hashing_objective(&problem, &w)?;
        let start = crate::binary::BinaryVector::from_signs(b.as_slice())?;
        let solver = SolverConfig {
            seed: cfg.solver.seed.wrapping_add(outer as u64),
            ..cfg.solver.clone()
        };
        let report = dpcd_solve_from(&f, crate::binary::Constraint::Unconstrained, &solver, start)?;
        b = Matrix::from_row_major(b.rows(), r, report.best_point.to_f64())?;
        loss_history.push(report.best_value);

        w = solve_w(&b, y, cfg.lambda)?;
        w_gradient_residuals.push(w_gradient_max(&b, y, &w, cfg.lambda)? / by_norm(&b)?);
        loss_history.push(make_hashing_objective(&problem, &w)?.value(b.as_slice()));
        outer_times.push(clock.elapsed().as_secs_f64());
        log::debug!("outer iteration {outer}: loss {}", loss_history.last().unwrap());
    }

    let p = solve_projection(x, &b, cfg.projection_ridge)?;
    Ok(HashModel {
        codes: b,
        w,
        p,
        loss_history,
        w_gradient_residuals,
        outer_times,
    })
}

/// Max-abs entry of `B^T (B W - Y) + lambda W`.
pub fn w_gradient_max(b: &Matrix, y: &Matrix, w: &Matrix, lambda: f64) -> Result<f64> {
    let mut residual = b.matmul(w)?;
    for (e, t) in residual.as_mut_slice().iter_mut().zip(y.as_slice()) {
        *e -= t;
    }
    let g = b.t_matmul(&residual)?;
    Ok(g.as_slice()
        .iter()
        .zip(w.as_slice())
        .map(|(gi, wi)| (gi + lambda * wi).abs())
        .fold(0.0, f64::max))
}

/// Synthetic labelled data: `classes` Gaussian clusters in `R^d`.
///
/// Class centers are standard normal scaled by `separation`; points add unit
/// noise. Class of sample `i` is `i % classes`. Returns features and one-hot
/// labels.
pub fn gaussian_clusters(n: usize, d: usize, classes: usize, separation: f64, seed: u64) -> Result<(Matrix, Matrix)> {
    if n == 0 || d == 0 || classes == 0 {
        return Err(DpcdError::domain("n, d and classes must be >= 1"));
    }
    let mut rng = stream_rng(seed, streams::CLUSTERS);
    let centers: Vec<f64> = (0..classes * d)
        .map(|_| separation * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let mut x = Matrix::zeros(n, d);
    let mut y = Matrix::zeros(n, classes);
    for i in 0..n {
        let class = i % classes;
        for (j, v) in x.row_mut(i).iter_mut().enumerate() {
            *v = centers[class * d + j] + rng.sample::<f64, _>(StandardNormal);
        }
        y.row_mut(i)[class] = 1.0;
    }
    Ok((x, y))
}
