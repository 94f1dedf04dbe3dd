use log::warn;

use crate::error::{DpcdError, Result};
use crate::matrix::Matrix;
use crate::objective::Objective;

/// Target affinity `S` (`n x n`, symmetric) and scale for
/// `||B B^T - scale * S||^2`. With `S = X X^T` and `scale = r` this is the
/// unsupervised reconstruction loss; with `S = Y` (label affinity) the
/// supervised one.
#[derive(Clone, Debug)]
pub struct AffinityProblem {
    pub target: Matrix,
    pub scale: f64,
    pub code_length: usize,
}

#[derive(Clone, Debug)]
pub struct AffinityObjective {
    target: Matrix,
    scale: f64,
    r: usize,
    symmetrized: bool,
}

pub fn make_affinity_objective(p: &AffinityProblem) -> Result<AffinityObjective> {
    if p.target.rows() != p.target.cols() {
        return Err(DpcdError::Shape {
            axis: "columns of S",
            expected: p.target.rows(),
            found: p.target.cols(),
        });
    }
    if p.code_length == 0 || p.target.rows() == 0 {
        return Err(DpcdError::domain("affinity problem needs n >= 1 and r >= 1"));
    }
    let symmetrized = !p.target.is_symmetric();
    let target = if symmetrized {
        warn!("affinity target is not symmetric; using (S + S^T)/2");
        p.target.symmetrized()
    } else {
        p.target.clone()
    };
    Ok(AffinityObjective {
        target,
        scale: p.scale,
        r: p.code_length,
        symmetrized,
    })
}

impl AffinityObjective {
    pub fn was_symmetrized(&self) -> bool {
        self.symmetrized
    }

    /// `E = B B^T - scale * S`.
    fn residual(&self, x: &[f64]) -> Matrix {
        let n = self.target.rows();
        let r = self.r;
        let mut e = Matrix::zeros(n, n);
        for i in 0..n {
            let bi = &x[i * r..(i + 1) * r];
            for j in 0..=i {
                let bj = &x[j * r..(j + 1) * r];
                let v = bi.iter().zip(bj).map(|(a, b)| a * b).sum::<f64>()
                    - self.scale * self.target[(i, j)];
                e[(i, j)] = v;
                e[(j, i)] = v;
            }
        }
        e
    }
}

impl Objective for AffinityObjective {
    fn dimension(&self) -> usize {
        self.target.rows() * self.r
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.residual(x).frobenius_sq()
    }

    // 4 E B
    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        let e = self.residual(x);
        let b = Matrix::from_row_major(self.target.rows(), self.r, x.to_vec()).expect("dimension");
        let eb = e.matmul(&b).expect("dimension");
        for (o, v) in out.iter_mut().zip(eb.as_slice()) {
            *o = 4.0 * v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_one_example() {
        let p = AffinityProblem {
            target: Matrix::identity(2),
            scale: 1.0,
            code_length: 1,
        };
        let f = make_affinity_objective(&p).unwrap();
        assert_eq!(f.value(&[1.0, -1.0]), 2.0);
    }

    #[test]
    fn exact_reconstruction_is_stationary() {
        let b = [1.0, -1.0, 1.0, 1.0, -1.0, -1.0];
        let bm = Matrix::from_row_major(3, 2, b.to_vec()).unwrap();
        let bbt = bm.matmul(&bm.transpose()).unwrap();
        let s = Matrix::from_row_major(3, 3, bbt.as_slice().iter().map(|v| v / 2.0).collect()).unwrap();
        let f = make_affinity_objective(&AffinityProblem {
            target: s,
            scale: 2.0,
            code_length: 2,
        })
        .unwrap();
        assert_eq!(f.value(&b), 0.0);
        assert!(f.gradient(&b).iter().all(|&g| g == 0.0));
    }

    #[test]
    fn asymmetric_target_is_symmetrized() {
        let s = Matrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let f = make_affinity_objective(&AffinityProblem {
            target: s,
            scale: 1.0,
            code_length: 1,
        })
        .unwrap();
        assert!(f.was_symmetrized());
    }
}
