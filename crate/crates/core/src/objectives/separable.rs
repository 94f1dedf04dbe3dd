use crate::error::{DpcdError, Result};
use crate::objective::Objective;

/// `f(x) = 1/2 * sum_i (x_i + beta_i)^2` with every `beta_i in (0, 1)`.
///
/// Its minimum over `{-1,+1}^n` is the all `-1` point, and the signed gradient
/// update oscillates between `x` and `-x` from any start.
#[derive(Clone, Debug)]
pub struct ShiftedSeparable {
    beta: Vec<f64>,
}

pub fn make_shifted_separable(beta: Vec<f64>) -> Result<ShiftedSeparable> {
    if beta.is_empty() {
        return Err(DpcdError::domain("beta must be non-empty"));
    }
    if let Some(b) = beta.iter().find(|&&b| !(b > 0.0 && b < 1.0)) {
        return Err(DpcdError::domain(format!("beta entries must lie in (0, 1), got {b}")));
    }
    Ok(ShiftedSeparable { beta })
}

impl ShiftedSeparable {
    pub fn beta(&self) -> &[f64] {
        &self.beta
    }
}

impl Objective for ShiftedSeparable {
    fn dimension(&self) -> usize {
        self.beta.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        0.5 * x
            .iter()
            .zip(&self.beta)
            .map(|(xi, b)| (xi + b) * (xi + b))
            .sum::<f64>()
    }

    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        for ((o, xi), b) in out.iter_mut().zip(x).zip(&self.beta) {
            *o = xi + b;
        }
    }

    fn lipschitz(&self) -> Option<f64> {
        Some(1.0)
    }

    // x^T (I/2) x + beta^T x + |beta|^2 / 2
    fn quadratic_norms(&self) -> Option<(f64, f64)> {
        Some((0.5 * self.beta.len() as f64, self.beta.iter().sum()))
    }

    fn flip_delta(&self, x: &[f64], _grad: &[f64], flips: &[usize]) -> Option<f64> {
        Some(flips.iter().map(|&i| -2.0 * x[i] * self.beta[i]).sum())
    }

    fn update_gradient(&self, x_new: &[f64], grad: &mut [f64], flips: &[usize]) -> bool {
        for &i in flips {
            grad[i] = x_new[i] + self.beta[i];
        }
        true
    }
}
