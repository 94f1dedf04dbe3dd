//! The evaluation contract every problem exposes to the solvers.

use crate::binary::BinaryVector;
use crate::error::{DpcdError, Result};

/// A differentiable objective on `[-1, 1]^n`.
///
/// `value` and `gradient_into` accept arbitrary real points so that gradients
/// can be checked by finite differences; the solvers only ever query binary
/// points. Implementations must be deterministic.
pub trait Objective: Send + Sync {
    fn dimension(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    fn gradient_into(&self, x: &[f64], out: &mut [f64]);

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dimension()];
        self.gradient_into(x, &mut g);
        g
    }

    /// Lipschitz constant of the gradient on `[-1, 1]^n`, when cheaply known.
    fn lipschitz(&self) -> Option<f64> {
        None
    }

    /// `(||A||_1, ||c||_1)` for objectives of the form `x^T A x + c^T x + d`.
    fn quadratic_norms(&self) -> Option<(f64, f64)> {
        None
    }

    /// `f(x') - f(x)` where `x'` is the binary point `x` with `flips` negated
    /// and `grad` is the gradient at `x`. `None` means "not supported, use a
    /// full evaluation".
    fn flip_delta(&self, _x: &[f64], _grad: &[f64], _flips: &[usize]) -> Option<f64> {
        None
    }

    /// Updates `grad` in place after `flips` were applied, `x_new` being the
    /// point after the flip. Returns false when unsupported (caller recomputes).
    fn update_gradient(&self, _x_new: &[f64], _grad: &mut [f64], _flips: &[usize]) -> bool {
        false
    }

    /// Constant dropped from `value` that reports add back.
    fn constant_offset(&self) -> f64 {
        0.0
    }
}

pub fn value_at<O: Objective + ?Sized>(f: &O, x: &BinaryVector) -> Result<f64> {
    let v = f.value(&x.to_f64());
    if v.is_finite() {
        Ok(v)
    } else {
        Err(DpcdError::NonFinite("objective value".into()))
    }
}

pub(crate) fn check_dimension<O: Objective + ?Sized>(f: &O, n: usize) -> Result<()> {
    if f.dimension() != n {
        return Err(DpcdError::Dimension {
            expected: f.dimension(),
            found: n,
        });
    }
    Ok(())
}

/// `f(x')` via `flip_delta` when available, else full evaluation.
pub(crate) fn flipped_value<O: Objective + ?Sized>(
    f: &O,
    x: &[f64],
    fx: f64,
    grad: &[f64],
    flips: &[usize],
    scratch: &mut Vec<f64>,
) -> f64 {
    if let Some(d) = f.flip_delta(x, grad, flips) {
        return fx + d;
    }
    scratch.clear();
    scratch.extend_from_slice(x);
    for &i in flips {
        scratch[i] = -scratch[i];
    }
    f.value(scratch)
}
