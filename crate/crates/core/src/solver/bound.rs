use crate::binary::Constraint;
use crate::error::{DpcdError, Result};
use crate::objective::Objective;

/// Upper bound on the number of productive iterations under the Lipschitz
/// threshold policy with `alpha1 = alpha2 = 1`.
///
/// With known extremes of `f` over `{-1,+1}^n` the bound is
/// `(f_max - f_min) / (2 epsilon)`. For quadratics `x^T A x + c^T x + d`
/// without extremes, `f_max - f_min <= 2 (||A||_1 + ||c||_1)` gives
/// `(||A||_1 + ||c||_1) / epsilon`.
pub fn step_bound<O: Objective + ?Sized>(
    f: &O,
    c: Constraint,
    epsilon: f64,
    oracle_bounds: Option<(f64, f64)>,
) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(DpcdError::domain(format!("epsilon must be positive, got {epsilon}")));
    }
    c.validate(f.dimension())?;
    if let Some((f_min, f_max)) = oracle_bounds {
        if f_max < f_min {
            return Err(DpcdError::domain(format!("f_max {f_max} is below f_min {f_min}")));
        }
        return Ok((f_max - f_min) / (2.0 * epsilon));
    }
    match f.quadratic_norms() {
        Some((a, lin)) => Ok((a + lin) / epsilon),
        None => Err(DpcdError::BoundUnavailable(
            "objective is not quadratic and no extremes were supplied".into(),
        )),
    }
}
