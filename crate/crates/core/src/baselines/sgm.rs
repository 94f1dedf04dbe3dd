use std::time::Instant;

use crate::binary::{hamming_distance, random_feasible, BinaryVector, Constraint};
use crate::error::{DpcdError, Result};
use crate::objective::{check_dimension, Objective};
use crate::report::{SolverReport, Termination};

#[derive(Clone, Debug, PartialEq)]
pub struct SgmConfig {
    pub max_iterations: usize,
    pub seed: u64,
    /// Random start from `seed` when absent.
    pub start: Option<BinaryVector>,
}

impl Default for SgmConfig {
    fn default() -> Self {
        SgmConfig {
            max_iterations: 100,
            seed: 0,
            start: None,
        }
    }
}

/// Signed gradient method: `x <- -sgn(grad f(x))` on every coordinate.
///
/// Stops on a fixed point or on a period-2 cycle, which is reported as
/// [`Termination::Oscillation`]. Longer cycles run into the iteration cap.
pub fn sgm_solve<O: Objective + ?Sized>(f: &O, c: Constraint, cfg: &SgmConfig) -> Result<SolverReport> {
    let clock = Instant::now();
    if c.is_constrained() {
        return Err(DpcdError::UnsupportedConstraint(
            "the signed gradient update cannot keep the number of ones fixed".into(),
        ));
    }
    let n = f.dimension();
    let x0 = match &cfg.start {
        Some(s) => s.clone(),
        None => random_feasible(n, c, cfg.seed)?,
    };
    check_dimension(f, x0.len())?;

    let eval = |x: &BinaryVector, k: usize| -> Result<f64> {
        let v = f.value(&x.to_f64());
        if v.is_finite() {
            Ok(v)
        } else {
            Err(DpcdError::AtIteration {
                iteration: k,
                source: Box::new(DpcdError::NonFinite("objective value".into())),
            })
        }
    };

    let mut prev: Option<BinaryVector> = None;
    let mut x = x0;
    let mut fx = eval(&x, 0)?;
    let mut trajectory = vec![fx];
    let mut flips = Vec::new();
    let mut best = (x.clone(), fx);
    let mut steps = 0;
    let mut termination = Termination::MaxIterations;
    let mut grad = vec![0.0; n];

    for k in 1..=cfg.max_iterations {
        f.gradient_into(&x.to_f64(), &mut grad);
        let neg: Vec<f64> = grad.iter().map(|g| -g).collect();
        let next = BinaryVector::from_signs(&neg).map_err(|e| DpcdError::AtIteration {
            iteration: k,
            source: Box::new(e),
        })?;
        let changed = hamming_distance(&x, &next)?;
        let fnext = if changed > 0 { eval(&next, k)? } else { fx };
        trajectory.push(fnext);
        flips.push(changed);
        if fnext < best.1 {
            best = (next.clone(), fnext);
        }
        if changed == 0 {
            termination = Termination::Converged;
            break;
        }
        steps += 1;
        let cycle = prev.as_ref() == Some(&next);
        prev = Some(std::mem::replace(&mut x, next));
        fx = fnext;
        if cycle {
            termination = Termination::Oscillation;
            break;
        }
    }

    Ok(SolverReport {
        final_point: x,
        final_value: fx,
        best_point: best.0,
        best_value: best.1,
        iterations: flips.len(),
        steps,
        flips_per_iteration: flips,
        value_trajectory: trajectory,
        neighborhood_improvements: 0,
        converged: termination == Termination::Converged,
        termination,
        wall_time: clock.elapsed().as_secs_f64(),
        rng_seed: cfg.seed,
    })
}
