use itertools::Itertools;
use serde::Serialize;

use crate::binary::{random_feasible_with, stream_rng, streams, BinaryVector, Constraint};
use crate::error::{DpcdError, Result};
use crate::objective::{value_at, Objective};

/// Unconstrained problems up to `n = 20` (about a million points).
pub const DEFAULT_ORACLE_LIMIT: u32 = 20;

// Incremental Gray-code values are re-anchored with a full evaluation this often.
const RESYNC_EVERY: u64 = 1 << 10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleResult {
    pub optimum: BinaryVector,
    pub optimal_value: f64,
    pub f_min: f64,
    /// Only exhaustive search knows the maximum.
    pub f_max: Option<f64>,
    pub evaluations: u64,
}

/// Global minimum and maximum of `f` over the feasible set.
///
/// Refuses when the feasible set has more than `2^limit` points.
/// Unconstrained problems are walked in Gray-code order, using incremental
/// evaluation when the objective supports it.
pub fn exhaustive_oracle<O: Objective + ?Sized>(f: &O, c: Constraint, limit: u32) -> Result<OracleResult> {
    let n = f.dimension();
    c.validate(n)?;
    let size = c.feasible_count(n);
    if size > 2f64.powi(limit as i32) {
        return Err(DpcdError::OracleLimit { size, limit });
    }
    let (min_point, max_point, evaluations) = match c {
        Constraint::Unconstrained => gray_walk(f, n),
        Constraint::ExactOnes(r) => {
            let mut min: Option<(BinaryVector, f64)> = None;
            let mut max: Option<(BinaryVector, f64)> = None;
            let mut count = 0u64;
            for support in (0..n).combinations(r) {
                let x = BinaryVector::from_support(n, &support)?;
                let v = f.value(&x.to_f64());
                count += 1;
                if min.as_ref().is_none_or(|m| v < m.1) {
                    min = Some((x.clone(), v));
                }
                if max.as_ref().is_none_or(|m| v > m.1) {
                    max = Some((x, v));
                }
            }
            (min.expect("non-empty").0, max.expect("non-empty").0, count)
        }
    };
    let optimal_value = value_at(f, &min_point)?;
    let f_max = value_at(f, &max_point)?;
    Ok(OracleResult {
        optimum: min_point,
        optimal_value,
        f_min: optimal_value,
        f_max: Some(f_max),
        evaluations,
    })
}

fn gray_walk<O: Objective + ?Sized>(f: &O, n: usize) -> (BinaryVector, BinaryVector, u64) {
    let mut x = vec![-1.0; n];
    let mut fx = f.value(&x);
    let mut grad = f.gradient(&x);
    let incremental = f.flip_delta(&x, &grad, &[0]).is_some();
    let mut min = (x.clone(), fx);
    let mut max = (x.clone(), fx);
    let total: u64 = 1 << n;
    for t in 1..total {
        let i = t.trailing_zeros() as usize;
        if incremental {
            let d = f.flip_delta(&x, &grad, &[i]).expect("supported");
            x[i] = -x[i];
            if t % RESYNC_EVERY == 0 {
                fx = f.value(&x);
                f.gradient_into(&x, &mut grad);
            } else {
                fx += d;
                if !f.update_gradient(&x, &mut grad, &[i]) {
                    f.gradient_into(&x, &mut grad);
                }
            }
        } else {
            x[i] = -x[i];
            fx = f.value(&x);
        }
        if fx < min.1 {
            min = (x.clone(), fx);
        }
        if fx > max.1 {
            max = (x.clone(), fx);
        }
    }
    let to_bv = |v: &[f64]| BinaryVector::from_signs(v).expect("binary point");
    (to_bv(&min.0), to_bv(&max.0), total)
}

/// Best of `samples` random feasible draws.
pub fn random_search<O: Objective + ?Sized>(
    f: &O,
    c: Constraint,
    samples: usize,
    seed: u64,
) -> Result<OracleResult> {
    if samples == 0 {
        return Err(DpcdError::domain("random search needs at least one sample"));
    }
    let n = f.dimension();
    let mut rng = stream_rng(seed, streams::RANDOM_SEARCH);
    let mut best: Option<(BinaryVector, f64)> = None;
    for _ in 0..samples {
        let x = random_feasible_with(n, c, &mut rng)?;
        let v = value_at(f, &x)?;
        if best.as_ref().is_none_or(|b| v < b.1) {
            best = Some((x, v));
        }
    }
    let (optimum, optimal_value) = best.expect("samples >= 1");
    Ok(OracleResult {
        optimum,
        optimal_value,
        f_min: optimal_value,
        f_max: None,
        evaluations: samples as u64,
    })
}
