//! m-neighborhood search around a feasible point.
//!
//! Unconstrained neighbors lie within Hamming distance `m`; constrained
//! neighbors swap at most `m` (+1, -1) pairs so the count of ones is kept.

use itertools::Itertools;
use rand::seq::index;
use rand::Rng;

use crate::binary::{binomial, constraint_check, seeded_rng, BinaryVector, Constraint, SeededRng};
use crate::error::{DpcdError, Result};
use crate::objective::{check_dimension, flipped_value, value_at, Objective};

/// Without a budget, radius shells are enumerated while their running total
/// stays within this many points.
pub const EXHAUSTIVE_CAP: f64 = 100_000.0;
/// Samples drawn from the remaining radii when no budget is set.
pub const DEFAULT_SAMPLE_BUDGET: usize = 10_000;

/// Number of neighbors of a feasible `x` (excluding `x`).
pub fn neighborhood_size(x: &BinaryVector, c: Constraint, m: usize) -> f64 {
    let n = x.len();
    match c {
        Constraint::Unconstrained => (1..=m.min(n)).map(|j| binomial(n, j)).sum(),
        Constraint::ExactOnes(_) => {
            let p = x.count_ones();
            let q = n - p;
            (1..=m.min(p).min(q)).map(|j| binomial(p, j) * binomial(q, j)).sum()
        }
    }
}

/// Returns the best point among `x` and the explored neighbors; `x` itself
/// wins ties.
pub fn neighborhood_search<O: Objective + ?Sized>(
    x: &BinaryVector,
    f: &O,
    c: Constraint,
    m: usize,
    budget: usize,
    seed: u64,
) -> Result<BinaryVector> {
    check_dimension(f, x.len())?;
    if !constraint_check(x, c)? {
        return Err(DpcdError::Infeasible(format!("{x:?} violates {c:?}")));
    }
    if m == 0 {
        return Err(DpcdError::domain("neighborhood radius must be >= 1"));
    }
    let fx = value_at(f, x)?;
    let xf = x.to_f64();
    let grad = f.gradient(&xf);
    let mut rng = seeded_rng(seed);
    let mut out = x.clone();
    if let Some((flips, _)) = search(f, c, x, &xf, fx, &grad, m, budget, &mut rng) {
        out.flip_all(&flips);
    }
    Ok(out)
}

/// Core search; returns the flips of the best strictly improving neighbor.
#[allow(clippy::too_many_arguments)]
pub(crate) fn search<O: Objective + ?Sized>(
    f: &O,
    c: Constraint,
    x: &BinaryVector,
    xf: &[f64],
    fx: f64,
    grad: &[f64],
    m: usize,
    budget: usize,
    rng: &mut SeededRng,
) -> Option<(Vec<usize>, f64)> {
    let size = neighborhood_size(x, c, m);
    if size == 0.0 {
        return None;
    }
    // Guards against accepting rounding noise from incremental evaluation.
    let tol = 1e-12 * fx.abs().max(1.0);
    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut best_value = fx - tol;
    let mut scratch = Vec::with_capacity(xf.len());
    let mut consider = |flips: Vec<usize>| {
        let v = flipped_value(f, xf, fx, grad, &flips, &mut scratch);
        if v < best_value {
            best_value = v;
            best = Some((flips, v));
        }
    };

    // Whole shells (all neighbors at one radius) are enumerated smallest
    // first while they fit in the allowance; larger radii are sampled.
    let n = x.len();
    let (plus, minus): (Vec<usize>, Vec<usize>) = match c {
        Constraint::Unconstrained => ((0..n).collect(), Vec::new()),
        Constraint::ExactOnes(_) => (0..n).partition(|&i| x.get(i) == 1),
    };
    let (radius, shell): (usize, Box<dyn Fn(usize) -> f64>) = match c {
        Constraint::Unconstrained => (m.min(n), Box::new(|j| binomial(n, j))),
        Constraint::ExactOnes(_) => {
            let (p, q) = (plus.len(), minus.len());
            (m.min(p).min(q), Box::new(move |j| binomial(p, j) * binomial(q, j)))
        }
    };
    let allowance = if budget == 0 { EXHAUSTIVE_CAP } else { budget as f64 };
    let mut used = 0.0;
    let mut enumerated = 0;
    while enumerated < radius && used + shell(enumerated + 1) <= allowance {
        enumerated += 1;
        used += shell(enumerated);
    }

    for j in 1..=enumerated {
        match c {
            Constraint::Unconstrained => (0..n).combinations(j).for_each(&mut consider),
            Constraint::ExactOnes(_) => {
                for cp in plus.iter().copied().combinations(j) {
                    for cm in minus.iter().copied().combinations(j) {
                        let mut flips = cp.clone();
                        flips.extend(cm);
                        consider(flips);
                    }
                }
            }
        }
    }
    if enumerated < radius {
        let samples = if budget == 0 {
            DEFAULT_SAMPLE_BUDGET
        } else {
            budget - used as usize
        };
        for _ in 0..samples {
            let j = rng.random_range(enumerated + 1..=radius);
            let mut flips: Vec<usize> = index::sample(rng, plus.len(), j).iter().map(|i| plus[i]).collect();
            if c.is_constrained() {
                flips.extend(index::sample(rng, minus.len(), j).iter().map(|i| minus[i]));
            }
            consider(flips);
        }
    }
    best
}
