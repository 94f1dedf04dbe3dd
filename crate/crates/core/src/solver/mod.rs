//! Discrete principal coordinate descent.
//!
//! Each iteration linearizes `f` at the current binary point, flips the
//! coordinates whose partial derivatives exceed adaptive thresholds (the
//! "principal" coordinates), and every `T` iterations runs a local
//! neighborhood search. Under the Lipschitz threshold policy with
//! `alpha1 = alpha2 = 1`, every flip lowers `f` by more than `2 * epsilon`,
//! which bounds the number of productive iterations.

mod bound;
mod neighborhood;
mod principal;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::binary::{constraint_check, random_feasible, stream_rng, streams, BinaryVector, Constraint};
use crate::error::{DpcdError, Result};
use crate::objective::{check_dimension, Objective};
use crate::report::{SolverReport, Termination};

pub use bound::step_bound;
pub use neighborhood::{neighborhood_search, neighborhood_size, DEFAULT_SAMPLE_BUDGET, EXHAUSTIVE_CAP};
pub use principal::{
    balanced_flip, default_epsilon, derive_thresholds, principal_sets, unconstrained_flip, PrincipalSets,
    ThresholdPolicy, Thresholds,
};

use principal::balanced_flip_indices;


#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub alpha1: f64,
    pub alpha2: f64,
    pub max_iterations: usize,
    /// Run a neighborhood search every `T` iterations; 0 disables it.
    pub neighborhood_cadence: usize,
    pub neighborhood_radius: usize,
    /// 0 enumerates the neighborhood when it is small enough.
    pub neighborhood_budget: usize,
    pub threshold_policy: ThresholdPolicy,
    /// Subtract the mean gradient before selecting coordinates under an
    /// `ExactOnes` constraint. On that slice `f` and `f + mu * 1^T x` agree
    /// for every `mu`, so only the centered gradient carries information.
    pub center_constrained_gradient: bool,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            alpha1: 1.0,
            alpha2: 1.0,
            max_iterations: 100,
            neighborhood_cadence: 10,
            neighborhood_radius: 5,
            neighborhood_budget: 0,
            threshold_policy: ThresholdPolicy::GradientAverage,
            center_constrained_gradient: true,
            seed: 0,
        }
    }
}

impl SolverConfig {
    /// The regime in which the descent guarantee holds.
    pub fn lipschitz(epsilon: Option<f64>) -> Self {
        SolverConfig {
            threshold_policy: ThresholdPolicy::Lipschitz { epsilon },
            ..SolverConfig::default()
        }
    }

    /// Same configuration with neighborhood search disabled.
    pub fn without_neighborhood(mut self) -> Self {
        self.neighborhood_cadence = 0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, a) in [("alpha1", self.alpha1), ("alpha2", self.alpha2)] {
            if !(a > 0.0 && a.is_finite()) {
                return Err(DpcdError::domain(format!("{name} must be positive, got {a}")));
            }
        }
        if self.neighborhood_cadence > 0 && self.neighborhood_radius == 0 {
            return Err(DpcdError::domain("neighborhood radius must be >= 1"));
        }
        if let ThresholdPolicy::Lipschitz { epsilon: Some(e) } = self.threshold_policy {
            if !(e > 0.0 && e.is_finite()) {
                return Err(DpcdError::domain(format!("epsilon must be positive, got {e}")));
            }
        }
        Ok(())
    }
}

/// Solves from the seeded random feasible start.
pub fn dpcd_solve<O: Objective + ?Sized>(f: &O, c: Constraint, cfg: &SolverConfig) -> Result<SolverReport> {
    c.validate(f.dimension())?;
    let start = random_feasible(f.dimension(), c, cfg.seed)?;
    dpcd_solve_from(f, c, cfg, start)
}

pub fn dpcd_solve_from<O: Objective + ?Sized>(
    f: &O,
    c: Constraint,
    cfg: &SolverConfig,
    start: BinaryVector,
) -> Result<SolverReport> {
    let clock = Instant::now();
    cfg.validate()?;
    check_dimension(f, start.len())?;
    if !constraint_check(&start, c)? {
        return Err(DpcdError::Infeasible(format!("start point violates {c:?}")));
    }
    if matches!(cfg.threshold_policy, ThresholdPolicy::Lipschitz { .. }) && f.lipschitz().is_none() {
        return Err(DpcdError::domain(
            "Lipschitz threshold policy needs an objective with a Lipschitz constant",
        ));
    }
    let at = |iteration: usize| move |e: DpcdError| DpcdError::AtIteration {
        iteration,
        source: Box::new(e),
    };
    let finite = |v: f64, what: &str| {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(DpcdError::NonFinite(what.into()))
        }
    };

    let n = start.len();
    let mut x = start;
    let mut xf = x.to_f64();
    let mut fx = finite(f.value(&xf), "objective value").map_err(at(0))?;
    let mut grad = vec![0.0; n];
    let mut work = vec![0.0; n];
    let mut nbr_rng = stream_rng(cfg.seed, streams::NEIGHBORHOOD);

    let mut trajectory = vec![fx];
    let mut flips_per_iteration = Vec::new();
    let mut best = (x.clone(), fx);
    let mut steps = 0;
    let mut neighborhood_improvements = 0;
    let mut termination = Termination::MaxIterations;

    let search_enabled = cfg.neighborhood_cadence > 0;
    for k in 1..=cfg.max_iterations {
        f.gradient_into(&xf, &mut grad);
        let selection = if c.is_constrained() && cfg.center_constrained_gradient {
            let mean = grad.iter().sum::<f64>() / n as f64;
            for (w, g) in work.iter_mut().zip(&grad) {
                *w = g - mean;
            }
            &work
        } else {
            &grad
        };
        let thresholds = derive_thresholds(selection, cfg.threshold_policy, f.lipschitz()).map_err(at(k))?;
        let sets = principal_sets(&x, selection, thresholds, cfg.alpha1, cfg.alpha2)?;
        let mut flips = match c {
            Constraint::Unconstrained => {
                let mut all = sets.s_plus;
                all.extend(sets.s_minus);
                all
            }
            Constraint::ExactOnes(_) => balanced_flip_indices(selection, &sets),
        };

        if !flips.is_empty() {
            x.flip_all(&flips);
            for &i in &flips {
                xf[i] = -xf[i];
            }
            let next = finite(f.value(&xf), "objective value").map_err(at(k))?;
            if search_enabled && next >= fx {
                // With a search available an uphill update is treated as a
                // stall, otherwise the search walks straight back and the
                // run cycles.
                x.flip_all(&flips);
                for &i in &flips {
                    xf[i] = -xf[i];
                }
                flips.clear();
            } else {
                fx = next;
            }
        }
        let mut moved = !flips.is_empty();

        // A stalled principal update also triggers the search so that a
        // fixed point is only accepted once it is neighborhood-optimal.
        let due = search_enabled && (k % cfg.neighborhood_cadence == 0 || !moved);
        if due {
            if moved && !f.update_gradient(&xf, &mut grad, &flips) {
                f.gradient_into(&xf, &mut grad);
            }
            if let Some((nflips, _)) = neighborhood::search(
                f,
                c,
                &x,
                &xf,
                fx,
                &grad,
                cfg.neighborhood_radius,
                cfg.neighborhood_budget,
                &mut nbr_rng,
            ) {
                x.flip_all(&nflips);
                for &i in &nflips {
                    xf[i] = -xf[i];
                }
                fx = finite(f.value(&xf), "objective value").map_err(at(k))?;
                neighborhood_improvements += 1;
                moved = true;
            }
        }

        trajectory.push(fx);
        flips_per_iteration.push(flips.len());
        if fx < best.1 {
            best = (x.clone(), fx);
        }
        if !moved {
            termination = Termination::Converged;
            break;
        }
        steps += 1;
    }

    Ok(SolverReport {
        final_value: fx,
        final_point: x,
        best_point: best.0,
        best_value: best.1,
        iterations: flips_per_iteration.len(),
        steps,
        flips_per_iteration,
        value_trajectory: trajectory,
        neighborhood_improvements,
        converged: termination == Termination::Converged,
        termination,
        wall_time: clock.elapsed().as_secs_f64(),
        rng_seed: cfg.seed,
    })
}
