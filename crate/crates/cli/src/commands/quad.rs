use dpcd::objectives::make_quadratic;
use dpcd::solver::{default_epsilon, step_bound};
use dpcd::{dpcd_solve, Constraint, Matrix, Objective, ThresholdPolicy};
use rand::Rng;
use serde_json::json;

use super::{config_json, read_matrix, report_json, rng_json, signs_json};
use crate::args::{Format, QuadArgs, SOLVE_DEFAULTS};
use crate::failure::{CliResult, Failure};
use crate::output::{emit_csv, emit_json, num};

/// Symmetric `A` and `c` with entries uniform in `[-1, 1]`, drawn from the
/// generator stream of `seed` reserved for data.
pub fn random_instance(n: usize, seed: u64) -> (Matrix, Vec<f64>) {
    let mut rng = dpcd::stream_rng(seed, 4);
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.random_range(-1.0..=1.0);
            a.as_mut_slice()[i * n + j] = v;
            a.as_mut_slice()[j * n + i] = v;
        }
    }
    let c = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
    (a, c)
}

pub fn run(a: &QuadArgs) -> CliResult {
    let cfg = a.solver.config(&SOLVE_DEFAULTS)?;
    let (m, c) = match (&a.matrix, a.random) {
        (Some(_), Some(_)) => return Err(Failure::usage("give either a matrix file or --random, not both")),
        (None, None) => return Err(Failure::usage("a matrix file or --random N is required")),
        (None, Some(0)) => return Err(Failure::usage("--random needs n ≥ 1")),
        (None, Some(n)) => random_instance(n, a.solver.seed),
        (Some(path), None) => {
            let m = read_matrix(path)?;
            let c = match &a.linear {
                Some(p) => {
                    let v = read_matrix(p)?;
                    if v.rows() != 1 && v.cols() != 1 {
                        return Err(Failure::usage("--linear must be a single row or column"));
                    }
                    v.into_vec()
                }
                None => vec![0.0; m.rows()],
            };
            (m, c)
        }
    };
    let n = m.rows();
    let f = make_quadratic(m, c, a.offset)?;
    let constraint = match a.k {
        Some(k) if k > n => return Err(Failure::usage(format!("k must be ≤ n = {n}, got {k}"))),
        Some(k) => Constraint::ExactOnes(k),
        None => Constraint::Unconstrained,
    };
    let report = dpcd_solve(&f, constraint, &cfg)?;

    let l0 = f.lipschitz().unwrap_or(0.0);
    let lipschitz_bound = match cfg.threshold_policy {
        ThresholdPolicy::Lipschitz { epsilon } => {
            Some(step_bound(&f, constraint, epsilon.unwrap_or_else(|| default_epsilon(l0)), None)?)
        }
        ThresholdPolicy::GradientAverage => None,
    };

    if a.solver.format == Some(Format::Csv) {
        let row = vec![
            n.to_string(),
            num(report.final_value),
            num(report.best_value),
            report.iterations.to_string(),
            report.steps.to_string(),
            report.converged.to_string(),
        ];
        return emit_csv(&["n", "final_value", "best_value", "iterations", "steps", "converged"], &[row]);
    }

    let mut doc = json!({
        "command": "quad",
        "config": config_json(&cfg),
        "constraint": match constraint {
            Constraint::Unconstrained => json!(null),
            Constraint::ExactOnes(k) => json!({ "ones": k }),
        },
        "lipschitz_bound": lipschitz_bound,
        "lipschitz": l0,
        "n": n,
        "point": signs_json(&report.best_point),
        "rng": rng_json(a.solver.seed),
        "solver": report_json(&report),
        "symmetrized": f.was_symmetrized(),
    });
    if a.solver.timings {
        doc["timings"] = json!({ "dpcd": report.wall_time });
    }
    emit_json(&doc)
}
