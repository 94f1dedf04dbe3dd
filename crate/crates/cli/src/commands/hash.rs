use std::time::Instant;

use dpcd::hashing::{alternating_hash, encode, evaluate_retrieval, HashConfig};
use serde_json::json;

use super::{config_json, read_matrix, rng_json};
use crate::args::{Defaults, Format, HashArgs, ThresholdMode};
use crate::failure::{CliResult, Failure};
use crate::output::{emit_csv, emit_json, num};

const HASH_DEFAULTS: Defaults = Defaults {
    threshold_mode: ThresholdMode::Average,
    max_iters: 20,
    nbr_cadence: 10,
};

pub fn run(a: &HashArgs) -> CliResult {
    let solver = a.solver.config(&HASH_DEFAULTS)?;
    if a.code_length == 0 {
        return Err(Failure::usage("--code-length must be ≥ 1"));
    }
    if a.eval.is_some() != a.eval_labels.is_some() {
        return Err(Failure::usage("--eval and --eval-labels must be given together"));
    }
    let x = read_matrix(&a.features)?;
    let y = read_matrix(&a.labels)?;
    if x.rows() != y.rows() {
        return Err(Failure::usage(format!(
            "features have {} rows but labels have {}",
            x.rows(),
            y.rows()
        )));
    }
    let queries = match (&a.eval, &a.eval_labels) {
        (Some(q), Some(ql)) => {
            let (q, ql) = (read_matrix(q)?, read_matrix(ql)?);
            if q.cols() != x.cols() {
                return Err(Failure::usage(format!(
                    "query features have {} columns, training features {}",
                    q.cols(),
                    x.cols()
                )));
            }
            if a.top_k == 0 || a.top_k > x.rows() {
                return Err(Failure::usage(format!(
                    "--top-k must be between 1 and the database size {}, got {}",
                    x.rows(),
                    a.top_k
                )));
            }
            Some((q, ql))
        }
        _ => None,
    };

    let cfg = HashConfig {
        outer_iterations: a.outer_iters,
        lambda: a.lambda,
        projection_ridge: None,
        solver,
        seed: a.solver.seed,
    };
    let clock = Instant::now();
    let model = alternating_hash(&x, &y, a.code_length, &cfg)?;
    let train_time = clock.elapsed().as_secs_f64();

    let scores = match &queries {
        Some((q, ql)) => {
            let s = evaluate_retrieval(&encode(q, &model.p)?, &encode(&x, &model.p)?, ql, &y, a.top_k)?;
            json!({ "k": s.k, "map": s.map, "precision_at_k": s.precision_at_k })
        }
        None => serde_json::Value::Null,
    };

    if a.solver.format == Some(Format::Csv) {
        let rows: Vec<Vec<String>> = model
            .loss_history
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let phase = match i {
                    0 => "init",
                    _ if i % 2 == 1 => "codes",
                    _ => "projection",
                };
                vec![i.to_string(), phase.to_string(), num(*l)]
            })
            .collect();
        return emit_csv(&["step", "phase", "loss"], &rows);
    }

    let mut doc = json!({
        "classes": y.cols(),
        "code_length": a.code_length,
        "command": "hash",
        "config": config_json(&cfg.solver),
        "features": x.cols(),
        "lambda": a.lambda,
        "loss_history": model.loss_history,
        "outer_iterations": a.outer_iters,
        "rng": rng_json(a.solver.seed),
        "samples": x.rows(),
        "scores": scores,
        "w_gradient_residuals": model.w_gradient_residuals,
    });
    if a.solver.timings {
        doc["timings"] = json!({ "outer_iterations": model.outer_times, "total": train_time });
    }
    emit_json(&doc)
}
