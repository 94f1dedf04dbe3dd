use std::time::Instant;

use dpcd::baselines::{greedy_peel, random_search, sgm_solve, SgmConfig};
use dpcd::graph::planted_partition;
use dpcd::hashing::{alternating_hash, gaussian_clusters, HashConfig};
use dpcd::objectives::{make_dense_subgraph, make_quadratic};
use dpcd::{dpcd_solve, value_at, Constraint, SolverConfig};
use serde_json::json;

use super::quad::random_instance;
use crate::args::{BenchArgs, Format, SOLVE_DEFAULTS};
use crate::failure::{CliResult, Failure};
use crate::output::{emit_csv, emit_json, num};

const METHODS: [&str; 5] = ["dpcd", "dpcd0", "sgm", "greedy", "random"];
const RANDOM_SAMPLES: usize = 10_000;
const QUADRATIC_N: usize = 200;

struct Row {
    instance: String,
    method: &'static str,
    value: f64,
    time: f64,
}

fn parse_methods(list: &str) -> CliResult<Vec<&'static str>> {
    let mut out = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let m = METHODS
            .iter()
            .find(|m| **m == name)
            .ok_or_else(|| Failure::usage(format!("unknown method {name:?}; expected one of {}", METHODS.join(","))))?;
        if !out.contains(m) {
            out.push(*m);
        }
    }
    if out.is_empty() {
        return Err(Failure::usage("method list is empty"));
    }
    Ok(out)
}

fn timed<T>(run: impl FnOnce() -> dpcd::Result<T>) -> dpcd::Result<(T, f64)> {
    let clock = Instant::now();
    let v = run()?;
    Ok((v, clock.elapsed().as_secs_f64()))
}

pub fn run(a: &BenchArgs) -> CliResult {
    let methods = parse_methods(&a.methods)?;
    let cfg = a.solver.config(&SOLVE_DEFAULTS)?;
    if a.k == 0 || a.k > a.n {
        return Err(Failure::usage(format!("need 1 ≤ k ≤ n, got k = {} and n = {}", a.k, a.n)));
    }
    if a.scaling.contains(&0) {
        return Err(Failure::usage("scaling sizes must be ≥ 1"));
    }
    let mut rows = Vec::new();

    for s in 0..a.seeds {
        let seed = a.solver.seed.wrapping_add(s);
        let run_cfg = SolverConfig { seed, ..cfg.clone() };
        let g = planted_partition(a.n, a.k, 0.5, 0.02, seed)?.graph;
        let (f, c) = make_dense_subgraph(&g, a.k)?;
        let instance = format!("planted-n{}-k{}-s{seed}", a.n, a.k);
        for &m in &methods {
            let (value, time) = match m {
                "dpcd" => timed(|| dpcd_solve(&f, c, &run_cfg)).map(|(r, t)| (f.restored_value(&r.best_point), t))?,
                "dpcd0" => timed(|| dpcd_solve(&f, c, &run_cfg.clone().without_neighborhood()))
                    .map(|(r, t)| (f.restored_value(&r.best_point), t))?,
                "greedy" => timed(|| greedy_peel(&g, a.k)).map(|(x, t)| (f.restored_value(&x), t))?,
                "random" => timed(|| random_search(&f, c, RANDOM_SAMPLES, seed))
                    .map(|(o, t)| (f.restored_value(&o.optimum), t))?,
                _ => continue,
            };
            rows.push(Row { instance: instance.clone(), method: m, value, time });
        }

        let (am, lin) = random_instance(QUADRATIC_N, seed);
        let q = make_quadratic(am, lin, 0.0)?;
        let c = Constraint::Unconstrained;
        let instance = format!("quadratic-n{QUADRATIC_N}-s{seed}");
        for &m in &methods {
            let (value, time) = match m {
                "dpcd" => timed(|| dpcd_solve(&q, c, &run_cfg)).map(|(r, t)| (r.best_value, t))?,
                "dpcd0" => timed(|| dpcd_solve(&q, c, &run_cfg.clone().without_neighborhood())).map(|(r, t)| (r.best_value, t))?,
                "sgm" => timed(|| sgm_solve(&q, c, &SgmConfig { seed, ..SgmConfig::default() }))
                    .map(|(r, t)| (value_at(&q, &r.best_point).unwrap_or(r.best_value), t))?,
                "random" => timed(|| random_search(&q, c, RANDOM_SAMPLES, seed)).map(|(o, t)| (o.optimal_value, t))?,
                _ => continue,
            };
            rows.push(Row { instance: instance.clone(), method: m, value, time });
        }
    }

    if !a.no_scaling && methods.contains(&"dpcd") {
        for &n in &a.scaling {
            let (x, y) = gaussian_clusters(n, 32, 10, 0.6, a.solver.seed)?;
            let hcfg = HashConfig {
                outer_iterations: 3,
                seed: a.solver.seed,
                solver: SolverConfig { max_iterations: 20, ..cfg.clone() },
                ..HashConfig::default()
            };
            let model = alternating_hash(&x, &y, 16, &hcfg)?;
            let mut times = model.outer_times.clone();
            times.sort_by(f64::total_cmp);
            rows.push(Row {
                instance: format!("hash-scaling-n{n}"),
                method: "dpcd",
                value: *model.loss_history.last().expect("loss recorded"),
                time: times[times.len() / 2],
            });
        }
    }

    if a.solver.format == Some(Format::Json) {
        let doc = json!({
            "command": "bench",
            "rows": rows.iter().map(|r| json!({
                "instance": r.instance,
                "method": r.method,
                "time_s": r.time,
                "value": r.value,
            })).collect::<Vec<_>>(),
        });
        return emit_json(&doc);
    }
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![r.instance.clone(), r.method.to_string(), num(r.value), format!("{:.6}", r.time)])
        .collect();
    emit_csv(&["instance", "method", "value", "time_s"], &table)
}
