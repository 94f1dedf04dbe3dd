use std::time::Instant;

use dpcd::baselines::{greedy_peel, random_search};
use dpcd::graph::density;
use dpcd::objectives::make_dense_subgraph;
use dpcd::{dpcd_solve, Objective};
use serde_json::{json, Value};

use super::{config_json, load_graph, report_json, rng_json};
use crate::args::{Format, SubgraphArgs, SOLVE_DEFAULTS};
use crate::failure::{CliResult, Failure};
use crate::output::{emit_csv, emit_json, num};

pub fn run(a: &SubgraphArgs) -> CliResult {
    let cfg = a.solver.config(&SOLVE_DEFAULTS)?;
    if a.k == 0 {
        return Err(Failure::usage("k must be ≥ 1"));
    }
    if a.baselines && a.random_samples == 0 {
        return Err(Failure::usage("--random-samples must be ≥ 1"));
    }
    let loaded = load_graph(&a.graph)?;
    let g = &loaded.graph;
    let n = g.node_count();
    if a.k > n {
        return Err(Failure::usage(format!("k must be ≤ n = {n}, got {}", a.k)));
    }
    let (f, c) = make_dense_subgraph(g, a.k)?;

    let clock = Instant::now();
    let report = dpcd_solve(&f, c, &cfg)?;
    let dpcd_time = clock.elapsed().as_secs_f64();
    let best = &report.best_point;
    let mut results = vec![json!({
        "method": "dpcd",
        "density": f.density_of(best),
        "objective": f.restored_value(best),
        "solver": report_json(&report),
        "support": best.support(),
    })];
    let mut timings = json!({ "dpcd": dpcd_time });

    if a.baselines {
        let clock = Instant::now();
        let peel = greedy_peel(g, a.k)?;
        timings["greedy_peel"] = json!(clock.elapsed().as_secs_f64());
        results.push(json!({
            "method": "greedy_peel",
            "density": density(g, &peel.support())?,
            "objective": f.restored_value(&peel),
            "support": peel.support(),
        }));
        let clock = Instant::now();
        let rs = random_search(&f, c, a.random_samples, a.solver.seed)?;
        timings["random_search"] = json!(clock.elapsed().as_secs_f64());
        results.push(json!({
            "method": "random_search",
            "density": f.density_of(&rs.optimum),
            "objective": f.restored_value(&rs.optimum),
            "samples": a.random_samples,
            "support": rs.optimum.support(),
        }));
    }

    if a.solver.format == Some(Format::Csv) {
        let rows: Vec<Vec<String>> = results
            .iter()
            .map(|r| {
                let solver = &r["solver"];
                let field = |v: &Value| if v.is_null() { String::new() } else { v.to_string() };
                vec![
                    r["method"].as_str().unwrap_or_default().to_string(),
                    num(r["density"].as_f64().unwrap_or(f64::NAN)),
                    num(r["objective"].as_f64().unwrap_or(f64::NAN)),
                    field(&solver["iterations"]),
                    field(&solver["flips"]),
                    field(&solver["converged"]),
                ]
            })
            .collect();
        return emit_csv(&["method", "density", "objective", "iterations", "flips", "converged"], &rows);
    }

    let mut doc = json!({
        "command": "subgraph",
        "config": config_json(&cfg),
        "dropped_constant": f.constant_offset(),
        "graph": {
            "duplicates_merged": loaded.stats.duplicates_merged,
            "edges": g.edge_count(),
            "nodes": n,
            "path": a.graph.display().to_string(),
            "self_loops_dropped": loaded.stats.self_loops_dropped,
            "total_weight": g.total_weight(),
            "zero_weights_dropped": loaded.stats.zero_weights_dropped,
        },
        "k": a.k,
        "results": results,
        "rng": rng_json(a.solver.seed),
    });
    if a.solver.timings {
        doc["timings"] = timings;
    }
    emit_json(&doc)
}
