//! End-to-end acceptance suite. Run with
//! `cargo test -p dpcd --test acceptance -- --nocapture` to see the report.

mod common;

use std::time::Instant;

use itertools::Itertools;
use rand::Rng;

use common::{one_moves, random_graph, random_quadratic, rng, FeasibilityProbe};
use dpcd::baselines::{exhaustive_oracle, greedy_peel, random_search, sgm_solve, SgmConfig};
use dpcd::graph::{density, planted_partition, PlantedGraph};
use dpcd::hashing::{
    alternating_hash, encode, evaluate_retrieval, gaussian_clusters, gaussian_matrix, HashConfig,
};
use dpcd::objectives::{make_dense_subgraph, make_shifted_separable};
use dpcd::solver::step_bound;
use dpcd::{
    dpcd_solve, dpcd_solve_from, random_feasible, value_at, BinaryVector, Constraint, Matrix, Objective,
    SolverConfig,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn separable_one_step() -> Outcome {
    let clock = Instant::now();
    let mut r = rng(101);
    let mut failures = Vec::new();
    for trial in 0..50 {
        let n = r.random_range(2..=64);
        let beta: Vec<f64> = (0..n).map(|_| r.random_range(0.01..0.99)).collect();
        let min_beta = beta.iter().cloned().fold(f64::INFINITY, f64::min);
        let f = make_shifted_separable(beta).unwrap();
        let start = random_feasible(n, Constraint::Unconstrained, r.random()).unwrap();
        let cfg = SolverConfig::lipschitz(Some(0.5 * min_beta));
        let report = dpcd_solve_from(&f, Constraint::Unconstrained, &cfg, start.clone()).unwrap();
        let optimum = BinaryVector::filled(n, -1).unwrap();
        let ones = start.count_ones();
        let updates = usize::from(ones > 0);
        let one_update = report.steps == updates && report.flips_per_iteration.first() == Some(&ones);
        if report.final_point != optimum || !one_update || report.oscillated() {
            failures.push(format!("dpcd trial {trial}"));
        }
        let sgm = sgm_solve(
            &f,
            Constraint::Unconstrained,
            &SgmConfig {
                start: Some(start),
                ..SgmConfig::default()
            },
        )
        .unwrap();
        if !sgm.oscillated() || sgm.iterations > 3 {
            failures.push(format!("sgm trial {trial}"));
        }
    }
    let secs = clock.elapsed().as_secs_f64();
    outcome(
        failures.is_empty() && secs < 1.0,
        format!("50 instances, failures {failures:?}, {secs:.3} s"),
    )
}

fn step_bounds() -> Outcome {
    let clock = Instant::now();
    let mut r = rng(202);
    let mut worst_ratio = 0.0f64;
    let mut failures = Vec::new();
    for trial in 0..100 {
        let n = r.random_range(2..=14);
        let f = random_quadratic(n, &mut r);
        let l0 = f.lipschitz().unwrap();
        let epsilon = l0 * [1e-3, 1e-2, 0.1, 1.0][trial % 4];
        let cfg = SolverConfig {
            seed: trial as u64,
            max_iterations: 10_000,
            ..SolverConfig::lipschitz(Some(epsilon)).without_neighborhood()
        };
        let report = dpcd_solve(&f, Constraint::Unconstrained, &cfg).unwrap();
        let oracle = exhaustive_oracle(&f, Constraint::Unconstrained, 20).unwrap();
        let range_bound = step_bound(&f, Constraint::Unconstrained, epsilon, Some((oracle.f_min, oracle.f_max.unwrap()))).unwrap();
        let lipschitz_bound = step_bound(&f, Constraint::Unconstrained, epsilon, None).unwrap();
        let steps = report.steps as f64;
        worst_ratio = worst_ratio.max(steps / range_bound);
        let descent_ok = report
            .value_trajectory
            .windows(2)
            .zip(&report.flips_per_iteration)
            .all(|(w, &flips)| w[0] - w[1] >= 2.0 * epsilon * flips as f64 - 1e-12);
        if !report.converged || steps > range_bound || steps > lipschitz_bound || !descent_ok {
            failures.push(trial);
        }
    }
    let secs = clock.elapsed().as_secs_f64();
    outcome(
        failures.is_empty() && secs < 60.0,
        format!("100 quadratics, failing trials {failures:?}, max steps/bound {worst_ratio:.3}, {secs:.2} s"),
    )
}

fn constraint_preservation() -> Outcome {
    let mut r = rng(303);
    let mut violations = 0;
    let mut evaluations = 0;
    for trial in 0..200 {
        let n = r.random_range(2..=64);
        let k = r.random_range(0..=n);
        let c = Constraint::ExactOnes(k);
        let cfg = SolverConfig {
            seed: trial,
            neighborhood_budget: 200,
            ..SolverConfig::default()
        };
        let report = if trial % 2 == 0 {
            let f = random_quadratic(n, &mut r);
            let probe = FeasibilityProbe::new(&f, c);
            let report = dpcd_solve(&probe, c, &cfg).unwrap();
            let (e, v) = probe.counts();
            evaluations += e;
            violations += v;
            report
        } else {
            let g = random_graph(n, 0.2, 3, &mut r);
            let (f, c) = make_dense_subgraph(&g, k).unwrap();
            let probe = FeasibilityProbe::new(&f, c);
            let report = dpcd_solve(&probe, c, &cfg).unwrap();
            let (e, v) = probe.counts();
            evaluations += e;
            violations += v;
            report
        };
        for x in [&report.final_point, &report.best_point] {
            if x.count_ones() != k {
                violations += 1;
            }
        }
    }
    outcome(
        violations == 0,
        format!("200 instances, {evaluations} evaluated points, {violations} violations"),
    )
}

fn local_optimality() -> Outcome {
    let mut r = rng(404);
    let mut failures = Vec::new();
    for trial in 0..50 {
        let n = r.random_range(2..=16);
        let f = random_quadratic(n, &mut r);
        let c = if trial % 2 == 0 {
            Constraint::Unconstrained
        } else {
            Constraint::ExactOnes(r.random_range(1..n))
        };
        let cfg = SolverConfig {
            seed: trial,
            max_iterations: 1000,
            ..SolverConfig::default()
        };
        let report = dpcd_solve(&f, c, &cfg).unwrap();
        let fx = report.final_value;
        let improvable = one_moves(&report.final_point, c)
            .iter()
            .any(|y| value_at(&f, y).unwrap() < fx - 1e-12 * fx.abs().max(1.0));
        if !report.converged || improvable {
            failures.push(trial);
        }
    }
    outcome(failures.is_empty(), format!("50 quadratics, failing trials {failures:?}"))
}

fn gradient_oracle() -> Outcome {
    let families = common::objective_families(505);
    let mut r = rng(506);
    let mut failures = Vec::new();
    for (name, f) in &families {
        for _ in 0..100 {
            let x = common::interior_point(f.dimension(), &mut r);
            if let Err(e) = common::check_gradient(f.as_ref(), &x) {
                failures.push(format!("{name}: {e}"));
                break;
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{} families x 100 points, failures {failures:?}", families.len()),
    )
}

struct SubgraphRun {
    dpcd: f64,
    peel: f64,
    random: f64,
    dpcd_value: f64,
    dpcd0_value: f64,
    dpcd_time: f64,
    dpcd0_time: f64,
}

fn subgraph_suite() -> Vec<SubgraphRun> {
    (0..20)
        .map(|seed| {
            let PlantedGraph { graph, .. } = planted_partition(500, 25, 0.5, 0.02, seed).unwrap();
            let (f, c) = make_dense_subgraph(&graph, 25).unwrap();
            let cfg = SolverConfig {
                seed,
                ..SolverConfig::default()
            };
            let full = dpcd_solve(&f, c, &cfg).unwrap();
            let zero = dpcd_solve(&f, c, &cfg.clone().without_neighborhood()).unwrap();
            let peel = greedy_peel(&graph, 25).unwrap();
            let random = random_search(&f, c, 10_000, seed).unwrap();
            SubgraphRun {
                dpcd: f.density_of(&full.best_point),
                peel: density(&graph, &peel.support()).unwrap(),
                random: f.density_of(&random.optimum),
                dpcd_value: f.restored_value(&full.best_point),
                dpcd0_value: f.restored_value(&zero.best_point),
                dpcd_time: full.wall_time,
                dpcd0_time: zero.wall_time,
            }
        })
        .collect()
}

fn dense_subgraph(runs: &[SubgraphRun], secs: f64) -> Outcome {
    let n = runs.len() as f64;
    let beats_peel = runs.iter().filter(|r| r.dpcd >= r.peel - 1e-9).count() as f64 / n;
    let beats_random = runs.iter().filter(|r| r.dpcd >= r.random - 1e-9).count() as f64 / n;
    let mean = |g: fn(&SubgraphRun) -> f64| runs.iter().map(g).sum::<f64>() / n;
    outcome(
        beats_peel >= 0.7 && beats_random >= 0.95 && secs < 120.0,
        format!(
            ">= peel on {:.0}%, >= random on {:.0}%, mean density dpcd {:.3} peel {:.3} random {:.3}, {secs:.1} s",
            100.0 * beats_peel,
            100.0 * beats_random,
            mean(|r| r.dpcd),
            mean(|r| r.peel),
            mean(|r| r.random)
        ),
    )
}

fn dpcd_vs_dpcd0(runs: &[SubgraphRun]) -> Outcome {
    let n = runs.len() as f64;
    let mean = |g: fn(&SubgraphRun) -> f64| runs.iter().map(g).sum::<f64>() / n;
    let (v, v0) = (mean(|r| r.dpcd_value), mean(|r| r.dpcd0_value));
    let (t, t0) = (mean(|r| r.dpcd_time), mean(|r| r.dpcd0_time));
    outcome(
        v <= v0 && t0 <= t,
        format!("mean objective dpcd {v:.2} vs dpcd0 {v0:.2}; mean time dpcd {t:.4} s vs dpcd0 {t0:.4} s"),
    )
}

fn hashing_quality() -> Outcome {
    let clock = Instant::now();
    let (n, d, classes, queries) = (2000, 32, 10, 200);
    let mut monotone = true;
    let mut worst_residual = 0.0f64;
    let mut margins = Vec::new();
    for r in [16, 32] {
        for seed in 0..10u64 {
            let (x, y) = gaussian_clusters(n + queries, d, classes, 0.6, 1000 + seed).unwrap();
            let split = |m: &Matrix, lo: usize, hi: usize| {
                let rows: Vec<Vec<f64>> = (lo..hi).map(|i| m.row(i).to_vec()).collect();
                Matrix::from_rows(&rows).unwrap()
            };
            let (xt, yt) = (split(&x, 0, n), split(&y, 0, n));
            let (xq, yq) = (split(&x, n, n + queries), split(&y, n, n + queries));
            let cfg = HashConfig {
                seed,
                ..HashConfig::default()
            };
            let model = alternating_hash(&xt, &yt, r, &cfg).unwrap();
            monotone &= model.loss_history.windows(2).all(|w| w[1] <= w[0]);
            worst_residual = model.w_gradient_residuals.iter().cloned().fold(worst_residual, f64::max);
            let learned = evaluate_retrieval(
                &encode(&xq, &model.p).unwrap(),
                &encode(&xt, &model.p).unwrap(),
                &yq,
                &yt,
                500,
            )
            .unwrap();
            let g = gaussian_matrix(d, r, 5000 + seed);
            let baseline =
                evaluate_retrieval(&encode(&xq, &g).unwrap(), &encode(&xt, &g).unwrap(), &yq, &yt, 500).unwrap();
            margins.push(learned.map - baseline.map);
        }
    }
    let margin = margins.iter().sum::<f64>() / margins.len() as f64;
    let secs = clock.elapsed().as_secs_f64();
    outcome(
        monotone && worst_residual <= 1e-8 && margin >= 0.05 && secs < 120.0,
        format!(
            "monotone {monotone}, max W-gradient {worst_residual:.2e}, mean MAP margin {margin:.3}, {secs:.1} s"
        ),
    )
}

fn linear_scaling() -> Outcome {
    let clock = Instant::now();
    let sizes = [2_000usize, 20_000, 200_000];
    let mut times = Vec::new();
    for &n in &sizes {
        let (x, y) = gaussian_clusters(n, 32, 10, 0.6, 77).unwrap();
        let cfg = HashConfig {
            outer_iterations: 3,
            ..HashConfig::default()
        };
        let model = alternating_hash(&x, &y, 16, &cfg).unwrap();
        let mut t = model.outer_times.clone();
        t.sort_by(f64::total_cmp);
        times.push(t[t.len() / 2]);
    }
    let xs: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
    let (slope, intercept, r2) = least_squares(&xs, &times);
    let deviation = xs
        .iter()
        .zip(&times)
        .map(|(&n, &t)| {
            let pred = slope * n + intercept;
            if pred <= 0.0 {
                f64::INFINITY
            } else {
                (t / pred).max(pred / t)
            }
        })
        .fold(0.0, f64::max);
    let secs = clock.elapsed().as_secs_f64();
    outcome(
        r2 >= 0.95 && deviation <= 2.0 && secs < 300.0,
        format!(
            "per-iteration seconds {:?}, R^2 {r2:.4}, max deviation {deviation:.2}x, {secs:.1} s",
            times.iter().map(|t| format!("{t:.4}")).collect::<Vec<_>>()
        ),
    )
}

fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - slope * a - intercept).powi(2)).sum();
    let ss_tot: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    (slope, intercept, 1.0 - ss_res / ss_tot)
}

fn reformulation() -> Outcome {
    let mut r = rng(1010);
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for n in 2..=14 {
        for _ in 0..3 {
            let g = random_graph(n, r.random_range(0.2..0.8), 4, &mut r);
            for k in 1..=n {
                let (f, c) = make_dense_subgraph(&g, k).unwrap();
                let mut best_f = Vec::new();
                let mut best_q = Vec::new();
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for support in (0..n).combinations(k) {
                    let y = BinaryVector::from_support(n, &support).unwrap();
                    debug_assert!(dpcd::constraint_check(&y, c).unwrap());
                    let fy = f.value(&y.to_f64());
                    let inside: f64 = support.iter().tuple_combinations().map(|(&i, &j)| 2.0 * g.weight(i, j)).sum();
                    if fy < lo {
                        lo = fy;
                        best_f.clear();
                    }
                    if fy == lo {
                        best_f.push(support.clone());
                    }
                    if inside > hi {
                        hi = inside;
                        best_q.clear();
                    }
                    if inside == hi {
                        best_q.push(support);
                    }
                }
                checked += 1;
                if best_f != best_q {
                    mismatches.push((n, k));
                }
            }
        }
    }
    outcome(
        mismatches.is_empty(),
        format!("{checked} (graph, k) pairs, mismatches {mismatches:?}"),
    )
}

#[test]
fn acceptance_criteria() {
    let mut results = vec![
        ("1 separable one-step convergence and SGM oscillation", separable_one_step()),
        ("2 range and Lipschitz step bounds", step_bounds()),
        ("3 constraint preservation", constraint_preservation()),
        ("4 local optimality", local_optimality()),
        ("5 gradient oracle", gradient_oracle()),
    ];
    let clock = Instant::now();
    let runs = subgraph_suite();
    let secs = clock.elapsed().as_secs_f64();
    results.push(("6 dense subgraph vs baselines", dense_subgraph(&runs, secs)));
    results.push(("7 dpcd vs dpcd-0", dpcd_vs_dpcd0(&runs)));
    results.push(("8 hashing quality", hashing_quality()));
    results.push(("9 linear scaling", linear_scaling()));
    results.push(("10 reformulation equivalence", reformulation()));

    let mut failed = Vec::new();
    for (name, o) in &results {
        println!("criterion {name}: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.push(*name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
