#![allow(dead_code)]

use std::sync::Mutex;

use dpcd::graph::SparseGraph;
use dpcd::objectives::{make_quadratic, QuadraticForm};
use dpcd::{constraint_check, BinaryVector, Constraint, Matrix, Objective, SeededRng};
use rand::Rng;

pub fn rng(seed: u64) -> SeededRng {
    dpcd::seeded_rng(seed)
}

/// Symmetric `A` and `c` with entries uniform in `[-1, 1]`.
pub fn random_quadratic(n: usize, rng: &mut SeededRng) -> QuadraticForm {
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.random_range(-1.0..=1.0);
            a.as_mut_slice()[i * n + j] = v;
            a.as_mut_slice()[j * n + i] = v;
        }
    }
    let c = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
    make_quadratic(a, c, rng.random_range(-1.0..=1.0)).unwrap()
}

/// Erdos-Renyi graph with integer weights in `1..=max_weight`.
pub fn random_graph(n: usize, p: f64, max_weight: u32, rng: &mut SeededRng) -> SparseGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                edges.push((i, j, rng.random_range(1..=max_weight) as f64));
            }
        }
    }
    SparseGraph::from_edges(n, edges).unwrap()
}

pub fn interior_point(n: usize, rng: &mut SeededRng) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-0.99..0.99)).collect()
}

/// Central finite differences against the analytic gradient.
pub fn check_gradient<O: Objective + ?Sized>(f: &O, x: &[f64]) -> Result<(), String> {
    let h = 1e-5;
    let g = f.gradient(x);
    let mut p = x.to_vec();
    for i in 0..x.len() {
        p[i] = x[i] + h;
        let up = f.value(&p);
        p[i] = x[i] - h;
        let down = f.value(&p);
        p[i] = x[i];
        let fd = (up - down) / (2.0 * h);
        let err = (fd - g[i]).abs();
        if err > 1e-8 && err > 1e-5 * g[i].abs().max(fd.abs()) {
            return Err(format!("coordinate {i}: analytic {} vs finite difference {fd}", g[i]));
        }
    }
    Ok(())
}

/// Wraps an objective and records a violation whenever `value` is asked for
/// a point outside the constraint set. Hides incremental evaluation, so every
/// point the solver looks at goes through `value`.
pub struct FeasibilityProbe<'a, O: ?Sized> {
    pub inner: &'a O,
    pub constraint: Constraint,
    pub evaluations: Mutex<usize>,
    pub violations: Mutex<usize>,
}

impl<'a, O: Objective + ?Sized> FeasibilityProbe<'a, O> {
    pub fn new(inner: &'a O, constraint: Constraint) -> Self {
        FeasibilityProbe {
            inner,
            constraint,
            evaluations: Mutex::new(0),
            violations: Mutex::new(0),
        }
    }

    pub fn counts(&self) -> (usize, usize) {
        (*self.evaluations.lock().unwrap(), *self.violations.lock().unwrap())
    }
}

impl<O: Objective + ?Sized> Objective for FeasibilityProbe<'_, O> {
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn value(&self, x: &[f64]) -> f64 {
        *self.evaluations.lock().unwrap() += 1;
        let feasible = BinaryVector::from_signs(x)
            .ok()
            .filter(|b| b.to_f64() == x)
            .map(|b| constraint_check(&b, self.constraint).unwrap())
            .unwrap_or(false);
        if !feasible {
            *self.violations.lock().unwrap() += 1;
        }
        self.inner.value(x)
    }

    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        self.inner.gradient_into(x, out)
    }

    fn lipschitz(&self) -> Option<f64> {
        self.inner.lipschitz()
    }
}

/// All points reachable by one flip (unconstrained) or one swap of a `+1`
/// with a `-1` (constrained).
pub fn one_moves(x: &BinaryVector, c: Constraint) -> Vec<BinaryVector> {
    let n = x.len();
    let mut out = Vec::new();
    match c {
        Constraint::Unconstrained => {
            for i in 0..n {
                let mut y = x.clone();
                y.flip(i);
                out.push(y);
            }
        }
        Constraint::ExactOnes(_) => {
            for i in (0..n).filter(|&i| x.get(i) == 1) {
                for j in (0..n).filter(|&j| x.get(j) == -1) {
                    let mut y = x.clone();
                    y.flip_all(&[i, j]);
                    out.push(y);
                }
            }
        }
    }
    out
}

/// One small random instance of every objective family.
pub fn objective_families(seed: u64) -> Vec<(&'static str, Box<dyn Objective>)> {
    use dpcd::objectives::*;
    use dpcd::CsrMatrix;

    let mut r = rng(seed);
    let dense = random_quadratic(8, &mut r);
    let mut triplets = Vec::new();
    for i in 0..12 {
        for j in i..12 {
            if r.random_bool(0.3) {
                let v = r.random_range(-2.0..2.0);
                triplets.push((i, j, v));
                if i != j {
                    triplets.push((j, i, v));
                }
            }
        }
    }
    let sparse = make_sparse_quadratic(
        CsrMatrix::from_triplets(12, &triplets).unwrap(),
        (0..12).map(|_| r.random_range(-1.0..1.0)).collect(),
        0.5,
    )
    .unwrap();
    let separable = make_shifted_separable((0..9).map(|_| r.random_range(0.01..0.99)).collect()).unwrap();
    let graph = random_graph(10, 0.4, 3, &mut r);
    let (subgraph, _) = make_dense_subgraph(&graph, 4).unwrap();

    let labels = Matrix::from_row_major(6, 4, (0..24).map(|_| r.random_range(0.0..1.0)).collect()).unwrap();
    let problem = HashingProblem::new(labels, 0.3, 3).unwrap();
    let w = Matrix::from_row_major(3, 4, (0..12).map(|_| r.random_range(-1.0..1.0)).collect()).unwrap();
    let hashing = make_hashing_objective(&problem, &w).unwrap();

    let x = Matrix::from_row_major(5, 3, (0..15).map(|_| r.random_range(-1.0..1.0)).collect()).unwrap();
    let target = x.matmul(&x.transpose()).unwrap();
    let affinity = make_affinity_objective(&AffinityProblem {
        target,
        scale: 0.7,
        code_length: 3,
    })
    .unwrap();

    vec![
        ("dense quadratic", Box::new(dense)),
        ("sparse quadratic", Box::new(sparse)),
        ("shifted separable", Box::new(separable)),
        ("dense subgraph", Box::new(subgraph)),
        ("supervised hashing", Box::new(hashing)),
        ("affinity", Box::new(affinity)),
    ]
}
