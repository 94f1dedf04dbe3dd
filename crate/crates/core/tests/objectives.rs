mod common;

use itertools::Itertools;
use rand::Rng;

use common::{check_gradient, interior_point, objective_families, random_graph, random_quadratic, rng};
use dpcd::baselines::exhaustive_oracle;
use dpcd::graph::{density, planted_partition};
use dpcd::objectives::{make_dense_subgraph, make_hashing_objective, make_quadratic, HashingProblem};
use dpcd::{BinaryVector, Matrix, Objective};

#[test]
fn every_family_matches_finite_differences() {
    for seed in 0..3 {
        let mut r = rng(seed + 40);
        for (name, f) in objective_families(seed) {
            for _ in 0..100 {
                let x = interior_point(f.dimension(), &mut r);
                if let Err(e) = check_gradient(f.as_ref(), &x) {
                    panic!("{name}: {e}");
                }
            }
        }
    }
}

#[test]
fn random_8x8_quadratic_gradient() {
    let mut r = rng(8);
    let f = random_quadratic(8, &mut r);
    for _ in 0..100 {
        check_gradient(&f, &interior_point(8, &mut r)).unwrap();
    }
}

#[test]
fn quadratic_lipschitz_bounds_empirical_ratio() {
    let mut r = rng(9);
    for n in [2, 5, 10, 20] {
        let f = random_quadratic(n, &mut r);
        let l = f.lipschitz().unwrap();
        for _ in 0..1000 {
            let y: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..=1.0)).collect();
            let z: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..=1.0)).collect();
            let (gy, gz) = (f.gradient(&y), f.gradient(&z));
            let num = gy.iter().zip(&gz).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            let den = y.iter().zip(&z).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            assert!(num <= l * den * (1.0 + 1e-12), "ratio {} above {l}", num / den);
        }
    }
}

fn laplacian_6() -> Matrix {
    let edges = [(0, 1, 1.0), (1, 2, 2.0), (2, 0, 1.0), (2, 3, 0.5), (3, 4, 1.0), (4, 5, 3.0), (5, 3, 1.0)];
    let mut l = Matrix::zeros(6, 6);
    for (i, j, w) in edges {
        let s = l.as_mut_slice();
        s[i * 6 + j] -= w;
        s[j * 6 + i] -= w;
        s[i * 6 + i] += w;
        s[j * 6 + j] += w;
    }
    l
}

#[test]
fn trace_loss_splits_into_column_quadratics() {
    let l = laplacian_6();
    let column = make_quadratic(l.clone(), vec![0.0; 6], 0.0).unwrap();
    let r = 3;
    for mask in 0u32..(1 << 18) {
        if mask % 997 != 0 {
            continue;
        }
        let b: Vec<f64> = (0..18).map(|t| if mask >> t & 1 == 1 { 1.0 } else { -1.0 }).collect();
        let b = Matrix::from_row_major(6, r, b).unwrap();
        let lb = l.matmul(&b).unwrap();
        let trace: f64 = (0..6).flat_map(|i| (0..r).map(move |j| (i, j))).map(|(i, j)| b[(i, j)] * lb[(i, j)]).sum();
        let by_column: f64 = (0..r)
            .map(|j| {
                let col: Vec<f64> = (0..6).map(|i| b[(i, j)]).collect();
                let g = column.gradient(&col);
                for i in 0..6 {
                    assert!((g[i] - 2.0 * lb[(i, j)]).abs() < 1e-12);
                }
                column.value(&col)
            })
            .sum();
        assert!((trace - by_column).abs() < 1e-12);
    }
}

#[test]
fn hashing_layout_is_row_major() {
    // B = [[1, -1], [-1, 1], [1, 1]] flattened row by row.
    let flat = [1.0, -1.0, -1.0, 1.0, 1.0, 1.0];
    let b = Matrix::from_row_major(3, 2, flat.to_vec()).unwrap();
    let y = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
    let w = Matrix::from_rows(&[vec![0.5, -0.25], vec![1.0, 2.0]]).unwrap();
    let f = make_hashing_objective(&HashingProblem::new(y.clone(), 0.0, 2).unwrap(), &w).unwrap();
    let mut resid = b.matmul(&w).unwrap();
    for (e, t) in resid.as_mut_slice().iter_mut().zip(y.as_slice()) {
        *e -= t;
    }
    let grad = resid.matmul(&w.transpose()).unwrap();
    assert!((f.value(&flat) - 0.5 * resid.frobenius_sq()).abs() < 1e-12);
    assert_eq!(f.gradient(&flat), grad.into_vec());
    assert_eq!(b.into_vec(), flat.to_vec());
}

#[test]
fn subgraph_objective_tracks_density_on_every_support() {
    let mut r = rng(11);
    for n in [5, 9, 12, 16] {
        let g = random_graph(n, 0.35, 5, &mut r);
        for k in [1, n / 3, n / 2, n] {
            let k = k.max(1);
            let (f, _) = make_dense_subgraph(&g, k).unwrap();
            let step = if n == 16 { 7 } else { 1 };
            for support in (0..n).combinations(k).step_by(step) {
                let y = BinaryVector::from_support(n, &support).unwrap();
                let x_w_x = density(&g, &support).unwrap() * k as f64;
                let restored = f.value(&y.to_f64()) - g.total_weight();
                assert!((restored + 4.0 * x_w_x).abs() < 1e-9);
                assert!((f.density_of(&y) - x_w_x / k as f64).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn planted_reduced_instance_oracle_matches_brute_force() {
    let p = planted_partition(16, 5, 0.9, 0.15, 60).unwrap();
    for k in [3, 5, 8] {
        let (f, c) = make_dense_subgraph(&p.graph, k).unwrap();
        let oracle = exhaustive_oracle(&f, c, 20).unwrap();
        let brute = (0..16)
            .combinations(k)
            .map(|s| density(&p.graph, &s).unwrap())
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((f.density_of(&oracle.optimum) - brute).abs() < 1e-12);
    }
}
