use std::cmp::Reverse;
use std::collections::BinaryHeap;

use ordered_float::OrderedFloat;

use crate::binary::BinaryVector;
use crate::error::{DpcdError, Result};
use crate::graph::SparseGraph;

/// Greedy peeling for densest-k-subgraph.
///
/// Repeatedly deletes the vertex of minimum weighted degree in the remaining
/// subgraph until `k` vertices are left. Among equal degrees the highest id
/// goes first, so lower ids survive. Returns the +-1 indicator of survivors.
pub fn greedy_peel(w: &SparseGraph, k: usize) -> Result<BinaryVector> {
    let n = w.node_count();
    if k == 0 || k > n {
        return Err(DpcdError::domain(format!("need 1 <= k <= n = {n}, got k = {k}")));
    }
    let mut degree = w.weighted_degrees();
    let mut alive = vec![true; n];
    let mut heap: BinaryHeap<Reverse<(OrderedFloat<f64>, Reverse<usize>)>> = degree
        .iter()
        .enumerate()
        .map(|(v, &d)| Reverse((OrderedFloat(d), Reverse(v))))
        .collect();
    let mut remaining = n;
    while remaining > k {
        let Reverse((OrderedFloat(d), Reverse(v))) = heap.pop().expect("heap holds every live vertex");
        if !alive[v] || d != degree[v] {
            continue;
        }
        alive[v] = false;
        remaining -= 1;
        for (u, wt) in w.neighbors(v) {
            if alive[u] {
                degree[u] -= wt;
                heap.push(Reverse((OrderedFloat(degree[u]), Reverse(u))));
            }
        }
    }
    let survivors: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    BinaryVector::from_support(n, &survivors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_keeps_everything() {
        let g = SparseGraph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        assert_eq!(greedy_peel(&g, 3).unwrap().support(), vec![0, 1, 2]);
    }

    #[test]
    fn star_keeps_center_and_lowest_leaf() {
        let g = SparseGraph::from_edges(6, (1..6).map(|l| (0, l, 1.0))).unwrap();
        assert_eq!(greedy_peel(&g, 2).unwrap().support(), vec![0, 1]);
    }

    #[test]
    fn k_equal_n_is_identity() {
        let g = SparseGraph::from_edges(4, [(0, 1, 1.0)]).unwrap();
        assert_eq!(greedy_peel(&g, 4).unwrap().count_ones(), 4);
    }

    #[test]
    fn domain() {
        let g = SparseGraph::from_edges(3, [(0, 1, 1.0)]).unwrap();
        assert!(greedy_peel(&g, 0).is_err());
        assert!(greedy_peel(&g, 4).is_err());
    }

    #[test]
    fn finds_a_planted_clique() {
        let p = crate::graph::planted_partition(100, 8, 1.0, 0.03, 4).unwrap();
        for k in [1, 5, 8, 20] {
            assert_eq!(greedy_peel(&p.graph, k).unwrap().count_ones(), k);
        }
        assert_eq!(greedy_peel(&p.graph, 8).unwrap().support(), p.block);
    }
}
